#include "detform/solver.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace detform {

namespace {

constexpr int kBootstrapSubsteps = 10;

std::vector<double> mode_eigenvalues(const Grid& g, double nu) {
    // nu * lambda(k) with lambda = kappa0^2 |k|^2 (Stokes operator spectrum)
    std::vector<double> lam(g.size());
    const double k0sq = g.kappa0() * g.kappa0();
    for (int i1 = 0; i1 < g.n_modes; ++i1) {
        const double k1 = g.wavenumber(i1);
        for (int i2 = 0; i2 < g.n_modes; ++i2) {
            const double k2 = g.wavenumber(i2);
            lam[static_cast<size_t>(i1) * g.n_modes + i2] = nu * k0sq * (k1 * k1 + k2 * k2);
        }
    }
    return lam;
}

size_t steps_for(double duration, double dt, const char* what) {
    const double x = duration / dt;
    const double r = std::round(x);
    if (r < 0 || std::abs(x - r) > 1e-9 * std::max(1.0, std::abs(x)))
        throw std::invalid_argument(std::string(what) + ": duration must be a multiple of dt");
    return static_cast<size_t>(r);
}

void check_finite(const SpectralField& w, double s) {
    double sum = 0.0;
    for (const auto& c : w.coeffs) sum += std::norm(c);
    if (!std::isfinite(sum)) {
        std::ostringstream msg;
        msg << "solver: nonfinite state at s = " << s;
        throw std::runtime_error(msg.str());
    }
}

} // namespace

ReferenceProblem make_reference_problem(const Grid& grid) {
    if (grid.dealias_cutoff < 5)
        throw std::invalid_argument("make_reference_problem: grid cannot hold the |k|^2 = 25 shell");
    ReferenceProblem prob{SpectralField(grid), SpectralField(grid)};
    prob.omega_star.at(3, 4) = Complex{24.0, 36.0};
    prob.omega_star.at(-3, -4) = Complex{24.0, -36.0};
    prob.omega_star.at(5, 0) = Complex{60.0, 84.0};
    prob.omega_star.at(-5, 0) = Complex{60.0, -84.0};
    prob.phi = prob.omega_star;
    prob.phi *= 25.0;
    return prob;
}

SpectralField nse_rhs(const SpectralTransform& transform, const SpectralField& omega,
                      const SpectralField& phi, double /*nu*/) {
    (void)transform;
    SpectralField out = nonlinear_term(omega);
    out *= -1.0;
    out += phi;
    return out;
}

Ab3Integrator::Ab3Integrator(const SolverConfig& cfg, const SpectralField* phi)
    : cfg_(cfg), phi_(phi) {
    if (cfg_.dt <= 0.0) throw std::invalid_argument("SolverConfig: dt must be positive");
    if (cfg_.scheme != Scheme::AB3_IF)
        throw std::invalid_argument("SolverConfig: unknown scheme");
    if (phi_ && !(phi_->grid == cfg_.grid))
        throw std::invalid_argument("Ab3Integrator: force grid mismatch");

    const auto lam = mode_eigenvalues(cfg_.grid, cfg_.nu);
    const size_t m = lam.size();
    decay1_.resize(m);
    decay2_.resize(m);
    decay3_.resize(m);
    sub_decay_.resize(m);
    force_dt_.assign(m, Complex{});
    sub_force_.assign(m, Complex{});
    const double h = cfg_.dt / kBootstrapSubsteps;
    for (size_t i = 0; i < m; ++i) {
        decay1_[i] = std::exp(-lam[i] * cfg_.dt);
        decay2_[i] = decay1_[i] * decay1_[i];
        decay3_[i] = decay2_[i] * decay1_[i];
        sub_decay_[i] = std::exp(-lam[i] * h);
        if (phi_ && lam[i] > 0.0) {
            // Exact variation-of-constants increment for the constant force:
            // a forced steady state stays an exact fixed point of the update.
            force_dt_[i] = phi_->coeffs[i] * (-std::expm1(-lam[i] * cfg_.dt)) / lam[i];
            sub_force_[i] = phi_->coeffs[i] * (-std::expm1(-lam[i] * h)) / lam[i];
        }
    }
}

void Ab3Integrator::check_cfl(double max_speed, double s) const {
    const double cfl = cfg_.dt * max_speed / cfg_.grid.dx();
    cfl_max_ = std::max(cfl_max_, cfl);
    if (cfl >= cfg_.cfl_limit) {
        std::ostringstream msg;
        msg << "CFL violation at s = " << s << ": dt*speed/dx = " << cfl << " >= "
            << cfg_.cfl_limit << " (speed " << max_speed << ", dt " << cfg_.dt << ")";
        throw std::runtime_error(msg.str());
    }
}

void Ab3Integrator::run(SpectralField& w, double s0, size_t n_steps, const ExplicitRhs& rhs,
                        const StepCallback& callback) {
    if (!(w.grid == cfg_.grid)) throw std::invalid_argument("Ab3Integrator: state grid mismatch");
    const Grid& g = cfg_.grid;
    const double dt = cfg_.dt;
    const size_t m = w.coeffs.size();
    double speed = 0.0;

    if (callback) callback(0, s0, w);
    if (n_steps == 0) return;

    SpectralField bufA(g), bufB(g), bufC(g), scratch(g), pred(g);
    SpectralField* hist_new = &bufA; // N at the newest time
    SpectralField* hist_mid = &bufB;
    SpectralField* hist_old = &bufC;

    // N(w0, s0)
    rhs(w, s0, *hist_old, speed);
    check_cfl(speed, s0);

    // Step 1: integrating-factor Euler substeps (predictor), IF-trapezoid
    // corrector.  The corrector keeps the one-time startup error at the
    // scheme's global order.
    {
        const double h = dt / kBootstrapSubsteps;
        pred.coeffs = w.coeffs;
        double s = s0;
        for (int j = 0; j < kBootstrapSubsteps; ++j) {
            const SpectralField* nj = hist_old;
            if (j > 0) {
                rhs(pred, s, scratch, speed);
                check_cfl(speed, s);
                nj = &scratch;
            }
            for (size_t i = 0; i < m; ++i)
                pred.coeffs[i] =
                    sub_decay_[i] * (pred.coeffs[i] + h * nj->coeffs[i]) + sub_force_[i];
            s += h;
        }
        rhs(pred, s0 + dt, *hist_mid, speed);
        check_cfl(speed, s0 + dt);
        for (size_t i = 0; i < m; ++i)
            w.coeffs[i] = decay1_[i] * w.coeffs[i] + force_dt_[i] +
                          dt * 0.5 * (decay1_[i] * hist_old->coeffs[i] + hist_mid->coeffs[i]);
        check_finite(w, s0 + dt);
        if (callback) callback(1, s0 + dt, w);
        rhs(w, s0 + dt, *hist_mid, speed);
        check_cfl(speed, s0 + dt);
    }
    if (n_steps == 1) return;

    // Step 2: two-term Adams-Bashforth.
    for (size_t i = 0; i < m; ++i)
        w.coeffs[i] = decay1_[i] * w.coeffs[i] + force_dt_[i] +
                      dt * (1.5 * decay1_[i] * hist_mid->coeffs[i] -
                            0.5 * decay2_[i] * hist_old->coeffs[i]);
    check_finite(w, s0 + 2 * dt);
    if (callback) callback(2, s0 + 2 * dt, w);
    if (n_steps == 2) return;
    rhs(w, s0 + 2 * dt, *hist_new, speed);
    check_cfl(speed, s0 + 2 * dt);

    // AB3 main loop.
    constexpr double b0 = 23.0 / 12.0, b1 = -16.0 / 12.0, b2 = 5.0 / 12.0;
    for (size_t step = 3; step <= n_steps; ++step) {
        for (size_t i = 0; i < m; ++i)
            w.coeffs[i] = decay1_[i] * w.coeffs[i] + force_dt_[i] +
                          dt * (b0 * decay1_[i] * hist_new->coeffs[i] +
                                b1 * decay2_[i] * hist_mid->coeffs[i] +
                                b2 * decay3_[i] * hist_old->coeffs[i]);
        const double s = s0 + static_cast<double>(step) * dt;
        check_finite(w, s);
        if (callback) callback(step, s, w);
        if (step < n_steps) {
            SpectralField* recycled = hist_old;
            hist_old = hist_mid;
            hist_mid = hist_new;
            hist_new = recycled;
            rhs(w, s, *hist_new, speed);
            check_cfl(speed, s);
        }
    }
}

Trajectory solve_nse(const SpectralField& omega0, const ReferenceProblem& prob,
                     const SolverConfig& cfg, double s_end, double stride) {
    const size_t n_steps = steps_for(s_end, cfg.dt, "solve_nse");
    const size_t every = steps_for(stride, cfg.dt, "solve_nse stride");
    if (every == 0) throw std::invalid_argument("solve_nse: stride must be >= dt");

    SpectralField w = omega0;
    truncate_to_box(w, cfg.grid.dealias_cutoff);
    enforce_reality(w);

    Trajectory traj;
    traj.grid = cfg.grid;
    traj.s_start = 0.0;
    traj.stride = stride;
    traj.frames.reserve(n_steps / every + 1);

    AdvectionOperator advection(cfg.grid);
    Ab3Integrator stepper(cfg, &prob.phi);
    auto rhs = [&](const SpectralField& state, double, SpectralField& out, double& max_speed) {
        advection.apply(state, out, &max_speed);
        out *= -1.0;
    };
    stepper.run(w, 0.0, n_steps, rhs, [&](size_t step, double, const SpectralField& state) {
        if (step % every == 0) traj.frames.push_back(state);
    });
    return traj;
}

Grid observation_grid(int cutoff, double domain_length) {
    int n = 4;
    while (n / 3 < cutoff || n / 2 - 1 < cutoff) n *= 2;
    return make_grid(n, domain_length);
}

namespace {

// First dominant autocorrelation peak of a scalar series sampled at interval
// `dt`; 0 if none stands out.
double autocorrelation_period(const std::vector<double>& series, double dt) {
    const size_t n = series.size();
    if (n < 16) return 0.0;
    // subsample to keep the direct O(N * maxlag) sum affordable
    const size_t target = 32768;
    const size_t q = std::max<size_t>(1, n / target);
    std::vector<double> x;
    x.reserve(n / q + 1);
    for (size_t i = 0; i < n; i += q) x.push_back(series[i]);
    const size_t nn = x.size();
    double mean = 0.0;
    for (double v : x) mean += v;
    mean /= static_cast<double>(nn);
    for (double& v : x) v -= mean;

    const size_t maxlag = nn / 2;
    std::vector<double> c(maxlag + 1, 0.0);
    for (size_t lag = 0; lag <= maxlag; ++lag) {
        double sum = 0.0;
        for (size_t i = 0; i + lag < nn; ++i) sum += x[i] * x[i + lag];
        c[lag] = sum / static_cast<double>(nn - lag);
    }
    if (c[0] <= 0.0) return 0.0;

    size_t first_neg = 0;
    for (size_t lag = 1; lag <= maxlag; ++lag)
        if (c[lag] < 0.0) {
            first_neg = lag;
            break;
        }
    if (first_neg == 0) return 0.0;

    size_t best = 0;
    for (size_t lag = first_neg; lag <= maxlag; ++lag)
        if (best == 0 || c[lag] > c[best]) best = lag;
    if (best == 0 || c[best] < 0.1 * c[0]) return 0.0;

    // parabolic refinement around the peak
    double lag_refined = static_cast<double>(best);
    if (best > 0 && best < maxlag) {
        const double denom = c[best - 1] - 2.0 * c[best] + c[best + 1];
        if (denom < 0.0) lag_refined += 0.5 * (c[best - 1] - c[best + 1]) / denom;
    }
    return lag_refined * static_cast<double>(q) * dt;
}

// sup_s |v(s+P) - v(s)| / sup_s |v(s)| over the trajectory's window.
double recurrence_at(const Trajectory& v, double period, double norm_sup) {
    const double s_max = v.s_end() - period;
    if (s_max <= 0.0 || norm_sup <= 0.0) return 1.0;
    const int samples = 400;
    const double step = s_max / samples;
    SpectralField a(v.grid), b(v.grid);
    double worst = 0.0;
    for (int i = 0; i <= samples; ++i) {
        const double s = v.s_start + i * step;
        v.sample_into(s, a);
        v.sample_into(s + period, b);
        worst = std::max(worst, l2_distance(a, b));
    }
    return worst / norm_sup;
}

} // namespace

OrbitData generate_orbit(const ReferenceProblem& prob, const SolverConfig& cfg,
                         const OrbitOptions& opts) {
    OrbitData orbit;
    orbit.dt = cfg.dt;

    SpectralField w = prob.omega_star;
    w.at(1, 1) += Complex{opts.perturb_amplitude, 0.0};
    w.at(-1, -1) += Complex{opts.perturb_amplitude, 0.0};
    enforce_reality(w);
    truncate_to_box(w, cfg.grid.dealias_cutoff);

    AdvectionOperator advection(cfg.grid);
    auto rhs = [&](const SpectralField& state, double, SpectralField& out, double& max_speed) {
        advection.apply(state, out, &max_speed);
        out *= -1.0;
    };

    // spin-up (transient discarded)
    {
        Ab3Integrator stepper(cfg, &prob.phi);
        stepper.run(w, 0.0, steps_for(opts.spin_up, cfg.dt, "generate_orbit spin_up"), rhs);
    }

    const Grid obs = observation_grid(opts.projector_cutoff, cfg.grid.domain_length);
    const size_t n_steps = steps_for(opts.window, cfg.dt, "generate_orbit window");
    const size_t frame_every = steps_for(opts.frame_stride, cfg.dt, "generate_orbit frame_stride");
    const size_t dense_steps =
        std::min(n_steps, steps_for(std::min(opts.dense_window, opts.window), cfg.dt,
                                    "generate_orbit dense_window"));

    orbit.full.grid = cfg.grid;
    orbit.full.s_start = 0.0;
    orbit.full.stride = opts.frame_stride;
    orbit.projected.grid = obs;
    orbit.projected.s_start = 0.0;
    orbit.projected.stride = cfg.dt;
    orbit.projected.frames.reserve(dense_steps + 1);
    orbit.observable.reserve(n_steps + 1);

    Ab3Integrator stepper(cfg, &prob.phi);
    stepper.run(w, 0.0, n_steps, rhs, [&](size_t step, double, const SpectralField& state) {
        orbit.observable.push_back(state.at(1, 1).real());
        if (step % frame_every == 0) orbit.full.frames.push_back(state);
        if (step <= dense_steps) {
            SpectralField proj = state;
            truncate_to_box(proj, opts.projector_cutoff);
            orbit.projected.frames.push_back(restrict_to_grid(proj, obs));
        }
    });

    // steady-state (degenerate) detection: all late frames coincide
    {
        const auto& frames = orbit.full.frames;
        const size_t half = frames.size() / 2;
        double worst = 0.0;
        for (size_t i = half; i + 1 < frames.size(); ++i)
            worst = std::max(worst, l2_distance(frames[i], frames.back()));
        const double scale = std::max(1.0, l2_norm(frames.back()));
        if (worst < 1e-6 * scale) {
            orbit.degenerate = true;
            orbit.period = 0.0;
            orbit.recurrence_error = 0.0;
            return orbit;
        }
    }

    double norm_sup = 0.0;
    for (const auto& f : orbit.projected.frames) norm_sup = std::max(norm_sup, l2_norm(f));

    double candidate = autocorrelation_period(orbit.observable, cfg.dt);
    const double window_cap = 0.9 * orbit.projected.s_end();
    if (candidate <= 0.0 || candidate > window_cap) {
        // no clear autocorrelation peak: coarse scan of the recurrence error
        double best_p = 0.0, best_r = 1.0;
        const int scan = 400;
        for (int i = 1; i <= scan; ++i) {
            const double p = window_cap * i / scan;
            const double r = recurrence_at(orbit.projected, p, norm_sup);
            if (r < best_r) {
                best_r = r;
                best_p = p;
            }
        }
        candidate = best_p;
    }
    if (candidate <= 0.0) {
        orbit.period = 0.0;
        orbit.recurrence_error = 1.0;
        return orbit;
    }

    // golden-section refinement of the recurrence error near the candidate
    double lo = std::max(cfg.dt, 0.8 * candidate);
    double hi = std::min(window_cap, 1.2 * candidate);
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
    double f1 = recurrence_at(orbit.projected, x1, norm_sup);
    double f2 = recurrence_at(orbit.projected, x2, norm_sup);
    for (int it = 0; it < 60 && (hi - lo) > 1e-7; ++it) {
        if (f1 < f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - gr * (hi - lo);
            f1 = recurrence_at(orbit.projected, x1, norm_sup);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + gr * (hi - lo);
            f2 = recurrence_at(orbit.projected, x2, norm_sup);
        }
    }
    orbit.period = 0.5 * (lo + hi);
    orbit.recurrence_error = recurrence_at(orbit.projected, orbit.period, norm_sup);
    return orbit;
}

} // namespace detform
