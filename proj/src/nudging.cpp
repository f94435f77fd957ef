#include "detform/nudging.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace detform {

namespace {

struct BoxModeMap {
    // matching coefficient indices inside the projector box
    std::vector<size_t> solver_idx;
    std::vector<size_t> driver_idx;
};

BoxModeMap build_box_map(const Grid& solver_grid, const Grid& driver_grid, int cutoff) {
    BoxModeMap map;
    map.solver_idx.reserve((2 * cutoff + 1) * (2 * cutoff + 1) - 1);
    map.driver_idx.reserve(map.solver_idx.capacity());
    for (int k1 = -cutoff; k1 <= cutoff; ++k1)
        for (int k2 = -cutoff; k2 <= cutoff; ++k2) {
            if (k1 == 0 && k2 == 0) continue;
            map.solver_idx.push_back(static_cast<size_t>(solver_grid.index_of(k1)) *
                                         solver_grid.n_modes +
                                     solver_grid.index_of(k2));
            map.driver_idx.push_back(static_cast<size_t>(driver_grid.index_of(k1)) *
                                         driver_grid.n_modes +
                                     driver_grid.index_of(k2));
        }
    return map;
}

} // namespace

NudgedRun solve_nudged(const Trajectory& v, const ReferenceProblem& prob,
                       const NudgingConfig& cfg, WStorage storage, double store_stride,
                       double diag_stride) {
    if (!(cfg.s1 > 0.0 && cfg.s1 < cfg.s2))
        throw std::invalid_argument("NudgingConfig: need 0 < s1 < s2");
    if (cfg.mu < 0.0) throw std::invalid_argument("NudgingConfig: mu must be nonnegative");
    if (v.frames.empty()) throw std::invalid_argument("solve_nudged: empty driving trajectory");
    const int cutoff = cfg.projector.cutoff;
    if (!trajectory_in_projected_space(v, cutoff))
        throw std::invalid_argument("solve_nudged: driving trajectory is not in the projected space");
    if (v.s_start > 1e-12 || v.s_end() < cfg.s2 - 1e-9)
        throw std::invalid_argument("solve_nudged: driving trajectory must cover [0, s2]");

    const SolverConfig& scfg = cfg.solver;
    const Grid& grid = scfg.grid;
    const double dt = scfg.dt;
    const double nu = scfg.nu;
    const double kappa0 = grid.kappa0();
    const double mu_eff = cfg.mu * nu * kappa0 * kappa0;
    const size_t n_steps = static_cast<size_t>(std::round(cfg.s2 / dt));
    if (std::abs(n_steps * dt - cfg.s2) > 1e-9)
        throw std::invalid_argument("solve_nudged: s2 must be a multiple of dt");
    const size_t s1_step = static_cast<size_t>(std::ceil(cfg.s1 / dt - 1e-9));

    const BoxModeMap box = build_box_map(grid, v.grid, cutoff);
    SpectralField v_now(v.grid);

    NudgedRun run;
    size_t store_every = 1;
    if (storage != WStorage::None) {
        store_every = store_stride > 0.0
                          ? static_cast<size_t>(std::round(store_stride / dt))
                          : 1;
        if (store_every == 0 || std::abs(store_every * dt - (store_stride > 0 ? store_stride : dt)) > 1e-9)
            throw std::invalid_argument("solve_nudged: store_stride must be a multiple of dt");
        run.w.grid = storage == WStorage::Full ? grid : v.grid;
        run.w.stride = store_every * dt;
        run.w.s_start = s1_step * dt;
    }
    size_t diag_every = 0;
    if (diag_stride > 0.0) {
        diag_every = static_cast<size_t>(std::round(diag_stride / dt));
        if (diag_every == 0) diag_every = 1;
    }

    AdvectionOperator advection(grid);
    auto rhs = [&](const SpectralField& w, double s, SpectralField& out, double& max_speed) {
        advection.apply(w, out, &max_speed);
        out *= -1.0;
        // relaxation term acts on the projected modes only
        v.sample_into(s, v_now);
        for (size_t i = 0; i < box.solver_idx.size(); ++i) {
            const size_t si = box.solver_idx[i];
            out.coeffs[si] -= mu_eff * (w.coeffs[si] - v_now.coeffs[box.driver_idx[i]]);
        }
    };

    SpectralField observed_diff(v.grid);
    auto observed_error = [&](double s, const SpectralField& w) {
        v.sample_into(s, v_now);
        double sum = 0.0;
        for (size_t i = 0; i < box.solver_idx.size(); ++i)
            sum += std::norm(w.coeffs[box.solver_idx[i]] - v_now.coeffs[box.driver_idx[i]]);
        return std::sqrt(sum);
    };

    SpectralField w(grid); // w(0) = 0
    Ab3Integrator stepper(scfg, &prob.phi);
    stepper.run(w, 0.0, n_steps, rhs, [&](size_t step, double s, const SpectralField& state) {
        const double err = observed_error(s, state);
        if (step >= s1_step) {
            run.residual = std::max(run.residual, err);
            if (storage != WStorage::None && (step - s1_step) % store_every == 0) {
                if (storage == WStorage::Full) {
                    run.w.frames.push_back(state);
                } else {
                    SpectralField proj = state;
                    truncate_to_box(proj, cutoff);
                    run.w.frames.push_back(restrict_to_grid(proj, v.grid));
                }
            }
        }
        if (diag_every && step % diag_every == 0)
            run.diagnostics.push_back({s, err, l2_norm(state)});
    });
    run.residual /= nu * kappa0;
    run.cfl_max = stepper.cfl_max();
    return run;
}

Trajectory map_w(const Trajectory& v, const ReferenceProblem& prob, const NudgingConfig& cfg,
                 double store_stride) {
    return solve_nudged(v, prob, cfg, WStorage::Full, store_stride).w;
}

double residual(const Trajectory& v, const ReferenceProblem& prob, const NudgingConfig& cfg) {
    return solve_nudged(v, prob, cfg).residual;
}

} // namespace detform
