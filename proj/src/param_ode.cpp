#include "detform/param_ode.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "detform/sweep.hpp"

namespace detform {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_pair_compatible(const Trajectory& a, const Trajectory& b) {
    if (!(a.grid == b.grid)) throw std::invalid_argument("ConvexPair: grid mismatch");
    if (a.frames.size() != b.frames.size() || a.stride != b.stride || a.s_start != b.s_start)
        throw std::invalid_argument("ConvexPair: window/stride mismatch");
}

} // namespace

ConvexPair make_convex_pair(Trajectory v0, Trajectory ju_star, int cutoff) {
    require_pair_compatible(v0, ju_star);
    if (!trajectory_in_projected_space(v0, cutoff) ||
        !trajectory_in_projected_space(ju_star, cutoff))
        throw std::invalid_argument("ConvexPair: trajectories must be in the projected space");
    return ConvexPair{std::move(v0), std::move(ju_star)};
}

Trajectory convex_trajectory(double theta, const ConvexPair& pair) {
    if (!(theta >= 0.0 && theta <= 1.0))
        throw std::invalid_argument("convex_trajectory: theta must lie in [0,1]");
    Trajectory out = pair.ju_star;
    for (size_t i = 0; i < out.frames.size(); ++i) {
        auto& dst = out.frames[i].coeffs;
        const auto& src = pair.v0.frames[i].coeffs;
        for (size_t j = 0; j < dst.size(); ++j)
            dst[j] = theta * src[j] + (1.0 - theta) * dst[j];
    }
    return out;
}

double PhiTable::interpolate(double theta) const {
    if (samples.empty()) throw std::logic_error("PhiTable: empty");
    if (theta <= samples.front().theta) return samples.front().g;
    if (theta >= samples.back().theta) return samples.back().g;
    auto it = std::upper_bound(samples.begin(), samples.end(), theta,
                               [](double t, const PhiSample& s) { return t < s.theta; });
    const PhiSample& hi = *it;
    const PhiSample& lo = *(it - 1);
    const double t = (theta - lo.theta) / (hi.theta - lo.theta);
    return (1.0 - t) * lo.g + t * hi.g;
}

PhiTable make_phi_table(std::vector<PhiSample> samples) {
    if (samples.size() < 2) throw std::invalid_argument("PhiTable: need at least two samples");
    for (size_t i = 1; i < samples.size(); ++i)
        if (!(samples[i].theta > samples[i - 1].theta))
            throw std::invalid_argument("PhiTable: thetas must be strictly increasing");
    if (samples.front().theta != 0.0 || samples.back().theta != 1.0)
        throw std::invalid_argument("PhiTable: must include theta = 0 and theta = 1");
    for (auto& s : samples)
        if (s.g < 0.0) s.g = 0.0; // numerical negatives clamp to zero
    return PhiTable{std::move(samples)};
}

std::vector<double> uniform_thetas(int count) {
    if (count < 2) throw std::invalid_argument("uniform_thetas: need at least two samples");
    std::vector<double> thetas(count);
    for (int i = 0; i < count; ++i) thetas[i] = static_cast<double>(i) / (count - 1);
    thetas.front() = 0.0;
    thetas.back() = 1.0;
    return thetas;
}

PhiTable sample_phi(const ConvexPair& pair, const std::vector<double>& thetas,
                    const ReferenceProblem& prob, const NudgingConfig& cfg, unsigned workers) {
    if (thetas.size() < 2 || thetas.front() != 0.0 || thetas.back() != 1.0)
        throw std::invalid_argument("sample_phi: thetas must be sorted and include 0 and 1");
    std::function<PhiSample(size_t)> eval = [&](size_t i) -> PhiSample {
        const double theta = thetas[i];
        try {
            return PhiSample{theta, residual(convex_trajectory(theta, pair), prob, cfg)};
        } catch (const std::exception& e) {
            std::ostringstream msg;
            msg << "sample_phi: evaluation at theta = " << theta << " failed: " << e.what();
            throw std::runtime_error(msg.str());
        }
    };
    return make_phi_table(parallel_map<PhiSample>(thetas.size(), workers, eval));
}

PhiTable refine_theta_grid(const PhiTable& table, const ConvexPair& pair,
                           const ReferenceProblem& prob, const NudgingConfig& cfg, double lo,
                           double hi, int count, double anchor, unsigned workers) {
    if (!(lo > anchor && hi > lo) || hi > 1.0 || lo < 0.0)
        throw std::invalid_argument("refine_theta_grid: need anchor < lo < hi <= 1");
    if (count < 1) throw std::invalid_argument("refine_theta_grid: count must be positive");

    const double d_lo = lo - anchor, d_hi = hi - anchor;
    std::vector<double> fresh;
    fresh.reserve(count);
    for (int i = 0; i < count; ++i) {
        const double t = count == 1 ? 0.0 : static_cast<double>(i) / (count - 1);
        const double theta = anchor + d_lo * std::pow(d_hi / d_lo, t);
        bool exists = false;
        for (const auto& s : table.samples)
            if (s.theta == theta) {
                exists = true;
                break;
            }
        if (!exists) fresh.push_back(theta);
    }
    std::sort(fresh.begin(), fresh.end());
    fresh.erase(std::unique(fresh.begin(), fresh.end()), fresh.end());

    std::function<PhiSample(size_t)> eval = [&](size_t i) -> PhiSample {
        return PhiSample{fresh[i], residual(convex_trajectory(fresh[i], pair), prob, cfg)};
    };
    auto extra = parallel_map<PhiSample>(fresh.size(), workers, eval);

    std::vector<PhiSample> merged = table.samples;
    merged.insert(merged.end(), extra.begin(), extra.end());
    std::sort(merged.begin(), merged.end(),
              [](const PhiSample& a, const PhiSample& b) { return a.theta < b.theta; });
    return make_phi_table(std::move(merged));
}

const char* variant_name(OdeVariant variant) {
    switch (variant) {
        case OdeVariant::theta_squared: return "theta2";
        case OdeVariant::theta_linear: return "theta1";
        case OdeVariant::eta: return "eta";
    }
    return "?";
}

OdeVariant variant_from_name(const std::string& name) {
    if (name == "theta2" || name == "theta_squared") return OdeVariant::theta_squared;
    if (name == "theta1" || name == "theta_linear") return OdeVariant::theta_linear;
    if (name == "eta") return OdeVariant::eta;
    throw std::invalid_argument("unknown ODE variant: " + name);
}

// ---------------------------------------------------------------------------
// Per-subinterval dynamics with g(theta) = a*theta + b, g >= 0 on the
// subinterval.  theta_after advances the flow by dtau from theta_from;
// tau_to_reach returns the (possibly infinite) time to flow down to
// theta_to.  Closed forms are used wherever they are well-conditioned; the
// theta_squared time integral otherwise falls back to adaptive quadrature.

namespace {

struct Affine {
    double a = 0.0, b = 0.0;
    double g(double theta) const { return a * theta + b; }
};

double rhs_speed(OdeVariant variant, double theta, double g) {
    switch (variant) {
        case OdeVariant::theta_squared: return theta * g * g;
        case OdeVariant::theta_linear: return theta * g;
        case OdeVariant::eta: return g;
    }
    return 0.0;
}

// Adaptive 15-point Gauss-Legendre for smooth positive integrands.
template <typename F>
double adaptive_gl15(const F& f, double lo, double hi, double rtol, int depth = 0) {
    static const double xs[8] = {0.0000000000000000, 0.2011940939974345, 0.3941513470775634,
                                 0.5709721726085388, 0.7244177313601700, 0.8482065834104272,
                                 0.9372733924007059, 0.9879925180204854};
    static const double ws[8] = {0.2025782419255613, 0.1984314853271116, 0.1861610000155622,
                                 0.1662692058169939, 0.1395706779261543, 0.1071592204671719,
                                 0.0703660474881081, 0.0307532419961173};
    auto gl = [&](double a, double b) {
        const double c = 0.5 * (a + b), h = 0.5 * (b - a);
        double sum = ws[0] * f(c);
        for (int i = 1; i < 8; ++i) sum += ws[i] * (f(c - h * xs[i]) + f(c + h * xs[i]));
        return sum * h;
    };
    const double whole = gl(lo, hi);
    const double mid = 0.5 * (lo + hi);
    const double split = gl(lo, mid) + gl(mid, hi);
    if (depth > 48 || std::abs(split - whole) <= rtol * std::abs(split)) return split;
    return adaptive_gl15(f, lo, mid, rtol, depth + 1) + adaptive_gl15(f, mid, hi, rtol, depth + 1);
}

double theta_after(OdeVariant variant, const Affine& c, double theta_from, double dtau);

double tau_to_reach(OdeVariant variant, const Affine& c, double theta_from, double theta_to) {
    const double g_from = c.g(theta_from), g_to = c.g(theta_to);
    if (theta_to >= theta_from) return 0.0;
    if (rhs_speed(variant, theta_to, g_to) <= 0.0) return kInf;

    switch (variant) {
        case OdeVariant::eta: {
            if (g_to <= 0.0) return kInf;
            if (c.a == 0.0) return c.b > 0.0 ? (theta_from - theta_to) / c.b : kInf;
            return std::log(g_from / g_to) / c.a;
        }
        case OdeVariant::theta_linear: {
            if (theta_to <= 0.0 || g_to <= 0.0) return kInf;
            if (c.b == 0.0) return (1.0 / theta_to - 1.0 / theta_from) / c.a;
            // r = theta/g evolves as r' = -b r
            const double r_from = theta_from / g_from, r_to = theta_to / g_to;
            const double ratio = r_from / r_to;
            if (std::abs(c.b) * theta_from >= 1e-6 * g_from)
                return std::log(ratio) / c.b;
            break; // ill-conditioned: root-find below
        }
        case OdeVariant::theta_squared: {
            if (theta_to <= 0.0 || g_to <= 0.0) return kInf;
            if (c.b == 0.0)
                return (1.0 / (theta_to * theta_to) - 1.0 / (theta_from * theta_from)) /
                       (2.0 * c.a * c.a);
            if (c.a == 0.0) return std::log(theta_from / theta_to) / (c.b * c.b);
            return adaptive_gl15(
                [&](double t) {
                    const double g = c.g(t);
                    return 1.0 / (t * g * g);
                },
                theta_to, theta_from, 1e-12);
        }
    }

    // generic monotone fallback: bracket in tau, then bisect on theta_after
    double lo = 0.0;
    double hi = (theta_from - theta_to) / rhs_speed(variant, theta_to, std::max(g_to, 1e-300));
    if (!std::isfinite(hi) || hi <= 0.0) hi = 1.0;
    while (theta_after(variant, c, theta_from, hi) > theta_to) {
        hi *= 2.0;
        if (hi > 1e300) return kInf;
    }
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (theta_after(variant, c, theta_from, mid) > theta_to)
            lo = mid;
        else
            hi = mid;
        if (hi - lo <= 1e-15 * std::max(1.0, hi)) break;
    }
    return 0.5 * (lo + hi);
}

double theta_after(OdeVariant variant, const Affine& c, double theta_from, double dtau) {
    if (dtau <= 0.0) return theta_from;
    switch (variant) {
        case OdeVariant::eta: {
            if (c.a == 0.0) return theta_from - c.b * dtau;
            // theta + b/a decays exponentially (argument capped against overflow)
            const double em = std::expm1(std::min(-c.a * dtau, 700.0));
            return theta_from + (c.g(theta_from) / c.a) * em;
        }
        case OdeVariant::theta_linear: {
            if (c.b == 0.0) return theta_from / (1.0 + c.a * theta_from * dtau);
            if (c.a != 0.0 && -c.b * dtau > 700.0) return -c.b / c.a; // settled on the g-zero
            const double em = std::expm1(-c.b * dtau);
            return c.b * theta_from * (1.0 + em) / (c.b - c.a * theta_from * em);
        }
        case OdeVariant::theta_squared: {
            if (c.b == 0.0)
                return theta_from /
                       std::sqrt(1.0 + 2.0 * c.a * c.a * theta_from * theta_from * dtau);
            if (c.a == 0.0) return theta_from * std::exp(-c.b * c.b * dtau);
            // invert the monotone time integral on [limit, theta_from];
            // when g vanishes at -b/a below theta_from the flow cannot cross it
            double lo = 0.0, hi = theta_from;
            if (c.a > 0.0 && c.b < 0.0) lo = std::max(lo, -c.b / c.a);
            for (int it = 0; it < 200; ++it) {
                const double mid = 0.5 * (lo + hi);
                const double t = tau_to_reach(OdeVariant::theta_squared, c, theta_from, mid);
                if (t < dtau)
                    hi = mid;
                else
                    lo = mid;
                if (hi - lo <= 1e-15 * std::max(hi, 1e-30)) break;
            }
            return 0.5 * (lo + hi);
        }
    }
    return theta_from;
}

} // namespace

double suggest_tau_end(const PhiTable& table, OdeVariant variant, double floor_multiple) {
    const auto& samples = table.samples;
    const double stop_level = floor_multiple * table.floor();
    if (samples.back().g <= stop_level) return kInf;
    double tau_acc = 0.0;
    for (size_t j = samples.size() - 1; j > 0; --j) {
        const PhiSample& hi = samples[j];
        const PhiSample& lo = samples[j - 1];
        if (lo.g <= stop_level) {
            // stop at the first floor-dominated sample on the way down
            Affine c;
            c.a = (hi.g - lo.g) / (hi.theta - lo.theta);
            c.b = hi.g - c.a * hi.theta;
            return tau_acc + tau_to_reach(variant, c, hi.theta, lo.theta);
        }
        Affine c;
        c.a = (hi.g - lo.g) / (hi.theta - lo.theta);
        c.b = hi.g - c.a * hi.theta;
        tau_acc += tau_to_reach(variant, c, hi.theta, lo.theta);
        if (!std::isfinite(tau_acc)) return kInf;
    }
    return tau_acc;
}

ParamPath integrate_param_ode(const PhiTable& table, OdeVariant variant, double tau_end) {
    if (!(tau_end > 0.0)) throw std::invalid_argument("integrate_param_ode: tau_end must be > 0");
    const auto& samples = table.samples;
    const double threshold = 3.0 * table.floor(); // zero = g within 3x the theta=0 floor

    ParamPath path;
    path.variant = variant;

    // v0 itself at the fixed-point floor: the path is constant
    if (samples.back().g <= threshold) {
        path.taus = {0.0, tau_end};
        path.values = {1.0, 1.0};
        path.theta_bar_estimate = 1.0;
        path.constant_path = true;
        return path;
    }

    // target: largest grid zero below 1 (theta = 0 always qualifies)
    size_t target_idx = 0;
    for (size_t i = samples.size() - 1; i-- > 0;)
        if (samples[i].g <= threshold) {
            target_idx = i;
            break;
        }
    path.theta_bar_estimate = samples[target_idx].theta;

    // subinterval crossing times from theta = 1 down to the target
    struct Leg {
        size_t lo_idx;
        double tau_enter;
        Affine c;
    };
    std::vector<Leg> legs;
    double tau_acc = 0.0;
    double tau_reach = kInf;
    for (size_t j = samples.size() - 1; j > target_idx && tau_acc < tau_end; --j) {
        const PhiSample& hi = samples[j];
        const PhiSample& lo = samples[j - 1];
        Affine c;
        c.a = (hi.g - lo.g) / (hi.theta - lo.theta);
        c.b = hi.g - c.a * hi.theta;
        legs.push_back({j - 1, tau_acc, c});
        const double t = tau_to_reach(variant, c, hi.theta, lo.theta);
        tau_acc = tau_acc + t;
        if (j - 1 == target_idx && std::isfinite(tau_acc)) tau_reach = tau_acc;
    }
    const double tau_stop = std::min(tau_end, tau_reach);

    // output grid: subinterval crossings plus a geometric tau grid
    std::vector<double> taus;
    taus.push_back(0.0);
    for (const auto& leg : legs)
        if (leg.tau_enter > 0.0 && leg.tau_enter < tau_stop) taus.push_back(leg.tau_enter);
    const int geo_points = 600;
    const double geo_min = tau_stop * 1e-9;
    for (int i = 0; i <= geo_points; ++i)
        taus.push_back(geo_min * std::pow(tau_stop / geo_min, static_cast<double>(i) / geo_points));
    std::sort(taus.begin(), taus.end());
    taus.erase(std::unique(taus.begin(), taus.end(),
                           [](double x, double y) { return y - x <= 1e-15 * std::max(1.0, y); }),
               taus.end());
    if (taus.back() > tau_stop) taus.back() = tau_stop;

    path.taus.reserve(taus.size());
    path.values.reserve(taus.size());
    size_t leg_idx = 0;
    for (double tau : taus) {
        while (leg_idx + 1 < legs.size() && legs[leg_idx + 1].tau_enter <= tau) ++leg_idx;
        const Leg& leg = legs[leg_idx];
        const double enter_theta = samples[leg.lo_idx + 1].theta;
        double value = theta_after(variant, leg.c, enter_theta, tau - leg.tau_enter);
        value = std::clamp(value, samples[leg.lo_idx].theta, enter_theta);
        path.taus.push_back(tau);
        path.values.push_back(value);
    }
    if (tau_reach <= tau_end) {
        path.reached_zero = true;
        if (path.taus.back() < tau_reach) {
            path.taus.push_back(tau_reach);
            path.values.push_back(samples[target_idx].theta);
        }
    }
    return path;
}

RateFit fit_rate(const ParamPath& path, RateCase rate_case) {
    if (path.taus.size() < 8) throw std::runtime_error("fit_rate: path too short");
    const double tau_hi = path.taus.back();
    const double tau_lo = tau_hi / 10.0;
    const double limit = rate_case == RateCase::to_zero ? 0.0 : path.theta_bar_estimate;

    // refuse when the limit is still unresolved over the final decade
    if (rate_case == RateCase::to_interior) {
        double theta_at_lo = path.values.front();
        for (size_t i = 0; i < path.taus.size(); ++i)
            if (path.taus[i] >= tau_lo) {
                theta_at_lo = path.values[i];
                break;
            }
        const double drift = theta_at_lo - path.values.back();
        if (drift > 1e-3)
            throw std::runtime_error(
                "fit_rate: theta_bar estimate unstable (last-decade drift > 1e-3); "
                "increase tau_end or refine the theta grid");
    }

    const bool semilog = path.variant == OdeVariant::eta ||
                         (path.variant == OdeVariant::theta_linear &&
                          rate_case == RateCase::to_interior);

    std::vector<double> xs, ys;
    for (size_t i = 0; i < path.taus.size(); ++i) {
        const double tau = path.taus[i];
        if (tau < tau_lo || tau <= 0.0) continue;
        const double d = path.values[i] - limit;
        if (d <= 0.0) continue;
        xs.push_back(semilog ? tau : std::log(tau));
        ys.push_back(std::log(d));
    }
    if (xs.size() < 8) throw std::runtime_error("fit_rate: too few usable points in the final decade");

    const size_t n = xs.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t i = 0; i < n; ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
    }
    const double denom = n * sxx - sx * sx;
    if (denom == 0.0) throw std::runtime_error("fit_rate: degenerate abscissa");
    const double slope = (n * sxy - sx * sy) / denom;
    const double intercept = (sy - slope * sx) / n;

    double ss_res = 0, ss_tot = 0;
    const double ymean = sy / n;
    for (size_t i = 0; i < n; ++i) {
        const double r = ys[i] - (slope * xs[i] + intercept);
        ss_res += r * r;
        ss_tot += (ys[i] - ymean) * (ys[i] - ymean);
    }

    RateFit fit;
    fit.exponent = slope;
    fit.r2 = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
    fit.rms_residual = std::sqrt(ss_res / n);
    fit.window_lo = tau_lo;
    fit.window_hi = tau_hi;
    fit.points = n;
    return fit;
}

} // namespace detform
