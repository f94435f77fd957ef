// param_ode.hpp — the one-dimensional characteristic parametric determining
// form: convex-combination trajectories between v0 and Ju*, the sampled
// residual function g(theta), exact piecewise-linear integration of the
// theta/eta dynamics, and convergence-rate fitting.

#pragma once

#include "detform/nudging.hpp"

namespace detform {

struct ConvexPair {
    Trajectory v0;      // initial trajectory, framewise in the projected space
    Trajectory ju_star; // constant-in-s projected steady state
};

// Validates grids/windows/strides and projector invariance.
ConvexPair make_convex_pair(Trajectory v0, Trajectory ju_star, int cutoff);

// theta*v0 + (1-theta)*ju_star framewise, theta in [0,1].
Trajectory convex_trajectory(double theta, const ConvexPair& pair);

struct PhiSample {
    double theta = 0.0;
    double g = 0.0; // |v_theta - JW(v_theta)|_{X0}, nonnegative
};

struct PhiTable {
    std::vector<PhiSample> samples; // strictly increasing theta, includes 0 and 1

    double floor() const { return samples.empty() ? 0.0 : samples.front().g; } // g at theta = 0
    // piecewise-linear interpolant of g
    double interpolate(double theta) const;
};

PhiTable make_phi_table(std::vector<PhiSample> samples);

// Uniform theta grid over [0,1] including both endpoints.
std::vector<double> uniform_thetas(int count);

// g(theta) = residual(convex_trajectory(theta)) for each requested theta;
// evaluations are independent and distributed over `workers` threads, merged
// by index (deterministic).
PhiTable sample_phi(const ConvexPair& pair, const std::vector<double>& thetas,
                    const ReferenceProblem& prob, const NudgingConfig& cfg, unsigned workers = 0);

// Extra samples in [lo, hi], spaced logarithmically in distance from
// `anchor` (anchor = 0 gives plain log spacing; set it to a detected
// interior zero to cluster samples toward it).  Existing samples are kept
// bit-identical; duplicates are dropped.
PhiTable refine_theta_grid(const PhiTable& table, const ConvexPair& pair,
                           const ReferenceProblem& prob, const NudgingConfig& cfg, double lo,
                           double hi, int count, double anchor = 0.0, unsigned workers = 0);

enum class OdeVariant {
    theta_squared, // dtheta/dtau = -theta g(theta)^2   (the determining form)
    theta_linear,  // dtheta/dtau = -theta g(theta)     (reduced-power variant)
    eta            // deta/dtau   = -g(eta)             (exponential-rate variant)
};

const char* variant_name(OdeVariant variant);
OdeVariant variant_from_name(const std::string& name);

struct ParamPath {
    std::vector<double> taus;   // increasing, starts at 0
    std::vector<double> values; // nonincreasing, within [0,1], starts at 1
    OdeVariant variant = OdeVariant::theta_squared;
    double theta_bar_estimate = 0.0; // grid zero of g the flow heads to
    bool reached_zero = false;       // stopped at the zero before tau_end
    bool constant_path = false;      // g(1) at the floor: v0 is a steady state
};

// Crossing time from theta = 1 down to the first sample (walking down)
// whose g lies within floor_multiple times the table floor; past that point
// the flow is floor-dominated, so this is a practical tau_end for rate
// experiments.  Returns +inf when no finite suggestion exists.
double suggest_tau_end(const PhiTable& table, OdeVariant variant, double floor_multiple = 10.0);

// Integrates dtheta/dtau from theta(0) = 1 with g replaced by its
// piecewise-linear interpolant.  Affine subinterval dynamics are solved in
// closed form; the theta_squared time integral falls back to adaptive
// quadrature (rtol 1e-12) where the closed form is ill-conditioned.
// Integration stops at tau_end or on reaching the target zero of g.
// Negative g values are clamped to zero up front.
ParamPath integrate_param_ode(const PhiTable& table, OdeVariant variant, double tau_end);

enum class RateCase { to_zero, to_interior };

struct RateFit {
    double exponent = 0.0; // log-log slope (algebraic) or d log/d tau (eta)
    double r2 = 0.0;
    double rms_residual = 0.0;
    double window_lo = 0.0, window_hi = 0.0;
    size_t points = 0;
};

// Least-squares rate over the final decade of tau:
//  - algebraic variants: slope of log(value - theta_bar) vs log(tau)
//    (theta_bar = 0 for to_zero);
//  - eta variant: slope of log(value - eta_bar) vs tau.
// Throws if the limit estimate is still drifting (to_interior with
// last-decade drift above 1e-3) or the window is too thin.
RateFit fit_rate(const ParamPath& path, RateCase rate_case);

} // namespace detform
