// nudging.hpp — the feedback-control system behind the map W: solve the
// v-driven relaxation equation
//   dw/ds + nu*A*w + u_w.grad(w) = phi - mu*nu*kappa0^2 (J w - v)
// in vorticity form from w(0) = 0, and measure the X0 residual |v - Jw|
// concurrently over the post-relaxation window [s1, s2].

#pragma once

#include "detform/solver.hpp"

namespace detform {

struct NudgingConfig {
    double mu = 150.0;
    ModalProjector projector{5};
    double s1 = 1.0; // relaxation time; [0, s1) discarded from all norms
    double s2 = 1.5; // window end
    SolverConfig solver;
};

struct AssimilationRow {
    double s;
    double observed_error; // |v(s) - J w(s)| (H1 velocity = L2 vorticity)
    double state_norm;     // |w(s)|_L2
};

enum class WStorage { None, Projected, Full };

struct NudgedRun {
    Trajectory w;          // [s1, s2] window per the storage mode (empty for None)
    double residual = 0.0; // sup over solver steps in [s1,s2] of |v - Jw| / (nu kappa0)
    double cfl_max = 0.0;
    std::vector<AssimilationRow> diagnostics;
};

// Driving trajectory v must cover [0, s2], be framewise invariant under the
// projector, and may live on a smaller grid (observation grid); it is
// sampled piecewise-linearly at solver times when its stride differs from
// dt.  store_stride controls frame spacing for Projected/Full storage
// (0 = every step for Projected, required for Full).  diag_stride > 0 emits
// diagnostic rows over the whole run [0, s2].
NudgedRun solve_nudged(const Trajectory& v, const ReferenceProblem& prob,
                       const NudgingConfig& cfg, WStorage storage = WStorage::None,
                       double store_stride = 0.0, double diag_stride = 0.0);

// The computational surrogate for W(v): the [s1, s2] window of the nudged
// solve, stored as full fields every store_stride.
Trajectory map_w(const Trajectory& v, const ReferenceProblem& prob, const NudgingConfig& cfg,
                 double store_stride);

// |v - JW(v)|_{X0} with the sup over every solver step in [s1, s2].
double residual(const Trajectory& v, const ReferenceProblem& prob, const NudgingConfig& cfg);

} // namespace detform
