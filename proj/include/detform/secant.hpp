// secant.hpp — locate characteristic determining values (zeros of the
// residual along the segment) by the secant method.  Newton-Raphson is
// deliberately not offered: differentiability of the underlying map is not
// known, only Lipschitz continuity.

#pragma once

#include <functional>
#include <string>

#include "detform/param_ode.hpp"

namespace detform {

struct SecantRow {
    int i = 0;
    double eta = 0.0;
    double residual = 0.0;
};

struct SecantTrace {
    std::vector<SecantRow> rows;
    bool converged = false;
    bool stagnated = false;
    double eta_bar = 0.0;
    std::string message;
};

// Secant iteration on a nonnegative residual g that does not change sign.
// Updates are clamped to [0,1]; since plain secant assumes a sign change, a
// safeguard rejects any step that increases the residual more than tenfold
// and bisects toward the lower-residual iterate instead.  Terminates when
// the residual drops below tol or after max_iter accepted iterates.
SecantTrace secant_solve(const std::function<double(double)>& g, double eta0, double eta1,
                         double tol, int max_iter);

// The paper's experiment: g(eta) = residual of eta*v0 + (1-eta)*Ju*.
SecantTrace secant_solve(const ConvexPair& pair, double eta0, double eta1, double tol,
                         int max_iter, const ReferenceProblem& prob, const NudgingConfig& cfg);

} // namespace detform
