#include "detform/secant.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace detform {

SecantTrace secant_solve(const std::function<double(double)>& g, double eta0, double eta1,
                         double tol, int max_iter) {
    if (eta0 == eta1) throw std::invalid_argument("secant_solve: eta0 and eta1 must differ");
    if (eta0 < 0.0 || eta0 > 1.0 || eta1 < 0.0 || eta1 > 1.0)
        throw std::invalid_argument("secant_solve: initial iterates must lie in [0,1]");
    if (!(tol > 0.0)) throw std::invalid_argument("secant_solve: tol must be positive");

    SecantTrace trace;
    auto accept = [&](double eta, double value) {
        trace.rows.push_back({static_cast<int>(trace.rows.size()), eta, value});
    };

    double e_prev = eta0, g_prev = g(eta0);
    accept(e_prev, g_prev);
    if (g_prev < tol) {
        trace.converged = true;
        trace.eta_bar = e_prev;
        return trace;
    }

    double e_cur = eta1, g_cur = g(eta1);
    accept(e_cur, g_cur);

    while (!trace.converged && static_cast<int>(trace.rows.size()) <= max_iter) {
        if (g_cur < tol) {
            trace.converged = true;
            break;
        }
        if (g_cur == g_prev) {
            trace.stagnated = true;
            trace.message = "secant stagnated (flat residual); refine the window or tolerance";
            break;
        }
        double cand = e_cur - g_cur * (e_cur - e_prev) / (g_cur - g_prev);
        cand = std::clamp(cand, 0.0, 1.0);
        double g_cand = g(cand);

        // safeguard for the one-sided residual: reject blow-ups, bisect
        // toward the better of the current iterates
        const double e_best = g_cur <= g_prev ? e_cur : e_prev;
        const double g_ref = std::min(g_cur, g_prev);
        int retries = 0;
        while (g_cand > 10.0 * g_ref && retries++ < 8) {
            cand = 0.5 * (cand + e_best);
            g_cand = g(cand);
        }

        e_prev = e_cur;
        g_prev = g_cur;
        e_cur = cand;
        g_cur = g_cand;
        accept(e_cur, g_cur);
        if (g_cur < tol) trace.converged = true;
    }

    // report the best iterate seen
    const auto best = std::min_element(
        trace.rows.begin(), trace.rows.end(),
        [](const SecantRow& a, const SecantRow& b) { return a.residual < b.residual; });
    trace.eta_bar = best->eta;
    if (!trace.converged && !trace.stagnated)
        trace.message = "iteration budget exhausted before reaching tol";
    return trace;
}

SecantTrace secant_solve(const ConvexPair& pair, double eta0, double eta1, double tol,
                         int max_iter, const ReferenceProblem& prob, const NudgingConfig& cfg) {
    return secant_solve(
        [&](double eta) { return residual(convex_trajectory(eta, pair), prob, cfg); }, eta0, eta1,
        tol, max_iter);
}

} // namespace detform
