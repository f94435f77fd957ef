#include "detform/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace detform {

namespace {

void require_compatible(const Trajectory& v, const Trajectory& w) {
    if (!(v.grid == w.grid))
        throw std::invalid_argument("Trajectory: grid mismatch");
    if (v.frames.size() != w.frames.size() || v.stride != w.stride || v.s_start != w.s_start)
        throw std::invalid_argument("Trajectory: window/stride mismatch");
}

size_t index_on_grid(const Trajectory& v, double s, const char* what) {
    const double x = (s - v.s_start) / v.stride;
    const double r = std::round(x);
    if (std::abs(x - r) > 1e-9 * std::max(1.0, std::abs(x)) || r < 0 ||
        r >= static_cast<double>(v.frames.size()))
        throw std::invalid_argument(std::string(what) + ": time not on the stored frame grid");
    return static_cast<size_t>(r);
}

} // namespace

SpectralField Trajectory::sample(double s) const {
    SpectralField out(grid);
    sample_into(s, out);
    return out;
}

void Trajectory::sample_into(double s, SpectralField& out) const {
    if (frames.empty()) throw std::logic_error("Trajectory::sample on empty trajectory");
    if (!(out.grid == grid)) out = SpectralField(grid);
    if (frames.size() == 1 || stride == 0.0) {
        out.coeffs = frames.front().coeffs;
        return;
    }
    double x = (s - s_start) / stride;
    x = std::clamp(x, 0.0, static_cast<double>(frames.size() - 1));
    const size_t i = std::min(static_cast<size_t>(x), frames.size() - 2);
    const double t = x - static_cast<double>(i);
    const auto& a = frames[i].coeffs;
    const auto& b = frames[i + 1].coeffs;
    if (t == 0.0) {
        out.coeffs = a;
        return;
    }
    for (size_t j = 0; j < a.size(); ++j) out.coeffs[j] = (1.0 - t) * a[j] + t * b[j];
}

Trajectory make_constant_trajectory(const SpectralField& f, double s_start, double stride,
                                    size_t count) {
    Trajectory traj;
    traj.grid = f.grid;
    traj.s_start = s_start;
    traj.stride = stride;
    traj.frames.assign(count, f);
    return traj;
}

double x0_distance(const Trajectory& v, const Trajectory& w, double nu) {
    require_compatible(v, w);
    double sup = 0.0;
    for (size_t i = 0; i < v.frames.size(); ++i)
        sup = std::max(sup, l2_distance(v.frames[i], w.frames[i]));
    return sup / (nu * v.grid.kappa0());
}

double x0_norm(const Trajectory& v, double nu) {
    double sup = 0.0;
    for (const auto& f : v.frames) sup = std::max(sup, l2_norm(f));
    return sup / (nu * v.grid.kappa0());
}

double x_norm_derivative_sup(const Trajectory& v, double nu) {
    if (v.frames.size() < 2) return 0.0;
    const double h = v.stride;
    const double k0 = v.grid.kappa0();
    double sup = 0.0;
    SpectralField diff(v.grid);
    auto norm_scaled = [&](const SpectralField& a, const SpectralField& b, double denom) {
        return l2_distance(a, b) / denom;
    };
    sup = std::max(sup, norm_scaled(v.frames[1], v.frames[0], h));
    sup = std::max(sup, norm_scaled(v.frames.back(), v.frames[v.frames.size() - 2], h));
    for (size_t i = 1; i + 1 < v.frames.size(); ++i)
        sup = std::max(sup, norm_scaled(v.frames[i + 1], v.frames[i - 1], 2.0 * h));
    return sup / (nu * nu * k0 * k0 * k0);
}

Trajectory shift_trajectory(const Trajectory& v, double sigma) {
    const double steps = sigma / v.stride;
    const double r = std::round(steps);
    if (std::abs(steps - r) > 1e-9 * std::max(1.0, std::abs(steps)))
        throw std::invalid_argument("shift_trajectory: sigma must be a multiple of the stride");
    const long m = static_cast<long>(r);
    if (m < 0 || m >= static_cast<long>(v.frames.size()))
        throw std::invalid_argument("shift_trajectory: shift exceeds the stored window");
    Trajectory out;
    out.grid = v.grid;
    out.s_start = v.s_start;
    out.stride = v.stride;
    out.frames.assign(v.frames.begin() + m, v.frames.end());
    return out;
}

Trajectory restrict_window(const Trajectory& v, double a, double b) {
    const size_t ia = index_on_grid(v, a, "restrict_window");
    const size_t ib = index_on_grid(v, b, "restrict_window");
    if (ib < ia) throw std::invalid_argument("restrict_window: empty window");
    Trajectory out;
    out.grid = v.grid;
    out.s_start = v.frame_time(ia);
    out.stride = v.stride;
    out.frames.assign(v.frames.begin() + ia, v.frames.begin() + ib + 1);
    return out;
}

Trajectory project_trajectory(const ModalProjector& proj, const Trajectory& v) {
    Trajectory out = v;
    for (auto& f : out.frames) truncate_to_box(f, proj.cutoff);
    return out;
}

bool trajectory_in_projected_space(const Trajectory& v, int cutoff) {
    for (const auto& f : v.frames)
        if (!supported_in_box(f, cutoff)) return false;
    return true;
}

} // namespace detform
