// trajectory.hpp — time-sampled sequences of spectral fields and the
// trajectory-space norms built on them.

#pragma once

#include <vector>

#include "detform/spectral_ops.hpp"

namespace detform {

struct Trajectory {
    Grid grid;
    double s_start = 0.0;
    double stride = 0.0; // storage interval
    std::vector<SpectralField> frames;

    double s_end() const { return s_start + stride * (frames.empty() ? 0 : frames.size() - 1); }
    size_t count() const { return frames.size(); }
    double frame_time(size_t i) const { return s_start + stride * i; }

    // Piecewise-linear sample at time s (clamped to the stored window).
    SpectralField sample(double s) const;

    // Writes the interpolated frame into out (no allocation when shapes match).
    void sample_into(double s, SpectralField& out) const;
};

Trajectory make_constant_trajectory(const SpectralField& f, double s_start, double stride,
                                    size_t count);

// sup over stored frames of |v(s) - w(s)|_L2 / (nu * kappa0).  Windows,
// strides and grids must agree.
double x0_distance(const Trajectory& v, const Trajectory& w, double nu = 1.0);

// X0 norm of a single trajectory: sup_s |v(s)| / (nu * kappa0).
double x0_norm(const Trajectory& v, double nu = 1.0);

// Diagnostic counterpart of the derivative term in the trajectory-space
// norm: sup_s |v'(s)| / (nu^2 kappa0^3), with v' by centered finite
// differences on the stored frames (one-sided at the ends).  Not used by any
// dynamics; exposed for inspection only.
double x_norm_derivative_sup(const Trajectory& v, double nu = 1.0);

// Frames shifted in time: result(s) = v(s + sigma); sigma must be a multiple
// of the stride (frame-exact shift), and the window shrinks accordingly.
Trajectory shift_trajectory(const Trajectory& v, double sigma);

// Restriction to [a, b] (both must lie on the frame grid).
Trajectory restrict_window(const Trajectory& v, double a, double b);

// Framewise modal projection.
Trajectory project_trajectory(const ModalProjector& proj, const Trajectory& v);

// True if every frame is supported in the projector box.
bool trajectory_in_projected_space(const Trajectory& v, int cutoff);

} // namespace detform
