// spectral_ops.hpp — vorticity-form operators for the 2D periodic
// Navier-Stokes core: Biot-Savart velocity recovery, dealiased advection,
// and the norms formed from coefficients.

#pragma once

#include <utility>

#include "detform/fft.hpp"

namespace detform {

// Biot-Savart inversion: uhat = i kperp omegahat / (kappa0 |k|^2) with
// kperp = (-k2, k1); zero at k = 0.  The result is divergence-free by
// construction (k . uhat = 0 mode-wise).
std::pair<SpectralField, SpectralField> velocity_from_vorticity(const SpectralField& omega);

// H1 norm of the velocity induced by vorticity omega.  Equals |omega|_L2
// exactly for divergence-free 2D fields, so this is just the coefficient
// norm.
double h1_velocity_norm(const SpectralField& omega);

// Stateful dealiased u.grad(omega) evaluator: one FFT set plus workspaces,
// reused across steps.  Not safe for concurrent use; one per solver/thread.
class AdvectionOperator {
  public:
    explicit AdvectionOperator(const Grid& grid);

    // out = dealiased spectral u.grad(omega); reality and mean-zero restored
    // exactly.  max_speed (optional) receives the largest |u| component seen
    // in physical space, for the CFL check.
    void apply(const SpectralField& omega, SpectralField& out, double* max_speed = nullptr);

    const Grid& grid() const { return transform_.grid(); }

  private:
    SpectralTransform transform_;
    SpectralField u1_, u2_, wx_, wy_;
    std::vector<Complex> pu1_, pu2_, pwx_, pwy_, prod_;
};

// Pure-function form of the advection term (tests, oracles, one-off use).
SpectralField nonlinear_term(const SpectralField& omega, double* max_speed = nullptr);

} // namespace detform
