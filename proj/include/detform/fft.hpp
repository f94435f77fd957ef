// fft.hpp — FFTW-backed 2D complex transforms between coefficient and
// physical space.  Forward (physical -> spectral) carries 1/n^2 so spectral
// values are Fourier-series coefficients; inverse is the plain synthesis sum.
//
// A SpectralTransform owns its FFTW plans and work buffers and is NOT safe
// for concurrent use; give each worker thread its own instance.  Plan
// creation is internally serialized (the FFTW planner is not thread-safe).

#pragma once

#include <vector>

#include "detform/field.hpp"

namespace detform {

class SpectralTransform {
  public:
    explicit SpectralTransform(const Grid& grid);
    ~SpectralTransform();

    SpectralTransform(const SpectralTransform&) = delete;
    SpectralTransform& operator=(const SpectralTransform&) = delete;

    const Grid& grid() const { return grid_; }

    // Synthesis: physical-space samples f(x_j) from coefficients (unnormalized
    // inverse DFT).  Output values of a reality-symmetric field are real up to
    // round-off; callers take .real().
    void to_physical(const SpectralField& f, std::vector<Complex>& phys) const;

    // Analysis: coefficients from physical samples, scaled by 1/n^2.
    void to_spectral(const std::vector<Complex>& phys, SpectralField& f) const;

  private:
    Grid grid_;
    void* plan_forward_ = nullptr;  // physical -> spectral
    void* plan_inverse_ = nullptr;  // spectral -> physical
    mutable std::vector<Complex> in_, out_;
};

} // namespace detform
