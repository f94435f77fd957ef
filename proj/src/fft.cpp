#include "detform/fft.hpp"

#include <cstring>
#include <mutex>
#include <stdexcept>

#include <fftw3.h>

namespace detform {

namespace {
// FFTW's planner mutates global state; serialize plan creation/destruction.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}
} // namespace

SpectralTransform::SpectralTransform(const Grid& grid)
    : grid_(grid), in_(grid.size()), out_(grid.size()) {
    std::lock_guard<std::mutex> lock(planner_mutex());
    const int n = grid_.n_modes;
    auto* in = reinterpret_cast<fftw_complex*>(in_.data());
    auto* out = reinterpret_cast<fftw_complex*>(out_.data());
    // FFTW_FORWARD uses exp(-i k.x): that is the analysis direction for the
    // series f(x) = sum fhat(k) exp(+i k.x).
    plan_forward_ = fftw_plan_dft_2d(n, n, in, out, FFTW_FORWARD, FFTW_ESTIMATE);
    plan_inverse_ = fftw_plan_dft_2d(n, n, in, out, FFTW_BACKWARD, FFTW_ESTIMATE);
    if (!plan_forward_ || !plan_inverse_)
        throw std::runtime_error("SpectralTransform: FFTW plan creation failed");
}

SpectralTransform::~SpectralTransform() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    if (plan_forward_) fftw_destroy_plan(static_cast<fftw_plan>(plan_forward_));
    if (plan_inverse_) fftw_destroy_plan(static_cast<fftw_plan>(plan_inverse_));
}

void SpectralTransform::to_physical(const SpectralField& f, std::vector<Complex>& phys) const {
    if (!(f.grid == grid_))
        throw std::invalid_argument("SpectralTransform: field grid mismatch");
    std::memcpy(in_.data(), f.coeffs.data(), sizeof(Complex) * in_.size());
    fftw_execute(static_cast<fftw_plan>(plan_inverse_));
    phys.assign(out_.begin(), out_.end());
}

void SpectralTransform::to_spectral(const std::vector<Complex>& phys, SpectralField& f) const {
    if (phys.size() != static_cast<size_t>(grid_.size()))
        throw std::invalid_argument("SpectralTransform: physical array size mismatch");
    std::memcpy(in_.data(), phys.data(), sizeof(Complex) * in_.size());
    fftw_execute(static_cast<fftw_plan>(plan_forward_));
    if (!(f.grid == grid_)) f = SpectralField(grid_);
    const double scale = 1.0 / grid_.size();
    for (size_t i = 0; i < f.coeffs.size(); ++i) f.coeffs[i] = scale * out_[i];
}

} // namespace detform
