#include "detform/spectral_ops.hpp"

#include <algorithm>
#include <cmath>

namespace detform {

std::pair<SpectralField, SpectralField> velocity_from_vorticity(const SpectralField& omega) {
    SpectralField u1(omega.grid), u2(omega.grid);
    const Grid& g = omega.grid;
    const int n = g.n_modes;
    const double kappa0 = g.kappa0();
    for (int i1 = 0; i1 < n; ++i1) {
        const int k1 = g.wavenumber(i1);
        for (int i2 = 0; i2 < n; ++i2) {
            const int k2 = g.wavenumber(i2);
            const double ksq = static_cast<double>(k1) * k1 + static_cast<double>(k2) * k2;
            if (ksq == 0.0) continue;
            const size_t idx = static_cast<size_t>(i1) * n + i2;
            const Complex iw = Complex{0.0, 1.0} * omega.coeffs[idx] / (kappa0 * ksq);
            u1.coeffs[idx] = -static_cast<double>(k2) * iw;
            u2.coeffs[idx] = static_cast<double>(k1) * iw;
        }
    }
    return {std::move(u1), std::move(u2)};
}

double h1_velocity_norm(const SpectralField& omega) { return l2_norm(omega); }

AdvectionOperator::AdvectionOperator(const Grid& grid)
    : transform_(grid), u1_(grid), u2_(grid), wx_(grid), wy_(grid), prod_(grid.size()) {}

void AdvectionOperator::apply(const SpectralField& omega, SpectralField& out, double* max_speed) {
    const Grid& g = transform_.grid();
    const int n = g.n_modes;
    const double kappa0 = g.kappa0();

    for (int i1 = 0; i1 < n; ++i1) {
        const int k1 = g.wavenumber(i1);
        for (int i2 = 0; i2 < n; ++i2) {
            const int k2 = g.wavenumber(i2);
            const size_t idx = static_cast<size_t>(i1) * n + i2;
            const Complex w = omega.coeffs[idx];
            const Complex iw = Complex{0.0, 1.0} * w;
            const double ksq = static_cast<double>(k1) * k1 + static_cast<double>(k2) * k2;
            if (ksq == 0.0) {
                u1_.coeffs[idx] = u2_.coeffs[idx] = Complex{};
            } else {
                const Complex psi = iw / (kappa0 * ksq);
                u1_.coeffs[idx] = -static_cast<double>(k2) * psi;
                u2_.coeffs[idx] = static_cast<double>(k1) * psi;
            }
            wx_.coeffs[idx] = static_cast<double>(k1) * kappa0 * iw;
            wy_.coeffs[idx] = static_cast<double>(k2) * kappa0 * iw;
        }
    }

    transform_.to_physical(u1_, pu1_);
    transform_.to_physical(u2_, pu2_);
    transform_.to_physical(wx_, pwx_);
    transform_.to_physical(wy_, pwy_);

    double speed = 0.0;
    for (size_t i = 0; i < prod_.size(); ++i) {
        const double a1 = pu1_[i].real(), a2 = pu2_[i].real();
        prod_[i] = Complex{a1 * pwx_[i].real() + a2 * pwy_[i].real(), 0.0};
        speed = std::max(speed, std::max(std::abs(a1), std::abs(a2)));
    }
    if (max_speed) *max_speed = speed;

    transform_.to_spectral(prod_, out);
    truncate_to_box(out, g.dealias_cutoff);
    enforce_reality(out);
}

SpectralField nonlinear_term(const SpectralField& omega, double* max_speed) {
    AdvectionOperator op(omega.grid);
    SpectralField out(omega.grid);
    op.apply(omega, out, max_speed);
    return out;
}

} // namespace detform
