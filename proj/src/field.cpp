#include "detform/field.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace detform {

namespace {

void require_same_grid(const SpectralField& a, const SpectralField& b) {
    if (!(a.grid == b.grid))
        throw std::invalid_argument("SpectralField: grid mismatch");
}

} // namespace

SpectralField& SpectralField::operator+=(const SpectralField& other) {
    require_same_grid(*this, other);
    for (size_t i = 0; i < coeffs.size(); ++i) coeffs[i] += other.coeffs[i];
    return *this;
}

SpectralField& SpectralField::operator-=(const SpectralField& other) {
    require_same_grid(*this, other);
    for (size_t i = 0; i < coeffs.size(); ++i) coeffs[i] -= other.coeffs[i];
    return *this;
}

SpectralField& SpectralField::operator*=(double factor) {
    for (auto& c : coeffs) c *= factor;
    return *this;
}

SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
SpectralField operator*(double factor, SpectralField a) { return a *= factor; }

void axpy(double alpha, const SpectralField& x, SpectralField& y) {
    require_same_grid(x, y);
    for (size_t i = 0; i < y.coeffs.size(); ++i) y.coeffs[i] += alpha * x.coeffs[i];
}

double l2_norm(const SpectralField& f) {
    double sum = 0.0;
    for (const auto& c : f.coeffs) sum += std::norm(c);
    return std::sqrt(sum);
}

double l2_distance(const SpectralField& a, const SpectralField& b) {
    require_same_grid(a, b);
    double sum = 0.0;
    for (size_t i = 0; i < a.coeffs.size(); ++i) sum += std::norm(a.coeffs[i] - b.coeffs[i]);
    return std::sqrt(sum);
}

void zero_mean_and_nyquist(SpectralField& f) {
    const int n = f.grid.n_modes;
    f.coeffs[0] = Complex{};
    const int nyq = n / 2;
    for (int i = 0; i < n; ++i) {
        f.coeffs[static_cast<size_t>(nyq) * n + i] = Complex{};
        f.coeffs[static_cast<size_t>(i) * n + nyq] = Complex{};
    }
}

void enforce_reality(SpectralField& f) {
    const int n = f.grid.n_modes;
    zero_mean_and_nyquist(f);
    for (int i1 = 0; i1 < n; ++i1) {
        const int j1 = (n - i1) % n;
        for (int i2 = 0; i2 < n; ++i2) {
            const int j2 = (n - i2) % n;
            const size_t a = static_cast<size_t>(i1) * n + i2;
            const size_t b = static_cast<size_t>(j1) * n + j2;
            if (a > b) continue; // each pair handled once
            if (a == b) {
                // self-conjugate mode: must be real
                f.coeffs[a] = Complex{f.coeffs[a].real(), 0.0};
                continue;
            }
            const Complex v = 0.5 * (f.coeffs[a] + std::conj(f.coeffs[b]));
            f.coeffs[a] = v;
            f.coeffs[b] = std::conj(v);
        }
    }
}

double reality_defect(const SpectralField& f) {
    const int n = f.grid.n_modes;
    double worst = 0.0;
    for (int i1 = 0; i1 < n; ++i1) {
        const int j1 = (n - i1) % n;
        for (int i2 = 0; i2 < n; ++i2) {
            const int j2 = (n - i2) % n;
            const Complex d = f.coeffs[static_cast<size_t>(j1) * n + j2] -
                              std::conj(f.coeffs[static_cast<size_t>(i1) * n + i2]);
            worst = std::max(worst, std::abs(d));
        }
    }
    return worst;
}

void truncate_to_box(SpectralField& f, int cutoff) {
    const int n = f.grid.n_modes;
    for (int i1 = 0; i1 < n; ++i1) {
        const int k1 = f.grid.wavenumber(i1);
        for (int i2 = 0; i2 < n; ++i2) {
            const int k2 = f.grid.wavenumber(i2);
            if (std::max(std::abs(k1), std::abs(k2)) > cutoff)
                f.coeffs[static_cast<size_t>(i1) * n + i2] = Complex{};
        }
    }
}

bool supported_in_box(const SpectralField& f, int cutoff) {
    const int n = f.grid.n_modes;
    for (int i1 = 0; i1 < n; ++i1) {
        const int k1 = f.grid.wavenumber(i1);
        for (int i2 = 0; i2 < n; ++i2) {
            const int k2 = f.grid.wavenumber(i2);
            if (std::max(std::abs(k1), std::abs(k2)) > cutoff &&
                f.coeffs[static_cast<size_t>(i1) * n + i2] != Complex{})
                return false;
        }
    }
    return true;
}

SpectralField apply_projector(const ModalProjector& proj, const SpectralField& f) {
    SpectralField out = f;
    truncate_to_box(out, proj.cutoff);
    return out;
}

SpectralField restrict_to_grid(const SpectralField& f, const Grid& target) {
    if (f.grid == target) return f;
    const int box = target.n_modes / 2 - 1; // largest representable |k| on target
    if (!supported_in_box(f, box))
        throw std::invalid_argument("restrict_to_grid: field has modes the target grid cannot hold");
    SpectralField out(target);
    for (int k1 = -box; k1 <= box; ++k1)
        for (int k2 = -box; k2 <= box; ++k2)
            out.at(k1, k2) = f.at(k1, k2);
    return out;
}

SpectralField embed_to_grid(const SpectralField& f, const Grid& target) {
    if (f.grid == target) return f;
    if (target.n_modes < f.grid.n_modes)
        return restrict_to_grid(f, target);
    const int box = f.grid.n_modes / 2 - 1;
    SpectralField out(target);
    for (int k1 = -box; k1 <= box; ++k1)
        for (int k2 = -box; k2 <= box; ++k2)
            out.at(k1, k2) = f.at(k1, k2);
    return out;
}

} // namespace detform
