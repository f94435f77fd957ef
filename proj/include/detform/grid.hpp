// grid.hpp — periodic square grid and Fourier index bookkeeping.
//
// Fields are stored as full n x n complex coefficient arrays in FFT index
// order (index i maps to wavenumber k = i for i <= n/2, k = i - n otherwise).
// The forward transform carries 1/n^2 so coefficients are Fourier-series
// coefficients: f(x) = sum_k fhat(k) exp(i kappa0 k.x).

#pragma once

#include <cmath>
#include <stdexcept>

namespace detform {

struct Grid {
    int n_modes = 0;            // points per dimension, power of two, >= 4
    double domain_length = 0.0; // L; paper setup is L = 2*pi so kappa0 = 1
    int dealias_cutoff = 0;     // floor(n_modes/3), 2/3-rule box cutoff

    double kappa0() const { return 2.0 * M_PI / domain_length; }
    double dx() const { return domain_length / n_modes; }
    int size() const { return n_modes * n_modes; }

    // FFT index -> signed wavenumber component.
    int wavenumber(int index) const {
        return index <= n_modes / 2 ? index : index - n_modes;
    }
    // Signed wavenumber component -> FFT index (k in (-n/2, n/2]).
    int index_of(int k) const { return k >= 0 ? k : k + n_modes; }

    bool operator==(const Grid& other) const {
        return n_modes == other.n_modes && domain_length == other.domain_length;
    }
};

inline Grid make_grid(int n_modes, double domain_length = 2.0 * M_PI) {
    if (n_modes < 4 || n_modes % 2 != 0)
        throw std::invalid_argument("Grid: n_modes must be even and >= 4");
    if ((n_modes & (n_modes - 1)) != 0)
        throw std::invalid_argument("Grid: n_modes must be a power of two");
    if (domain_length <= 0.0)
        throw std::invalid_argument("Grid: domain_length must be positive");
    return Grid{n_modes, domain_length, n_modes / 3};
}

} // namespace detform
