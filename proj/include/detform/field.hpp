// field.hpp — spectral representation of a real, mean-zero scalar field
// (vorticity) on a periodic square, plus the modal projector.

#pragma once

#include <complex>
#include <vector>

#include "detform/grid.hpp"

namespace detform {

using Complex = std::complex<double>;

struct SpectralField {
    Grid grid;
    std::vector<Complex> coeffs; // row-major, index = i1 * n + i2

    SpectralField() = default;
    explicit SpectralField(const Grid& g) : grid(g), coeffs(g.size(), Complex{}) {}

    Complex& at(int k1, int k2) {
        return coeffs[static_cast<size_t>(grid.index_of(k1)) * grid.n_modes + grid.index_of(k2)];
    }
    Complex at(int k1, int k2) const {
        return coeffs[static_cast<size_t>(grid.index_of(k1)) * grid.n_modes + grid.index_of(k2)];
    }

    SpectralField& operator+=(const SpectralField& other);
    SpectralField& operator-=(const SpectralField& other);
    SpectralField& operator*=(double factor);
};

SpectralField operator+(SpectralField a, const SpectralField& b);
SpectralField operator-(SpectralField a, const SpectralField& b);
SpectralField operator*(double factor, SpectralField a);

// y += alpha * x
void axpy(double alpha, const SpectralField& x, SpectralField& y);

// L2 norm of the field under the normalized measure (mean square over the
// domain), i.e. sqrt(sum_k |fhat(k)|^2).  For a vorticity field this equals
// the H1 norm of the induced divergence-free velocity.
double l2_norm(const SpectralField& f);
double l2_distance(const SpectralField& a, const SpectralField& b);

// Invariant enforcement/checks ------------------------------------------------

// Copies the canonical half-plane onto its conjugate partners so that
// coeff(-k) == conj(coeff(k)) holds exactly.  Also zeros the mean mode and
// the Nyquist row/column (|k| = n/2 has no conjugate partner).
void enforce_reality(SpectralField& f);

// Zero the (0,0) mode and the Nyquist row/column.
void zero_mean_and_nyquist(SpectralField& f);

// Max |coeff(-k) - conj(coeff(k))| over all retained modes.
double reality_defect(const SpectralField& f);

// Zero every mode with max(|k1|,|k2|) > cutoff.
void truncate_to_box(SpectralField& f, int cutoff);

// True if every mode with max(|k1|,|k2|) > cutoff is exactly zero.
bool supported_in_box(const SpectralField& f, int cutoff);

struct ModalProjector {
    int cutoff = 5; // retain |k1| <= cutoff and |k2| <= cutoff
};

SpectralField apply_projector(const ModalProjector& proj, const SpectralField& f);

// Mode-matching copies between grids.  Source modes outside the target's
// representable range are dropped by restrict_to_grid and must be zero
// (checked); embed_to_grid never loses modes.
SpectralField restrict_to_grid(const SpectralField& f, const Grid& target);
SpectralField embed_to_grid(const SpectralField& f, const Grid& target);

} // namespace detform
