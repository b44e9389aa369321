#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace mns {

/// Periodic box (2*pi*Lambda * T)^d sampled on N points per axis.
///
/// The frequency lattice is {k/Lambda : k integer, |k_i| <= N/2}; spectral
/// arrays are stored in FFT order (k = i for i < N/2, k = i - N otherwise).
/// The dealias band keeps |k_i| <= floor(dealias_fraction * N/2).
class Grid {
public:
    Grid(int dim, int points_per_axis, double box_scale = 1.0,
         double dealias_fraction = 2.0 / 3.0);

    int dim() const { return dim_; }
    int n() const { return n_; }
    double box_scale() const { return lambda_; }
    double dealias_fraction() const { return dealias_; }

    /// Physical side length of the box, 2*pi*Lambda.
    double box_length() const;
    /// Lattice spacing in physical space.
    double spacing() const { return box_length() / n_; }
    /// Quadrature weight per lattice cell, spacing^d.
    double cell_volume() const;
    /// Total number of lattice points, N^d.
    std::size_t size() const { return size_; }

    /// Integer wavenumber along one axis for storage index i in [0, N).
    int wavenumber(int i) const { return i <= n_ / 2 ? (i == n_ / 2 ? -n_ / 2 : i) : i - n_; }
    /// Physical frequency component xi_i = k_i / Lambda.
    double frequency(int i) const { return wavenumber(i) / lambda_; }
    /// Storage index of the mirrored wavenumber -k (mod N).
    int mirror_index(int i) const { return i == 0 ? 0 : n_ - i; }

    /// Largest |k_i| surviving the dealias mask.
    int dealias_band() const { return dealias_band_; }

    /// Default dyadic window [j_min, j_max] covered by this lattice.
    int default_j_min() const;
    int default_j_max() const;

    bool operator==(const Grid& o) const {
        return dim_ == o.dim_ && n_ == o.n_ && lambda_ == o.lambda_ && dealias_ == o.dealias_;
    }
    bool operator!=(const Grid& o) const { return !(*this == o); }

private:
    int dim_;
    int n_;
    double lambda_;
    double dealias_;
    int dealias_band_;
    std::size_t size_;
};

/// Throws std::invalid_argument when two fields must live on the same grid.
void require_same_grid(const Grid& a, const Grid& b, const char* where);

} // namespace mns
