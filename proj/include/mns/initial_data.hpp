#pragma once

#include "mns/field.hpp"

#include <array>
#include <cstdint>

namespace mns {

/// 2D Taylor-Green vortex (sin x1 cos x2, -cos x1 sin x2); its exact NS
/// evolution on the unit-scale box is e^{-2t} u0. Requires d = 2.
SpectralField taylor_green(const Grid& grid);

struct RandomFieldOptions {
    double amplitude = 1.0;      // target sup norm after projection
    double spectrum_slope = 2.0; // amplitude ~ |xi|^{-slope} inside the band
    double band_lo = 1.0;        // |k| band in lattice wavenumbers
    double band_hi = 8.0;
    std::uint64_t seed = 1;
};

/// Seeded band-limited divergence-free Gaussian field, rescaled so that
/// sup |u| equals the requested amplitude.
SpectralField random_divfree(const Grid& grid, const RandomFieldOptions& opts);

/// Half-space initial data: u1_hat(xi) = c 2^{L(1-d)} prod_i phitilde(2^-L xi_i),
/// u2_hat = -(xi_1/xi_2) u1_hat, remaining components zero, where phitilde is
/// the 1-D dyadic bump restricted to [1/2, 2] (positive frequencies only).
/// The spectrum is one-sided, supp u0_hat lies in {xi_1 >= 2^{L-1}}, so the
/// field is complex-valued in physical space.
SpectralField half_space_data(const Grid& grid, int L, double c);

/// The support threshold rho = 2^{L-1} of half_space_data.
double half_space_rho(int L);

struct BumpOptions {
    double amplitude = 1.0;
    double width = 0.5;
    std::array<double, 3> center = {0.0, 0.0, 0.0};
    int direction = 0; // unit vector e_direction before projection
};

/// Gaussian bump along one coordinate direction, sampled on the lattice
/// (periodically wrapped) without projection.
SpectralField gaussian_bump(const Grid& grid, const BumpOptions& opts);

/// Leray-projected bump (divergence-free, shape approximately preserved).
SpectralField bump_divfree(const Grid& grid, const BumpOptions& opts);

} // namespace mns
