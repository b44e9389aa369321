#pragma once

#include "mns/field.hpp"

namespace mns {

/// Leray projection, mode-wise multiply by I - xi xi^T / |xi|^2.
/// The k = 0 mode (mean flow) passes through unchanged; modes with an
/// unpaired Nyquist component are zeroed (their derivative symbol is
/// sign-ambiguous on an even lattice).
SpectralField leray_project(const SpectralField& f);

/// Exact heat semigroup e^{t Laplacian}: each mode scaled by exp(-t |xi|^2).
/// t < 0 raises std::domain_error.
SpectralField heat_propagate(const SpectralField& f, double t);
void heat_propagate_inplace(SpectralField& f, double t);

/// Dealiased pseudospectral P div(u (x) v): physical product, spectral
/// contraction with i xi, 2/3-rule mask, Leray projection.
SpectralField nonlinear_div(const SpectralField& u, const SpectralField& v);

/// Zero all modes with any |k_i| above the grid's dealias band.
void apply_dealias_mask(SpectralField& f);

/// Lattice-quadrature L^p norm of the pointwise Euclidean magnitude,
/// cell measure (2 pi Lambda / N)^d. p = inf delegates to sup_norm.
double lp_norm(const SpectralField& f, double p);

/// Sup of |u| over lattice samples; with refine = true (default) the field is
/// first resampled on a 2x zero-padded lattice, since plain collocation
/// undershoots the true maximum.
double sup_norm(const SpectralField& f, bool refine = true);

/// sqrt( sum_xi |xi|^2 |u_hat|^2 * (2 pi Lambda)^d ) -- the H^1 seminorm used
/// by the energy identity.
double grad_l2_norm(const SpectralField& f);

/// Spectral resample on a grid with n_factor * N points per axis (zero-pad).
SpectralField upsample(const SpectralField& f, int n_factor);

/// Lattice translation u(. - shift), shift given in lattice steps per axis.
SpectralField translate(const SpectralField& f, const std::array<int, 3>& steps);

/// Box rescale to u_lambda(x) = lambda * u(lambda x): same coefficients
/// scaled by lambda on a grid with box scale Lambda / lambda.
SpectralField rescale_box(const SpectralField& f, double lambda);

/// Fraction of spectral l2 mass in the half-space {xi_1 >= rho}.
double half_space_mass_fraction(const SpectralField& f, double rho);

/// Accumulate spectral l2 mass into per-xi_1-plane bins (index = storage
/// index along axis 1); bins are resized/added to, not cleared.
void xi1_mass_bins(const SpectralField& f, std::vector<double>& bins);

/// Largest lattice xi_1 with at least (1 - mass_tol) of the binned mass in
/// {xi_1 >= rho'}; 0 for empty bins.
double xi1_threshold_from_bins(const Grid& g, const std::vector<double>& bins, double mass_tol);

/// Support threshold of a single field.
double support_threshold_xi1(const SpectralField& f, double mass_tol = 1e-8);

} // namespace mns
