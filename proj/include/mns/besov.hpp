#pragma once

#include "mns/cutoff.hpp"

#include <limits>

namespace mns {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct BesovResult {
    double value = 0.0;
    /// Fraction of spectral l2 mass at modes the dyadic window does not
    /// fully cover (includes the k = 0 mode).
    double truncation_mass = 0.0;
};

/// Homogeneous Besov norm (sum_j 2^{jsq} |Delta_j f|_p^q)^{1/q}, sup over j
/// for q = inf, blocks taken over the family window.
BesovResult besov_norm_ex(const SpectralField& f, double s, double p, double q,
                          const CutoffFamily& family);
double besov_norm(const SpectralField& f, double s, double p, double q);
double besov_norm(const SpectralField& f, double s, double p, double q,
                  const CutoffFamily& family);

/// Heat-kernel characterization | t^{-s/2} |e^{tL} f|_p |_{L^q(dt/t)},
/// valid for s < 0 only (s >= 0 raises std::domain_error). The k = 0 mode is
/// excluded (it never decays). Quadrature: trapezoid in log t on a geometric
/// grid with points_per_octave nodes per octave, spanning at least
/// [2^{-2 jmax}, 2^{-2 jmin}] and extended until the tails contribute below
/// 1e-5 relatively.
double besov_norm_heat(const SpectralField& f, double s, double p, double q,
                       const CutoffFamily& family, int points_per_octave = 8);
double besov_norm_heat(const SpectralField& f, double s, double p, double q);

/// |f|_{H^s} = |(-Laplacian)^{s/2} f|_2 by Plancherel; the k = 0 mode is
/// excluded when s < 0.
double sobolev_norm(const SpectralField& f, double s);

/// | (-Laplacian)^{-a/2} f |_r with the k = 0 mode excluded (a >= 0).
double riesz_lr_norm(const SpectralField& f, double a, double r);

} // namespace mns
