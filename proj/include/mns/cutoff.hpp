#pragma once

#include "mns/field.hpp"

#include <map>

namespace mns {

/// Radial dyadic cutoff family.
///
/// psi is a C^2 polynomial smoothstep with psi = 1 on |xi| <= 5/4 and
/// psi = 0 on |xi| >= 3/2; phi(xi) = psi(xi) - psi(2 xi) is supported in the
/// annulus 5/8 <= |xi| <= 3/2, and phi_j(xi) = phi(2^-j xi). The partition
/// sum_j phi_j telescopes to psi(2^-jmax xi) - psi(2^-(jmin-1) xi), so it
/// equals 1 exactly for (3/2) 2^(jmin-1) <= |xi| <= (5/4) 2^jmax.
class CutoffFamily {
public:
    CutoffFamily(int j_min, int j_max);
    /// Window covering the lattice: [ceil(log2(1/Lambda)) - 1, log2(N/2) - 1].
    static CutoffFamily for_grid(const Grid& grid);

    int j_min() const { return j_min_; }
    int j_max() const { return j_max_; }
    bool contains(int j) const { return j >= j_min_ && j <= j_max_; }

    static double psi(double r);
    static double phi(double r);
    double phi_j(int j, double r) const;
    /// Sum of phi_j over the window at radius r.
    double window_sum(double r) const;
    /// Radius range on which the window partition is exactly 1.
    double full_coverage_lo() const;
    double full_coverage_hi() const;

private:
    int j_min_;
    int j_max_;
};

/// Delta_j f: spectral multiplication by phi_j. j outside the family window
/// raises std::invalid_argument.
SpectralField dyadic_block(const SpectralField& f, int j, const CutoffFamily& family);
SpectralField dyadic_block(const SpectralField& f, int j);

/// P_{<=M} f: multiplication by psi(|xi| / M), M > 0.
SpectralField low_pass(const SpectralField& f, double M);
/// P_{>=M} f = f - P_{<=M} f.
SpectralField high_pass(const SpectralField& f, double M);

/// The family {Delta_j f} over a window plus the uncovered residual,
/// reconstructing f exactly as sum_j blocks[j] + residual.
struct DyadicBlockSet {
    CutoffFamily family;
    std::map<int, SpectralField> blocks;
    SpectralField residual;
};

DyadicBlockSet decompose(const SpectralField& f, const CutoffFamily& family);
DyadicBlockSet decompose(const SpectralField& f);

} // namespace mns
