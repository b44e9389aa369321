#pragma once

#include "mns/grid.hpp"

#include <array>
#include <complex>
#include <string>
#include <vector>

namespace mns {

using cplx = std::complex<double>;

/// Loop over every lattice mode; the functor receives the flat storage index
/// and the integer wavenumbers (k3 = 0 in 2D).
template <typename F>
void for_each_mode(const Grid& g, F&& f) {
    const int n = g.n();
    std::vector<int> kw(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) kw[static_cast<std::size_t>(i)] = g.wavenumber(i);
    std::size_t idx = 0;
    if (g.dim() == 2) {
        for (int i1 = 0; i1 < n; ++i1)
            for (int i2 = 0; i2 < n; ++i2, ++idx) f(idx, kw[i1], kw[i2], 0);
    } else {
        for (int i1 = 0; i1 < n; ++i1)
            for (int i2 = 0; i2 < n; ++i2)
                for (int i3 = 0; i3 < n; ++i3, ++idx) f(idx, kw[i1], kw[i2], kw[i3]);
    }
}

/// Divergence-free capable velocity field stored as truncated Fourier
/// coefficients, one complex array per component.
///
/// Fields flagged `real_valued` carry Hermitian-symmetric coefficients so
/// their physical samples are real; the flag is dropped for data whose
/// spectrum is deliberately one-sided (half-space initial data).
class SpectralField {
public:
    explicit SpectralField(Grid grid, bool real_valued = true);

    const Grid& grid() const { return grid_; }
    int dim() const { return grid_.dim(); }
    bool real_valued() const { return real_valued_; }
    void set_real_valued(bool v) { real_valued_ = v; }

    std::vector<cplx>& component(int a) { return comp_[static_cast<std::size_t>(a)]; }
    const std::vector<cplx>& component(int a) const { return comp_[static_cast<std::size_t>(a)]; }

    void set_zero();
    SpectralField& operator+=(const SpectralField& o);
    SpectralField& operator-=(const SpectralField& o);
    SpectralField& operator*=(double s);
    SpectralField& operator*=(cplx s);
    /// this += alpha * x
    void axpy(double alpha, const SpectralField& x);

    /// Project onto the Hermitian-symmetric subspace, u(-k) = conj(u(k)).
    void symmetrize();
    /// Largest componentwise violation of Hermitian symmetry.
    double hermitian_defect() const;

    double max_abs_coeff() const;
    /// Sum over modes and components of |u_hat|^2 (no box measure factor).
    double spectral_mass() const;
    /// L2 norm via Plancherel, sqrt((2 pi Lambda)^d * spectral mass).
    double l2_norm() const;
    /// max over nonzero modes of |xi . u_hat(xi)|.
    double divergence_max() const;
    /// k = 0 coefficient of one component (the preserved mean flow).
    cplx mean(int a) const { return comp_[static_cast<std::size_t>(a)][0]; }

private:
    Grid grid_;
    bool real_valued_;
    std::array<std::vector<cplx>, 3> comp_;
};

SpectralField operator+(SpectralField a, const SpectralField& b);
SpectralField operator-(SpectralField a, const SpectralField& b);
SpectralField operator*(double s, SpectralField f);

/// Physical-space samples of a field on the lattice (complex in general;
/// real-valued fields have vanishing imaginary parts).
struct PhysicalField {
    Grid grid;
    bool real_valued;
    std::array<std::vector<cplx>, 3> comp;

    const std::vector<cplx>& component(int a) const { return comp[static_cast<std::size_t>(a)]; }
    std::vector<cplx>& component(int a) { return comp[static_cast<std::size_t>(a)]; }
    /// Euclidean magnitude of the velocity vector at one lattice point.
    double magnitude(std::size_t idx) const;
};

/// Inverse transform to lattice samples. Fields flagged real are checked for
/// Hermitian symmetry first; a violation beyond 1e-12 (relative to the
/// largest coefficient) raises std::invalid_argument.
PhysicalField to_physical(const SpectralField& f);

/// Forward transform of lattice samples.
SpectralField to_spectral(const PhysicalField& samples);

/// MNSF binary serialization (little-endian): header {magic "MNSF", version,
/// d, N, Lambda, dealias, flags} followed by d complex arrays in row-major
/// lattice order. flags bit 0 marks Hermitian (real-valued) fields.
void save_field(const SpectralField& f, const std::string& path);
SpectralField load_field(const std::string& path);

/// CSV export of physical-space samples: lattice coordinates followed by the
/// component values (real and imaginary columns for complex fields).
void write_physical_csv(const SpectralField& f, const std::string& path);

} // namespace mns
