#include "mns/cutoff.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace mns {

CutoffFamily::CutoffFamily(int j_min, int j_max) : j_min_(j_min), j_max_(j_max) {
    if (j_min_ > j_max_) throw std::invalid_argument("cutoff: empty dyadic window");
}

CutoffFamily CutoffFamily::for_grid(const Grid& grid) {
    return CutoffFamily(grid.default_j_min(), grid.default_j_max());
}

double CutoffFamily::psi(double r) {
    const double u = (std::abs(r) - 1.25) / 0.25;
    if (u <= 0.0) return 1.0;
    if (u >= 1.0) return 0.0;
    return 1.0 - u * u * u * (10.0 - 15.0 * u + 6.0 * u * u);
}

double CutoffFamily::phi(double r) { return psi(r) - psi(2.0 * r); }

double CutoffFamily::phi_j(int j, double r) const { return phi(std::ldexp(r, -j)); }

double CutoffFamily::window_sum(double r) const {
    return psi(std::ldexp(r, -j_max_)) - psi(std::ldexp(r, -(j_min_ - 1)));
}

double CutoffFamily::full_coverage_lo() const { return 1.5 * std::ldexp(1.0, j_min_ - 1); }
double CutoffFamily::full_coverage_hi() const { return 1.25 * std::ldexp(1.0, j_max_); }

namespace {

SpectralField apply_radial_multiplier(const SpectralField& f, auto&& mult) {
    const Grid& g = f.grid();
    const double inv_lambda = 1.0 / g.box_scale();
    SpectralField out = f;
    for_each_mode(g, [&](std::size_t idx, int k1, int k2, int k3) {
        const double r = std::sqrt(static_cast<double>(k1) * k1 + static_cast<double>(k2) * k2 +
                                   static_cast<double>(k3) * k3) *
                         inv_lambda;
        const double m = mult(r);
        for (int a = 0; a < g.dim(); ++a) out.component(a)[idx] *= m;
    });
    if (out.real_valued()) out.symmetrize();
    return out;
}

} // namespace

SpectralField dyadic_block(const SpectralField& f, int j, const CutoffFamily& family) {
    if (!family.contains(j))
        throw std::invalid_argument("dyadic_block: j = " + std::to_string(j) +
                                    " outside window [" + std::to_string(family.j_min()) + ", " +
                                    std::to_string(family.j_max()) + "]");
    return apply_radial_multiplier(f, [&](double r) { return family.phi_j(j, r); });
}

SpectralField dyadic_block(const SpectralField& f, int j) {
    return dyadic_block(f, j, CutoffFamily::for_grid(f.grid()));
}

SpectralField low_pass(const SpectralField& f, double M) {
    if (!(M > 0.0)) throw std::invalid_argument("low_pass: M must be positive");
    return apply_radial_multiplier(f, [&](double r) { return CutoffFamily::psi(r / M); });
}

SpectralField high_pass(const SpectralField& f, double M) {
    if (!(M > 0.0)) throw std::invalid_argument("high_pass: M must be positive");
    return apply_radial_multiplier(f, [&](double r) { return 1.0 - CutoffFamily::psi(r / M); });
}

DyadicBlockSet decompose(const SpectralField& f, const CutoffFamily& family) {
    DyadicBlockSet out{family, {}, f};
    for (int j = family.j_min(); j <= family.j_max(); ++j) {
        SpectralField block = dyadic_block(f, j, family);
        out.residual -= block;
        out.blocks.emplace(j, std::move(block));
    }
    return out;
}

DyadicBlockSet decompose(const SpectralField& f) {
    return decompose(f, CutoffFamily::for_grid(f.grid()));
}

} // namespace mns
