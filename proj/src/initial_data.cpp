#include "mns/initial_data.hpp"

#include "mns/cutoff.hpp"
#include "mns/spectral_ops.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace mns {

SpectralField taylor_green(const Grid& grid) {
    if (grid.dim() != 2)
        throw std::invalid_argument("taylor_green: generator is 2D only");
    // sin x1 cos x2 = (e^{i(x1+x2)} - e^{-i(x1+x2)} + e^{i(x1-x2)} - e^{-i(x1-x2)}) / 4i
    SpectralField u(grid, true);
    const int n = grid.n();
    auto idx = [&](int k1, int k2) {
        const int i1 = k1 >= 0 ? k1 : k1 + n;
        const int i2 = k2 >= 0 ? k2 : k2 + n;
        return static_cast<std::size_t>(i1) * n + i2;
    };
    const cplx quarter_over_i(0.0, -0.25);
    u.component(0)[idx(1, 1)] = quarter_over_i;
    u.component(0)[idx(-1, -1)] = -quarter_over_i;
    u.component(0)[idx(1, -1)] = quarter_over_i;
    u.component(0)[idx(-1, 1)] = -quarter_over_i;
    u.component(1)[idx(1, 1)] = -quarter_over_i;
    u.component(1)[idx(-1, -1)] = quarter_over_i;
    u.component(1)[idx(1, -1)] = quarter_over_i;
    u.component(1)[idx(-1, 1)] = -quarter_over_i;
    return u;
}

SpectralField random_divfree(const Grid& grid, const RandomFieldOptions& opts) {
    std::mt19937_64 rng(opts.seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    SpectralField u(grid, true);
    for_each_mode(grid, [&](std::size_t idx, int k1, int k2, int k3) {
        const double kk = std::sqrt(static_cast<double>(k1) * k1 + static_cast<double>(k2) * k2 +
                                    static_cast<double>(k3) * k3);
        // Draw for every mode so the stream stays aligned across bands.
        for (int a = 0; a < grid.dim(); ++a) {
            const double re = gauss(rng);
            const double im = gauss(rng);
            if (kk < opts.band_lo || kk > opts.band_hi) continue;
            const double amp = std::pow(kk, -opts.spectrum_slope);
            u.component(a)[idx] = amp * cplx(re, im);
        }
    });
    u.symmetrize();
    u = leray_project(u);
    const double sup = sup_norm(u);
    if (sup > 0.0) u *= opts.amplitude / sup;
    return u;
}

double half_space_rho(int L) { return std::ldexp(1.0, L - 1); }

namespace {

// phi restricted to positive frequencies: the sharp indicator on [1/2, 2]
// keeps the support claim xi_1 >= 2^{L-1} exact on the lattice.
double phi_tilde(double s) {
    if (s < 0.5 || s > 2.0) return 0.0;
    return CutoffFamily::phi(s);
}

} // namespace

SpectralField half_space_data(const Grid& grid, int L, double c) {
    const double xi_max = 1.5 * std::ldexp(1.0, L);
    const double nyquist = (grid.n() / 2) / grid.box_scale();
    if (xi_max > nyquist)
        throw std::invalid_argument("half_space: support 1.5*2^L exceeds the lattice Nyquist");
    SpectralField u(grid, false);
    const int d = grid.dim();
    const double prefactor = c * std::ldexp(1.0, L * (1 - d));
    const double inv_lambda = 1.0 / grid.box_scale();
    const double scale = std::ldexp(1.0, -L);
    for_each_mode(grid, [&](std::size_t idx, int k1, int k2, int k3) {
        const double xi1 = k1 * inv_lambda;
        const double xi2 = k2 * inv_lambda;
        const double xi3 = k3 * inv_lambda;
        double prod = phi_tilde(scale * xi1) * phi_tilde(scale * xi2);
        if (d == 3) prod *= phi_tilde(scale * xi3);
        if (prod == 0.0) return;
        const double u1 = prefactor * prod;
        u.component(0)[idx] = cplx(u1, 0.0);
        u.component(1)[idx] = cplx(-(xi1 / xi2) * u1, 0.0);
    });
    return u;
}

SpectralField gaussian_bump(const Grid& grid, const BumpOptions& opts) {
    if (opts.direction < 0 || opts.direction >= grid.dim())
        throw std::invalid_argument("bump: direction outside [0, d)");
    if (!(opts.width > 0.0)) throw std::invalid_argument("bump: width must be positive");
    PhysicalField phys{grid, true, {}};
    for (int a = 0; a < grid.dim(); ++a) phys.component(a).assign(grid.size(), cplx(0.0, 0.0));
    const int n = grid.n();
    const double h = grid.spacing();
    const double box = grid.box_length();
    auto periodic_d2 = [&](double x, double x0) {
        double dx = std::fmod(x - x0, box);
        if (dx > 0.5 * box) dx -= box;
        if (dx < -0.5 * box) dx += box;
        return dx * dx;
    };
    auto& target = phys.component(opts.direction);
    std::size_t idx = 0;
    if (grid.dim() == 2) {
        for (int i1 = 0; i1 < n; ++i1)
            for (int i2 = 0; i2 < n; ++i2, ++idx) {
                const double r2 =
                    periodic_d2(i1 * h, opts.center[0]) + periodic_d2(i2 * h, opts.center[1]);
                target[idx] = opts.amplitude * std::exp(-r2 / (2.0 * opts.width * opts.width));
            }
    } else {
        for (int i1 = 0; i1 < n; ++i1)
            for (int i2 = 0; i2 < n; ++i2)
                for (int i3 = 0; i3 < n; ++i3, ++idx) {
                    const double r2 = periodic_d2(i1 * h, opts.center[0]) +
                                      periodic_d2(i2 * h, opts.center[1]) +
                                      periodic_d2(i3 * h, opts.center[2]);
                    target[idx] =
                        opts.amplitude * std::exp(-r2 / (2.0 * opts.width * opts.width));
                }
    }
    return to_spectral(phys);
}

SpectralField bump_divfree(const Grid& grid, const BumpOptions& opts) {
    return leray_project(gaussian_bump(grid, opts));
}

} // namespace mns
