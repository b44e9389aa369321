//==============================================================================
// spectral_ops.cpp
// Mode-diagonal operators on the periodic lattice: Leray projection, exact
// heat propagation, the dealiased nonlinear term and the physical-space
// norms. All multipliers run in double precision; real-flagged fields are
// re-symmetrized after every multiplier so round-off cannot drift them into
// complex physical values.
//==============================================================================

#include "mns/spectral_ops.hpp"

#include "mns/fft.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mns {

SpectralField leray_project(const SpectralField& f) {
    const Grid& g = f.grid();
    const int d = g.dim();
    const int nyquist = -g.n() / 2;
    const double inv_lambda = 1.0 / g.box_scale();
    SpectralField out = f;
    for_each_mode(g, [&](std::size_t idx, int k1, int k2, int k3) {
        if (k1 == 0 && k2 == 0 && k3 == 0) return;
        // The unpaired Nyquist mode has a sign-ambiguous derivative symbol
        // on an even lattice; zero it so the divergence invariant is exact.
        if (k1 == nyquist || k2 == nyquist || k3 == nyquist) {
            for (int a = 0; a < d; ++a) out.component(a)[idx] = cplx(0.0, 0.0);
            return;
        }
        double xi[3] = {k1 * inv_lambda, k2 * inv_lambda, k3 * inv_lambda};
        double xi2 = xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2];
        cplx dot(0.0, 0.0);
        for (int a = 0; a < d; ++a) dot += xi[a] * out.component(a)[idx];
        dot /= xi2;
        for (int a = 0; a < d; ++a) out.component(a)[idx] -= xi[a] * dot;
    });
    if (out.real_valued()) out.symmetrize();
    return out;
}

void heat_propagate_inplace(SpectralField& f, double t) {
    if (t < 0.0) throw std::domain_error("heat_propagate: t must be nonnegative");
    if (t == 0.0) return;
    const Grid& g = f.grid();
    const double inv_l2 = 1.0 / (g.box_scale() * g.box_scale());
    for_each_mode(g, [&](std::size_t idx, int k1, int k2, int k3) {
        const double xi2 =
            (static_cast<double>(k1) * k1 + static_cast<double>(k2) * k2 +
             static_cast<double>(k3) * k3) *
            inv_l2;
        const double decay = std::exp(-t * xi2);
        for (int a = 0; a < g.dim(); ++a) f.component(a)[idx] *= decay;
    });
    if (f.real_valued()) f.symmetrize();
}

SpectralField heat_propagate(const SpectralField& f, double t) {
    SpectralField out = f;
    heat_propagate_inplace(out, t);
    return out;
}

void apply_dealias_mask(SpectralField& f) {
    const Grid& g = f.grid();
    const int band = g.dealias_band();
    for_each_mode(g, [&](std::size_t idx, int k1, int k2, int k3) {
        if (std::abs(k1) > band || std::abs(k2) > band || std::abs(k3) > band)
            for (int a = 0; a < g.dim(); ++a) f.component(a)[idx] = cplx(0.0, 0.0);
    });
}

SpectralField nonlinear_div(const SpectralField& u, const SpectralField& v) {
    require_same_grid(u.grid(), v.grid(), "nonlinear_div");
    const Grid& g = u.grid();
    const int d = g.dim();
    const bool same = &u == &v;

    PhysicalField pu = to_physical(u);
    PhysicalField pv = same ? pu : to_physical(v);

    // w_ab = u_a v_b in physical space, transformed back mode by mode.
    std::array<std::array<std::vector<cplx>, 3>, 3> w;
    for (int a = 0; a < d; ++a) {
        for (int b = 0; b < d; ++b) {
            if (same && b < a) continue;
            auto& wab = w[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)];
            wab.resize(g.size());
            const auto& ua = pu.component(a);
            const auto& vb = pv.component(b);
            for (std::size_t i = 0; i < wab.size(); ++i) wab[i] = ua[i] * vb[i];
            fft::forward(g, wab);
        }
    }
    auto w_at = [&](int a, int b) -> const std::vector<cplx>& {
        if (same && b < a) return w[static_cast<std::size_t>(b)][static_cast<std::size_t>(a)];
        return w[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)];
    };

    SpectralField out(g, u.real_valued() && v.real_valued());
    const double inv_lambda = 1.0 / g.box_scale();
    for_each_mode(g, [&](std::size_t idx, int k1, int k2, int k3) {
        const double xi[3] = {k1 * inv_lambda, k2 * inv_lambda, k3 * inv_lambda};
        for (int a = 0; a < d; ++a) {
            cplx s(0.0, 0.0);
            for (int b = 0; b < d; ++b) s += xi[b] * w_at(a, b)[idx];
            out.component(a)[idx] = cplx(0.0, 1.0) * s;
        }
    });
    apply_dealias_mask(out);
    return leray_project(out);
}

namespace {

double magnitude_lp(const PhysicalField& phys, double p, double cell) {
    const std::size_t m = phys.grid.size();
    if (p == 1.0) {
        double s = 0.0;
        for (std::size_t i = 0; i < m; ++i) s += phys.magnitude(i);
        return s * cell;
    }
    if (p == 2.0) {
        double s = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            const double v = phys.magnitude(i);
            s += v * v;
        }
        return std::sqrt(s * cell);
    }
    double s = 0.0;
    for (std::size_t i = 0; i < m; ++i) s += std::pow(phys.magnitude(i), p);
    return std::pow(s * cell, 1.0 / p);
}

} // namespace

double lp_norm(const SpectralField& f, double p) {
    if (p < 1.0) throw std::domain_error("lp_norm: p must be >= 1");
    if (std::isinf(p)) return sup_norm(f);
    const PhysicalField phys = to_physical(f);
    return magnitude_lp(phys, p, f.grid().cell_volume());
}

SpectralField upsample(const SpectralField& f, int n_factor) {
    if (n_factor < 1) throw std::invalid_argument("upsample: factor must be >= 1");
    const Grid& g = f.grid();
    if (n_factor == 1) return f;
    Grid fine(g.dim(), g.n() * n_factor, g.box_scale(), g.dealias_fraction());
    SpectralField out(fine, f.real_valued());
    const int n = g.n();
    const int nf = fine.n();
    auto fine_index = [&](int k) { return k >= 0 ? k : k + nf; };
    for_each_mode(g, [&](std::size_t idx, int k1, int k2, int k3) {
        std::size_t fidx;
        if (g.dim() == 2)
            fidx = static_cast<std::size_t>(fine_index(k1)) * nf + fine_index(k2);
        else
            fidx = (static_cast<std::size_t>(fine_index(k1)) * nf + fine_index(k2)) * nf +
                   fine_index(k3);
        for (int a = 0; a < g.dim(); ++a) out.component(a)[fidx] = f.component(a)[idx];
    });
    (void)n;
    if (out.real_valued()) out.symmetrize();
    return out;
}

double sup_norm(const SpectralField& f, bool refine) {
    const SpectralField* src = &f;
    SpectralField fine(f.grid(), f.real_valued());
    if (refine) {
        fine = upsample(f, 2);
        src = &fine;
    }
    const PhysicalField phys = to_physical(*src);
    double worst = 0.0;
    const std::size_t m = phys.grid.size();
    for (std::size_t i = 0; i < m; ++i) worst = std::max(worst, phys.magnitude(i));
    return worst;
}

double grad_l2_norm(const SpectralField& f) {
    const Grid& g = f.grid();
    const double inv_l2 = 1.0 / (g.box_scale() * g.box_scale());
    double s = 0.0;
    for_each_mode(g, [&](std::size_t idx, int k1, int k2, int k3) {
        const double xi2 =
            (static_cast<double>(k1) * k1 + static_cast<double>(k2) * k2 +
             static_cast<double>(k3) * k3) *
            inv_l2;
        double m2 = 0.0;
        for (int a = 0; a < g.dim(); ++a) m2 += std::norm(f.component(a)[idx]);
        s += xi2 * m2;
    });
    double box = 1.0;
    for (int a = 0; a < g.dim(); ++a) box *= g.box_length();
    return std::sqrt(box * s);
}

SpectralField translate(const SpectralField& f, const std::array<int, 3>& steps) {
    const Grid& g = f.grid();
    SpectralField out = f;
    const double step = 2.0 * M_PI / g.n();
    for_each_mode(g, [&](std::size_t idx, int k1, int k2, int k3) {
        // u(x - a) has coefficients u_hat(k) * exp(-i k.a / Lambda); with
        // a = steps * h the phase reduces to -2 pi k.steps / N.
        const double phase = -step * (static_cast<double>(k1) * steps[0] +
                                      static_cast<double>(k2) * steps[1] +
                                      static_cast<double>(k3) * steps[2]);
        const cplx rot(std::cos(phase), std::sin(phase));
        for (int a = 0; a < g.dim(); ++a) out.component(a)[idx] *= rot;
    });
    if (out.real_valued()) out.symmetrize();
    return out;
}

SpectralField rescale_box(const SpectralField& f, double lambda) {
    if (!(lambda > 0.0)) throw std::invalid_argument("rescale_box: lambda must be positive");
    const Grid& g = f.grid();
    Grid scaled(g.dim(), g.n(), g.box_scale() / lambda, g.dealias_fraction());
    SpectralField out(scaled, f.real_valued());
    for (int a = 0; a < g.dim(); ++a) {
        out.component(a) = f.component(a);
        for (auto& v : out.component(a)) v *= lambda;
    }
    return out;
}

double half_space_mass_fraction(const SpectralField& f, double rho) {
    const Grid& g = f.grid();
    const double inv_lambda = 1.0 / g.box_scale();
    double inside = 0.0, total = 0.0;
    for_each_mode(g, [&](std::size_t idx, int k1, int, int) {
        double m2 = 0.0;
        for (int a = 0; a < g.dim(); ++a) m2 += std::norm(f.component(a)[idx]);
        total += m2;
        if (k1 * inv_lambda >= rho) inside += m2;
    });
    return total > 0.0 ? inside / total : 0.0;
}

void xi1_mass_bins(const SpectralField& f, std::vector<double>& bins) {
    const Grid& g = f.grid();
    const int n = g.n();
    if (bins.empty()) bins.assign(static_cast<std::size_t>(n), 0.0);
    const std::size_t plane = g.size() / static_cast<std::size_t>(n);
    for (int a = 0; a < g.dim(); ++a) {
        const auto& c = f.component(a);
        for (int i1 = 0; i1 < n; ++i1) {
            double s = 0.0;
            const std::size_t base = static_cast<std::size_t>(i1) * plane;
            for (std::size_t r = 0; r < plane; ++r) s += std::norm(c[base + r]);
            bins[static_cast<std::size_t>(i1)] += s;
        }
    }
}

double xi1_threshold_from_bins(const Grid& g, const std::vector<double>& bins, double mass_tol) {
    double total = 0.0;
    for (double b : bins) total += b;
    if (total == 0.0) return 0.0;
    std::vector<std::pair<double, double>> by_xi;
    for (int i = 0; i < g.n(); ++i)
        by_xi.emplace_back(g.frequency(i), bins[static_cast<std::size_t>(i)]);
    std::sort(by_xi.begin(), by_xi.end(),
              [](const auto& a, const auto& b) { return a.first > b.first; });
    double cum = 0.0;
    for (const auto& [xi, m] : by_xi) {
        cum += m;
        if (cum >= (1.0 - mass_tol) * total) return xi;
    }
    return by_xi.back().first;
}

double support_threshold_xi1(const SpectralField& f, double mass_tol) {
    std::vector<double> bins;
    xi1_mass_bins(f, bins);
    return xi1_threshold_from_bins(f.grid(), bins, mass_tol);
}

} // namespace mns
