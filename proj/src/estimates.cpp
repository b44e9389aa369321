//==============================================================================
// estimates.cpp
// Numerically verified linear estimates: the third-derivative block decay
// bound and the heat space-time bound, both as measured LHS/RHS ratios. The
// harness never proves the inequalities; it reports empirical constants and
// their stability under grid refinement.
//==============================================================================

#include "mns/estimates.hpp"

#include "mns/initial_data.hpp"
#include "mns/spectral_ops.hpp"

#include <cmath>
#include <stdexcept>

namespace mns {

namespace {

SpectralField third_derivative_block(const SpectralField& f, int j, const CutoffFamily& family,
                                     double t, int dl, int dm, int dn) {
    const Grid& g = f.grid();
    const double inv_lambda = 1.0 / g.box_scale();
    SpectralField out = f;
    for_each_mode(g, [&](std::size_t idx, int k1, int k2, int k3) {
        const double xi[3] = {k1 * inv_lambda, k2 * inv_lambda, k3 * inv_lambda};
        const double r2 = xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2];
        cplx m(0.0, 0.0);
        if (r2 > 0.0) {
            // symbol of Delta_j (-L)^{-1} d_l d_m d_n e^{tL}: phi_j(xi) *
            // (i xi_l)(i xi_m)(i xi_n) / |xi|^2 * e^{-t |xi|^2}
            const double sym = xi[dl] * xi[dm] * xi[dn] / r2;
            m = cplx(0.0, -1.0) * sym * family.phi_j(j, std::sqrt(r2)) * std::exp(-t * r2);
        }
        for (int a = 0; a < g.dim(); ++a) out.component(a)[idx] *= m;
    });
    if (out.real_valued()) out.symmetrize();
    return out;
}

double field_lr(const SpectralField& f, double r) {
    return std::isinf(r) ? sup_norm(f) : lp_norm(f, r);
}

} // namespace

RatioTrace verify_exp_decay(const SpectralField& f, int j, double r,
                            const std::vector<double>& t_grid, const CutoffFamily& family,
                            int dl, int dm, int dn) {
    const int d = f.dim();
    if (dl < 0 || dl >= d || dm < 0 || dm >= d || dn < 0 || dn >= d)
        throw std::invalid_argument("verify_exp_decay: derivative index outside [0, d)");
    const double fr = field_lr(f, r);
    if (fr == 0.0) throw std::invalid_argument("verify_exp_decay: f must be nonzero");
    RatioTrace trace;
    for (double t : t_grid) {
        if (t < 0.0) throw std::domain_error("verify_exp_decay: t must be nonnegative");
        const SpectralField lhs_field = third_derivative_block(f, j, family, t, dl, dm, dn);
        const double lhs = field_lr(lhs_field, r);
        const double rhs = std::ldexp(1.0, j) * std::exp(-t * std::ldexp(1.0, 2 * j - 4)) * fr;
        trace.t.push_back(t);
        trace.ratio.push_back(lhs / rhs);
        trace.sup = std::max(trace.sup, lhs / rhs);
    }
    return trace;
}

RatioTrace verify_exp_decay(const SpectralField& f, int j, double r,
                            const std::vector<double>& t_grid) {
    // The operator symbol vanishes outside the block annulus, so a window is
    // only needed to evaluate phi_j itself; use a window containing j.
    CutoffFamily fam(std::min(j, 0), std::max(j, 0));
    return verify_exp_decay(f, j, r, t_grid, fam);
}

double verify_heat_spacetime(const SpectralField& f, double a, double r, double p, double gamma,
                             const CutoffFamily& family, int points_per_octave) {
    if (a < 0.0) throw std::invalid_argument("verify_heat_spacetime: a must be >= 0");
    if (!(gamma >= r && r > 1.0))
        throw std::invalid_argument("verify_heat_spacetime: requires gamma >= r > 1");
    const double relation = 2.0 / gamma - (a + f.dim() * (1.0 / r - 1.0 / p));
    if (std::abs(relation) > 1e-9)
        throw std::invalid_argument(
            "verify_heat_spacetime: exponent relation 2/gamma = a + d(1/r - 1/p) violated");

    SpectralField base = f;
    for (int c = 0; c < base.dim(); ++c) base.component(c)[0] = cplx(0.0, 0.0);
    if (base.spectral_mass() == 0.0)
        throw std::domain_error("verify_heat_spacetime: f = 0 gives 0/0");

    const double rhs = riesz_lr_norm(base, a, r);

    auto norm_at = [&](double t) {
        const SpectralField ht = heat_propagate(base, t);
        return std::isinf(p) ? sup_norm(ht) : lp_norm(ht, p);
    };

    if (std::isinf(gamma)) {
        double sup = std::isinf(p) ? sup_norm(base) : lp_norm(base, p);
        double t = std::ldexp(1.0, -2 * family.j_max());
        const double t_hi = std::ldexp(1.0, -2 * family.j_min()) * 16.0;
        const double step = std::pow(2.0, 1.0 / points_per_octave);
        for (; t <= t_hi; t *= step) sup = std::max(sup, norm_at(t));
        return sup / rhs;
    }

    // integral of |e^{tL} f|_p^gamma dt: trapezoid in log t with weight t
    // plus a flat head [0, t_first]; both ends extended octave by octave
    // until they stop contributing (the norm flattens to |f|_p as t -> 0, so
    // the downward extension terminates).
    const double dlog = std::log(2.0) / points_per_octave;
    std::vector<double> ts, gs;
    double t_lo = std::ldexp(1.0, -2 * family.j_max()) / 4.0;
    double t_hi = std::ldexp(1.0, -2 * family.j_min());
    for (double lt = std::log(t_lo); lt <= std::log(t_hi) + 0.5 * dlog; lt += dlog) {
        ts.push_back(std::exp(lt));
        gs.push_back(std::pow(norm_at(ts.back()), gamma));
    }
    auto total = [&]() {
        double acc = ts.front() * gs.front(); // flat head [0, t_first]
        for (std::size_t i = 0; i + 1 < gs.size(); ++i)
            acc += 0.5 * (gs[i] * ts[i] + gs[i + 1] * ts[i + 1]) * dlog;
        return acc;
    };
    for (int e = 0; e < 60; ++e) {
        const double before = total();
        for (int m = 0; m < points_per_octave; ++m) {
            const double t = ts.front() * std::exp(-dlog);
            ts.insert(ts.begin(), t);
            gs.insert(gs.begin(), std::pow(norm_at(t), gamma));
        }
        if (std::abs(total() - before) <= 1e-7 * total()) break;
    }
    for (int e = 0; e < 60; ++e) {
        const double before = total();
        for (int m = 0; m < points_per_octave; ++m) {
            const double t = ts.back() * std::exp(dlog);
            ts.push_back(t);
            gs.push_back(std::pow(norm_at(t), gamma));
        }
        if (total() - before <= 1e-7 * total()) break;
    }
    return std::pow(total(), 1.0 / gamma) / rhs;
}

double verify_heat_spacetime(const SpectralField& f, double a, double r, double p, double gamma) {
    return verify_heat_spacetime(f, a, r, p, gamma, CutoffFamily::for_grid(f.grid()));
}

double bernstein_ratio(const SpectralField& f, int j, double p, const CutoffFamily& family) {
    const SpectralField block = dyadic_block(f, j, family);
    const double bp = std::isinf(p) ? sup_norm(block) : lp_norm(block, p);
    if (bp == 0.0) return 0.0;
    const double gain = std::pow(std::ldexp(1.0, j), f.dim() / p);
    return sup_norm(block) / (gain * bp);
}

double measured_decay_constant(const DecayConstantOptions& opts) {
    Grid grid(opts.dim, opts.n, 1.0);
    double sup = 0.0;
    for (int m = 0; m < opts.fields; ++m) {
        RandomFieldOptions ro;
        ro.seed = opts.seed + static_cast<std::uint64_t>(m);
        ro.band_lo = 1.0;
        ro.band_hi = grid.dealias_band();
        ro.spectrum_slope = 0.0; // white in the band
        const SpectralField f = random_divfree(grid, ro);
        for (int j = opts.j_lo; j <= opts.j_hi; ++j) {
            CutoffFamily fam(std::min(j, grid.default_j_min()),
                             std::max(j, grid.default_j_max()));
            std::vector<double> ts;
            const double t_max = 4.0 * std::ldexp(1.0, -2 * j);
            for (int i = 0; i < opts.t_points; ++i)
                ts.push_back(t_max * i / (opts.t_points - 1));
            const RatioTrace tr = verify_exp_decay(f, j, kInf, ts, fam);
            sup = std::max(sup, tr.sup);
        }
    }
    return sup;
}

} // namespace mns
