//==============================================================================
// picard.cpp
// The iteration sequence u^{(n+1)} = e^{tL} u0 - B(u^{(n)}, u^{(n)}) on a
// uniform time lattice. Iterates are represented in split form
// u^{(n)}(t) = e^{tL} u0 - W_n(t): the stiff heat part is evaluated exactly
// at every quadrature node and only the smooth Duhamel accumulation W_n is
// interpolated between lattice nodes, matching the solver's discretization.
// Successive differences are then plain W-differences, which feeds the
// support statistics directly.
//==============================================================================

#include "mns/picard.hpp"

#include "mns/duhamel.hpp"
#include "mns/spectral_ops.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace mns {

namespace {

bool finite(const SpectralField& f) {
    for (int a = 0; a < f.dim(); ++a)
        for (const auto& v : f.component(a))
            if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
    return true;
}

struct SupportAccumulator {
    std::vector<double> bins;

    void add(const SpectralField& diff) { xi1_mass_bins(diff, bins); }

    double threshold(const Grid& g, double tol) const {
        return bins.empty() ? 0.0 : xi1_threshold_from_bins(g, bins, tol);
    }

    double mass_at_or_above(const Grid& g, double rho) const {
        double inside = 0.0;
        for (int i = 0; i < g.n(); ++i)
            if (g.frequency(i) >= rho) inside += bins[static_cast<std::size_t>(i)];
        return inside;
    }

    double total() const {
        double t = 0.0;
        for (double b : bins) t += b;
        return t;
    }
};

struct IterationState {
    PicardResult result;
    std::vector<double> outside_fractions; // only filled when rho > 0
};

// Shared driver: iterates to n_max, recording sup norms, support thresholds
// and (when rho > 0) the diff mass fractions outside {xi_1 >= (n+1) rho}.
IterationState run_iteration(const SpectralField& u0, int n_max, const PicardConfig& cfg,
                             double rho) {
    if (n_max < 1) throw std::invalid_argument("picard: n_max must be >= 1");
    if (cfg.lattice_nodes < 2) throw std::invalid_argument("picard: lattice_nodes must be >= 2");
    if (!(cfg.t_horizon > 0.0)) throw std::invalid_argument("picard: t_horizon must be positive");
    const double div_tol = 1e-10 * std::max(u0.max_abs_coeff(), 1e-300);
    if (u0.divergence_max() > div_tol)
        throw std::invalid_argument("picard: u0 must be divergence-free");

    const Grid& g = u0.grid();
    const int nodes = cfg.lattice_nodes;
    std::vector<double> lattice(static_cast<std::size_t>(nodes), 0.0);
    if (cfg.t_min > 0.0 && nodes > 2) {
        const double r = std::pow(cfg.t_horizon / cfg.t_min, 1.0 / (nodes - 2));
        for (int k = 1; k < nodes; ++k)
            lattice[static_cast<std::size_t>(k)] = cfg.t_min * std::pow(r, k - 1);
        lattice.back() = cfg.t_horizon;
    } else {
        for (int k = 0; k < nodes; ++k)
            lattice[static_cast<std::size_t>(k)] = cfg.t_horizon * k / (nodes - 1);
    }

    // e^{tL} u0 on the lattice, marched exactly.
    Trajectory linear;
    {
        SpectralField u = u0;
        linear.append(0.0, u);
        for (int k = 1; k < nodes; ++k) {
            heat_propagate_inplace(u, lattice[static_cast<std::size_t>(k)] -
                                          lattice[static_cast<std::size_t>(k - 1)]);
            linear.append(lattice[static_cast<std::size_t>(k)], u);
        }
    }

    IterationState state;
    // u^{(0)} = 0  <=>  W_0 = e^{tL} u0
    Trajectory w_prev = linear;

    for (int n = 0; n < n_max; ++n) {
        // W_{n+1} = B(u^{(n)}, u^{(n)}) with u^{(n)}(tau) = e^{tau L} u0 - W_n(tau)
        Trajectory w_next;
        auto integrand = [&](double tau) {
            SpectralField u = (n == 0) ? SpectralField(g, u0.real_valued())
                                       : [&] {
                                             SpectralField v = heat_propagate(u0, tau);
                                             v -= w_prev.evaluate(tau);
                                             return v;
                                         }();
            return nonlinear_div(u, u);
        };
        SupportAccumulator support;
        double sup_prev = 0.0, sup_diff = 0.0;
        SpectralField acc(g, u0.real_valued());
        bool ok = true;
        for (int k = 0; k < nodes; ++k) {
            const double t = lattice[static_cast<std::size_t>(k)];
            // n = 0: B(0, 0) = 0, skip the quadrature entirely
            if (k > 0 && n > 0)
                acc = duhamel_advance(acc, lattice[static_cast<std::size_t>(k - 1)], t,
                                      integrand, cfg.gl_nodes);
            if (!finite(acc)) {
                ok = false;
                break;
            }
            // diff = u^{(n+1)} - u^{(n)} = W_n - W_{n+1} at this node
            SpectralField diff = w_prev.field(static_cast<std::size_t>(k));
            diff -= acc;
            support.add(diff);
            sup_diff = std::max(sup_diff, sup_norm(diff, cfg.refine_sup));
            // u^{(n)} at the node
            SpectralField u_n = linear.field(static_cast<std::size_t>(k));
            u_n -= w_prev.field(static_cast<std::size_t>(k));
            sup_prev = std::max(sup_prev, sup_norm(u_n, cfg.refine_sup));
            w_next.append(t, std::move(acc));
            acc = w_next.field(w_next.size() - 1); // keep marching copy
        }
        if (!ok) {
            state.result.status = PicardStatus::Diverged;
            state.result.diverged_at = n + 1;
            break;
        }
        IterationRecord rec;
        rec.n = n;
        rec.sup_xt = sup_prev;
        rec.diff_sup_xt = sup_diff;
        rec.support_threshold = support.threshold(g, cfg.support_mass_tol);
        state.result.records.push_back(rec);
        if (rho > 0.0) {
            const double total = support.total();
            const double inside = support.mass_at_or_above(g, (n + 1) * rho);
            state.outside_fractions.push_back(total > 0.0 ? (total - inside) / total : 0.0);
        }
        w_prev = std::move(w_next);
    }

    // final iterate u^{(n_max)} = e^{tL} u0 - W_{n_max} on the lattice
    Trajectory final;
    for (std::size_t k = 0; k < w_prev.size(); ++k) {
        SpectralField u = linear.field(k);
        u -= w_prev.field(k);
        final.append(w_prev.time(k), std::move(u));
    }
    state.result.final = std::move(final);
    return state;
}

bool supported_in_half_space(const SpectralField& u0, double rho) {
    if (u0.spectral_mass() == 0.0) return true; // vacuous for the zero field
    return half_space_mass_fraction(u0, rho) >= 1.0 - 1e-12;
}

} // namespace

PicardResult picard_iterate(const SpectralField& u0, int n_max, const PicardConfig& cfg) {
    return run_iteration(u0, n_max, cfg, 0.0).result;
}

SupportTrackResult frequency_support_tracker(const SpectralField& u0, double rho, int n_max,
                                             const PicardConfig& cfg) {
    if (!supported_in_half_space(u0, rho))
        throw std::invalid_argument(
            "frequency_support_tracker: u0 spectrum not supported in {xi_1 >= rho}");
    IterationState state = run_iteration(u0, n_max + 1, cfg, rho);
    if (state.result.status != PicardStatus::Ok)
        throw std::runtime_error("frequency_support_tracker: iteration diverged");
    SupportTrackResult out;
    for (const auto& rec : state.result.records) out.thresholds.push_back(rec.support_threshold);
    out.outside_fractions = std::move(state.outside_fractions);
    return out;
}

GlobalCriterionResult check_global_criterion(const SpectralField& u0, double rho, int n0_max,
                                             double c_glob, const PicardConfig& cfg) {
    if (!supported_in_half_space(u0, rho))
        throw std::invalid_argument(
            "check_global_criterion: u0 spectrum not supported in {xi_1 >= rho}");
    if (!(c_glob > 0.0))
        throw std::invalid_argument("check_global_criterion: c_glob must be positive");

    GlobalCriterionResult out;
    out.t_probe = cfg.t_horizon;
    out.c_glob = c_glob;

    const int n_top = n0_max + 3; // enough iterates to see the decay tail
    PicardResult pr = picard_iterate(u0, n_top, cfg);
    if (pr.status != PicardStatus::Ok)
        throw std::runtime_error("check_global_criterion: iteration diverged");
    for (const auto& r : pr.records) {
        out.m_quantities.push_back(r.sup_xt);
        out.diff_sups.push_back(r.diff_sup_xt);
    }
    // m_quantities[n] = |u^{(n)}|; append the last iterate's sup.
    double last_sup = 0.0;
    for (std::size_t k = 0; k < pr.final.size(); ++k)
        last_sup = std::max(last_sup, sup_norm(pr.final.field(k), cfg.refine_sup));
    out.m_quantities.push_back(last_sup);

    double best_margin = -std::numeric_limits<double>::infinity();
    for (int n0 = 0; n0 <= n0_max; ++n0) {
        const double m = out.m_quantities[static_cast<std::size_t>(n0)] +
                         out.m_quantities[static_cast<std::size_t>(n0 + 1)];
        const double margin = (n0 + 1) * rho - 4.0 * c_glob * m;
        if (margin > best_margin) {
            best_margin = margin;
            out.best_n0 = n0;
        }
        if (margin >= 0.0 && !out.satisfied) {
            out.satisfied = true;
            out.best_n0 = n0;
            out.margin = margin;
            break;
        }
    }
    if (!out.satisfied) out.margin = best_margin;

    if (out.satisfied) {
        // geometric decay check: d_l <= M0 / 2^{l - n0} past n0
        const int n0 = out.best_n0;
        const double m0 = out.m_quantities[static_cast<std::size_t>(n0)] +
                          out.m_quantities[static_cast<std::size_t>(n0 + 1)];
        out.decay_ok = true;
        for (std::size_t l = static_cast<std::size_t>(n0) + 1; l < out.diff_sups.size(); ++l) {
            const double bound = m0 / std::ldexp(1.0, static_cast<int>(l) - n0);
            if (out.diff_sups[l] > bound && out.diff_sups[l] > 1e-14 * m0) out.decay_ok = false;
            if (l > static_cast<std::size_t>(n0) + 1 && out.diff_sups[l - 1] > 0.0)
                out.decay_ratios.push_back(out.diff_sups[l] / out.diff_sups[l - 1]);
        }
    }
    return out;
}

} // namespace mns
