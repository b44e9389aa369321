//==============================================================================
// solver.cpp
// Local mild-solution solver. Each interval [a, a+dt] is solved to a Picard
// fixed point in the split representation u(tau) = e^{(tau-a)L} u(a) - W(tau),
// where W is the Duhamel accumulation: the heat factor is stiff and is
// applied exactly per mode, while W is smooth in tau and is the only thing
// interpolated (piecewise-linear across sub_segments interior nodes). The
// quadrature within a sub-segment is Gauss-Legendre with the heat factor
// exact, so refining sub_segments controls the only O(ds^2) error source.
//==============================================================================

#include "mns/solver.hpp"

#include "mns/duhamel.hpp"
#include "mns/spectral_ops.hpp"

#include <cmath>
#include <stdexcept>

namespace mns {

namespace {

bool finite(const SpectralField& f) {
    for (int a = 0; a < f.dim(); ++a)
        for (const auto& v : f.component(a))
            if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
    return true;
}

double lattice_sup(const SpectralField& f) { return sup_norm(f, false); }

struct StepContext {
    const Trajectory* w = nullptr;        // background flow (perturbed system)
    const TensorTrajectory* f = nullptr;  // matrix forcing
};

struct StepOutcome {
    bool converged = false;
    bool finite = true;
    SpectralField u_end;
    double dissipation = 0.0; // int over the interval of |grad u|_2^2
    int sweeps = 0;

    StepOutcome(const Grid& g, bool real) : u_end(g, real) {}
};

// Picard fixed point on one interval. Returns the end state and the
// dissipation increment integrated with the converged representation.
StepOutcome fixed_point_step(const SpectralField& u_a, double a, double dt,
                             const SolverConfig& cfg, const StepContext& ctx) {
    const Grid& g = u_a.grid();
    StepOutcome out(g, u_a.real_valued());
    const int S = std::max(1, cfg.sub_segments);
    const double ds = dt / S;
    const int gl_per_seg = std::max(2, cfg.gl_nodes / S);

    // Exact heat states at the sub-nodes.
    std::vector<SpectralField> H;
    H.reserve(static_cast<std::size_t>(S) + 1);
    H.push_back(u_a);
    for (int i = 1; i <= S; ++i) H.push_back(heat_propagate(H.back(), ds));

    std::vector<SpectralField> W(static_cast<std::size_t>(S) + 1,
                                 SpectralField(g, u_a.real_valued()));

    // u(tau) with the current W iterate, heat part exact.
    auto eval_u = [&](double tau, const std::vector<SpectralField>& Wc) {
        const double local = tau - a;
        int seg = std::min(S - 1, static_cast<int>(local / ds));
        const double theta = (local - seg * ds) / ds;
        SpectralField u = heat_propagate(u_a, local);
        u.axpy(-(1.0 - theta), Wc[static_cast<std::size_t>(seg)]);
        u.axpy(-theta, Wc[static_cast<std::size_t>(seg) + 1]);
        return u;
    };

    auto integrand = [&](double tau, const std::vector<SpectralField>& Wc) {
        SpectralField u = eval_u(tau, Wc);
        SpectralField n = nonlinear_div(u, u);
        if (ctx.w) {
            const SpectralField w_tau = ctx.w->evaluate(tau);
            n += nonlinear_div(u, w_tau);
            n += nonlinear_div(w_tau, u);
        }
        if (ctx.f) n += projected_tensor_divergence(ctx.f->evaluate(tau));
        return n;
    };

    const double scale = std::max(lattice_sup(u_a), 1.0);
    for (int sweep = 1; sweep <= cfg.max_sweeps; ++sweep) {
        std::vector<SpectralField> Wn;
        Wn.reserve(W.size());
        Wn.emplace_back(g, u_a.real_valued());
        for (int i = 0; i < S; ++i) {
            auto seg_integrand = [&](double tau) { return integrand(tau, W); };
            Wn.push_back(
                duhamel_advance(Wn.back(), a + i * ds, a + (i + 1) * ds, seg_integrand,
                                gl_per_seg));
        }
        double delta = 0.0;
        for (std::size_t i = 1; i < W.size(); ++i) {
            SpectralField d = Wn[i];
            d -= W[i];
            delta = std::max(delta, lattice_sup(d));
        }
        W = std::move(Wn);
        out.sweeps = sweep;
        if (!finite(W.back())) {
            out.finite = false;
            return out;
        }
        if (delta <= cfg.fixed_point_tol || delta <= 1e-14 * scale) {
            out.converged = true;
            break;
        }
    }
    if (!out.converged) return out;

    out.u_end = H[static_cast<std::size_t>(S)];
    out.u_end -= W[static_cast<std::size_t>(S)];
    if (!finite(out.u_end)) {
        out.finite = false;
        return out;
    }

    // Dissipation over the interval with the converged representation.
    std::vector<double> xs, ws;
    gauss_legendre(std::max(4, gl_per_seg), xs, ws);
    for (int i = 0; i < S; ++i) {
        const double lo = a + i * ds, hi = lo + ds;
        const double half = 0.5 * (hi - lo), mid = 0.5 * (hi + lo);
        for (std::size_t m = 0; m < xs.size(); ++m) {
            const double gn = grad_l2_norm(eval_u(mid + half * xs[m], W));
            out.dissipation += half * ws[m] * gn * gn;
        }
    }
    return out;
}

StepRecord make_record(const SpectralField& u, double t, double dt, const SolverConfig& cfg,
                       double dissipation_total) {
    StepRecord rec;
    rec.t = t;
    rec.dt = dt;
    rec.omega = sup_norm(u, cfg.refine_sup);
    for (double p : cfg.p_diag) rec.lp.emplace_back(p, lp_norm(u, p));
    const double l2 = u.l2_norm();
    rec.energy = 0.5 * l2 * l2;
    rec.dissipation = dissipation_total;
    if (cfg.record_support) rec.support_xi1 = support_threshold_xi1(u);
    return rec;
}

SolveResult march(const SpectralField& u0, double t_horizon, const SolverConfig& cfg,
                  const StepContext& ctx) {
    if (!(t_horizon > 0.0)) throw std::invalid_argument("solver: t_horizon must be positive");
    const double div_tol = 1e-10 * std::max(u0.max_abs_coeff(), 1e-300);
    if (u0.divergence_max() > div_tol)
        throw std::invalid_argument("solver: initial data is not divergence-free");
    if (ctx.w && !ctx.w->covers(0.0, t_horizon))
        throw std::invalid_argument("solver: background trajectory does not cover [0, T]");

    SolveResult res;
    SpectralField u = u0;
    double t = 0.0;
    double dissipation_total = 0.0;
    res.trajectory.append(0.0, u, make_record(u, 0.0, 0.0, cfg, 0.0));
    const double omega0 = res.trajectory.record(0).omega;

    auto omega_eff = [&](const SpectralField& state, double at) {
        double w = sup_norm(state, cfg.refine_sup);
        if (ctx.w) w += sup_norm(ctx.w->evaluate(at), cfg.refine_sup);
        return w;
    };

    if (omega0 == 0.0 && !ctx.f && !ctx.w) {
        res.status = SolveStatus::Quiescent;
        res.trajectory.append(t_horizon, u, make_record(u, t_horizon, t_horizon, cfg, 0.0));
        res.t_end = t_horizon;
        return res;
    }

    const double cap = omega0 > 0.0 ? cfg.omega_cap_factor * omega0
                                    : std::numeric_limits<double>::infinity();
    int steps = 0;
    while (t < t_horizon * (1.0 - 1e-12)) {
        if (++steps > cfg.max_steps) {
            res.status = SolveStatus::MaxSteps;
            res.message = "max_steps reached at t = " + std::to_string(t);
            break;
        }
        const double w_eff = omega_eff(u, t);
        double dt = w_eff > 0.0 ? 1.0 / std::pow(8.0 * cfg.c_solve * cfg.c_solve * w_eff, 2)
                                : t_horizon - t;
        dt = std::min({dt, cfg.dt_max, t_horizon - t});
        if (dt < cfg.dt_floor) {
            res.status = SolveStatus::BlowupDeclared;
            res.t_est = t;
            res.message = "dt fell below floor; blowup declared (not certified)";
            break;
        }

        StepOutcome best(u.grid(), u.real_valued());
        double dt_used = dt;
        bool accepted = false;
        for (int h = 0; h <= cfg.max_halvings; ++h) {
            StepOutcome attempt = fixed_point_step(u, t, dt_used, cfg, ctx);
            if (!attempt.finite) {
                res.status = SolveStatus::Diverged;
                res.message = "non-finite iterate at t = " + std::to_string(t);
                res.t_end = t;
                return res;
            }
            if (attempt.converged) {
                best = std::move(attempt);
                accepted = true;
                break;
            }
            dt_used *= 0.5;
            if (dt_used < cfg.dt_floor) break;
        }
        if (!accepted) {
            res.status = SolveStatus::ContractionFailed;
            res.message = "interval failed to contract after halvings at t = " +
                          std::to_string(t);
            break;
        }

        t += dt_used;
        u = std::move(best.u_end);
        dissipation_total += best.dissipation;
        StepRecord rec = make_record(u, t, dt_used, cfg, dissipation_total);
        const double omega_now = rec.omega;
        res.trajectory.append(t, u, std::move(rec));
        if (omega_now > cap) {
            res.status = SolveStatus::BlowupDeclared;
            res.t_est = t;
            res.message = "omega exceeded cap; blowup declared (not certified)";
            break;
        }
    }
    res.t_end = t;
    if (res.status == SolveStatus::Completed && t < t_horizon * (1.0 - 1e-9) &&
        res.message.empty())
        res.message = "stopped before horizon";
    return res;
}

} // namespace

SolveResult solve_local(const SpectralField& u0, double t_horizon, const SolverConfig& cfg) {
    return march(u0, t_horizon, cfg, StepContext{});
}

SolveResult solve_perturbed(const SpectralField& v0, const Trajectory* w,
                            const TensorTrajectory* forcing, double t_horizon,
                            const SolverConfig& cfg) {
    StepContext ctx;
    ctx.w = (w && !w->empty()) ? w : nullptr;
    ctx.f = forcing;
    if (ctx.f && !ctx.f->covers(0.0, t_horizon))
        throw std::invalid_argument("solve_perturbed: forcing does not cover [0, T]");
    return march(v0, t_horizon, cfg, ctx);
}

double energy_identity_defect(const Trajectory& traj) {
    if (traj.empty()) return 0.0;
    const double e0 = traj.record(0).energy;
    if (e0 <= 0.0) return 0.0;
    double worst = 0.0;
    for (std::size_t i = 0; i < traj.size(); ++i) {
        const StepRecord& r = traj.record(i);
        worst = std::max(worst, std::abs(r.energy + r.dissipation - e0) / e0);
    }
    return worst;
}

} // namespace mns
