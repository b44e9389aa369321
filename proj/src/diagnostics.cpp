#include "mns/diagnostics.hpp"

#include "mns/cutoff.hpp"
#include "mns/spectral_ops.hpp"

#include <cmath>
#include <stdexcept>

namespace mns {

double sigma_p(int dim, double p) {
    if (!(p > dim)) throw std::domain_error("sigma_p: requires p > d");
    return 2.0 / (1.0 - dim / p);
}

Trace omega_trace(const Trajectory& traj) {
    Trace tr;
    for (std::size_t i = 0; i < traj.size(); ++i) {
        tr.t.push_back(traj.time(i));
        tr.value.push_back(traj.record(i).omega);
    }
    return tr;
}

namespace {

void check_t_est(const Trajectory& traj, double t_est) {
    if (traj.empty()) throw std::invalid_argument("trace: empty trajectory");
    if (t_est < traj.last_time() * (1.0 - 1e-12))
        throw std::invalid_argument("trace: T_est must not precede the last trajectory time");
}

double lp_of_step(const Trajectory& traj, std::size_t i, double p) {
    for (const auto& [q, v] : traj.record(i).lp)
        if (q == p) return v;
    return lp_norm(traj.field(i), p);
}

} // namespace

Trace rate_functional(const Trajectory& traj, double t_est) {
    check_t_est(traj, t_est);
    Trace tr;
    for (std::size_t i = 0; i < traj.size(); ++i) {
        const double rem = t_est - traj.time(i);
        tr.t.push_back(traj.time(i));
        tr.value.push_back(rem > 0.0 ? std::sqrt(rem) * traj.record(i).omega : 0.0);
    }
    return tr;
}

Trace typeI_functional(const Trajectory& traj, double t_est, double p) {
    check_t_est(traj, t_est);
    const double sigma = sigma_p(traj.field(0).dim(), p);
    Trace tr;
    for (std::size_t i = 0; i < traj.size(); ++i) {
        const double rem = t_est - traj.time(i);
        tr.t.push_back(traj.time(i));
        tr.value.push_back(rem > 0.0 ? rem * std::pow(lp_of_step(traj, i, p), sigma) : 0.0);
    }
    return tr;
}

std::vector<double> select_concentration_times(const Trace& omega, double c_conc) {
    if (omega.t.empty()) throw std::invalid_argument("select_concentration_times: empty trace");
    if (!(c_conc > 0.0))
        throw std::invalid_argument("select_concentration_times: C must be positive");
    const double growth = 100.0 * c_conc * c_conc;
    std::vector<double> taus;
    std::size_t prev = 0;
    taus.push_back(omega.t[0]);
    while (true) {
        const double threshold = growth * omega.value[prev];
        // earliest time reaching the growth threshold
        std::size_t hit = prev;
        bool found = false;
        for (std::size_t i = prev + 1; i < omega.t.size(); ++i) {
            if (omega.value[i] >= threshold) {
                hit = i;
                found = true;
                break;
            }
        }
        if (!found) break;
        double running_max = 0.0;
        for (std::size_t i = prev; i <= hit; ++i)
            running_max = std::max(running_max, omega.value[i]);
        // latest s <= hit still satisfying both defining inequalities
        std::size_t pick = hit;
        for (std::size_t i = hit;; --i) {
            if (omega.value[i] >= threshold && omega.value[i] >= 0.5 * running_max) {
                pick = i;
                break;
            }
            if (i == prev + 1) {
                pick = hit;
                break;
            }
        }
        taus.push_back(omega.t[pick]);
        prev = pick;
    }
    return taus;
}

DominanceResult low_frequency_dominance(const SpectralField& u, double omega, double c_conc) {
    if (!(omega > 0.0)) throw std::invalid_argument("low_frequency_dominance: omega must be > 0");
    DominanceResult out;
    out.beta = 100.0 * c_conc * omega;
    const SpectralField low = low_pass(u, out.beta);
    out.ratio = sup_norm(low) / omega;
    out.dominant = out.ratio >= 0.5;
    return out;
}

ConcentrationResult locate_concentration(const SpectralField& u, double omega, double p, double M,
                                         double c_conc) {
    if (!(omega > 0.0)) throw std::invalid_argument("locate_concentration: omega must be > 0");
    if (p < 1.0) throw std::domain_error("locate_concentration: p must be in [1, inf]");
    if (!(M > 0.0)) throw std::invalid_argument("locate_concentration: M must be positive");
    const Grid& g = u.grid();
    ConcentrationResult out;
    out.beta = 100.0 * c_conc * omega;
    out.radius = M / out.beta;
    const double h = g.spacing();
    if (out.radius < h)
        throw std::invalid_argument(
            "locate_concentration: ball radius below one lattice cell, refine the grid");

    // argmax of |P_{<= beta} u| on the plain lattice, first maximum wins
    // (row-major scan = lexicographically smallest index).
    const PhysicalField low = to_physical(low_pass(u, out.beta));
    const int n = g.n();
    double best = -1.0;
    std::size_t best_idx = 0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double m = low.magnitude(i);
        if (m > best) {
            best = m;
            best_idx = i;
        }
    }
    if (g.dim() == 2) {
        out.index = {static_cast<int>(best_idx) / n, static_cast<int>(best_idx) % n, 0};
    } else {
        const std::size_t plane = static_cast<std::size_t>(n) * n;
        out.index = {static_cast<int>(best_idx / plane),
                     static_cast<int>((best_idx % plane) / static_cast<std::size_t>(n)),
                     static_cast<int>(best_idx % static_cast<std::size_t>(n))};
    }
    for (int a = 0; a < g.dim(); ++a) out.x_star[static_cast<std::size_t>(a)] = out.index[static_cast<std::size_t>(a)] * h;

    // local mass over the periodic ball around x*
    const PhysicalField phys = to_physical(u);
    const double box = g.box_length();
    auto wrap = [&](double dx) {
        dx = std::fmod(std::abs(dx), box);
        return std::min(dx, box - dx);
    };
    const double r2max = out.radius * out.radius;
    double acc = 0.0, sup_ball = 0.0;
    std::size_t idx = 0;
    auto visit = [&](int i1, int i2, int i3) {
        double d2 = wrap((i1 - out.index[0]) * h) * wrap((i1 - out.index[0]) * h) +
                    wrap((i2 - out.index[1]) * h) * wrap((i2 - out.index[1]) * h);
        if (g.dim() == 3) d2 += wrap((i3 - out.index[2]) * h) * wrap((i3 - out.index[2]) * h);
        if (d2 <= r2max) {
            const double m = phys.magnitude(idx);
            sup_ball = std::max(sup_ball, m);
            if (!std::isinf(p)) acc += std::pow(m, p);
        }
        ++idx;
    };
    if (g.dim() == 2) {
        for (int i1 = 0; i1 < n; ++i1)
            for (int i2 = 0; i2 < n; ++i2) visit(i1, i2, 0);
    } else {
        for (int i1 = 0; i1 < n; ++i1)
            for (int i2 = 0; i2 < n; ++i2)
                for (int i3 = 0; i3 < n; ++i3) visit(i1, i2, i3);
    }
    out.local_mass = std::isinf(p) ? sup_ball : std::pow(acc * g.cell_volume(), 1.0 / p);
    const double expo = 1.0 - (std::isinf(p) ? 0.0 : g.dim() / p);
    out.bound_ratio = out.local_mass / std::pow(omega, expo);
    return out;
}

} // namespace mns
