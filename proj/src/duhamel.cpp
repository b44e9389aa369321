#include "mns/duhamel.hpp"

#include "mns/spectral_ops.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace mns {

void gauss_legendre(int order, std::vector<double>& nodes, std::vector<double>& weights) {
    if (order < 1) throw std::invalid_argument("gauss_legendre: order must be >= 1");
    static std::mutex cache_mutex;
    static std::map<int, std::pair<std::vector<double>, std::vector<double>>> cache;
    std::lock_guard<std::mutex> lock(cache_mutex); // sweeps solve in parallel
    auto it = cache.find(order);
    if (it == cache.end()) {
        std::vector<double> x(static_cast<std::size_t>(order)),
            w(static_cast<std::size_t>(order));
        for (int i = 0; i < order; ++i) {
            // Newton iteration from the Chebyshev estimate of the i-th root.
            double t = std::cos(M_PI * (i + 0.75) / (order + 0.5));
            for (int iter = 0; iter < 100; ++iter) {
                double p0 = 1.0, p1 = t;
                for (int k = 2; k <= order; ++k) {
                    const double p2 = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
                    p0 = p1;
                    p1 = p2;
                }
                const double dp = order * (t * p1 - p0) / (t * t - 1.0);
                const double t_new = t - p1 / dp;
                if (std::abs(t_new - t) < 1e-15) {
                    t = t_new;
                    break;
                }
                t = t_new;
            }
            double p0 = 1.0, p1 = t;
            for (int k = 2; k <= order; ++k) {
                const double p2 = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            const double dp = order * (t * p1 - p0) / (t * t - 1.0);
            x[static_cast<std::size_t>(i)] = t;
            w[static_cast<std::size_t>(i)] = 2.0 / ((1.0 - t * t) * dp * dp);
        }
        it = cache.emplace(order, std::make_pair(std::move(x), std::move(w))).first;
    }
    nodes = it->second.first;
    weights = it->second.second;
}

SpectralField duhamel_advance(const SpectralField& acc, double t_prev, double t_next,
                              const std::function<SpectralField(double)>& integrand,
                              int gl_nodes) {
    if (t_next < t_prev) throw std::invalid_argument("duhamel_advance: t_next < t_prev");
    SpectralField out = heat_propagate(acc, t_next - t_prev);
    if (t_next == t_prev) return out;
    std::vector<double> xs, ws;
    gauss_legendre(gl_nodes, xs, ws);
    const double half = 0.5 * (t_next - t_prev);
    const double mid = 0.5 * (t_next + t_prev);
    for (std::size_t m = 0; m < xs.size(); ++m) {
        const double tau = mid + half * xs[m];
        SpectralField piece = integrand(tau);
        heat_propagate_inplace(piece, t_next - tau);
        out.axpy(half * ws[m], piece);
    }
    return out;
}

SpectralField bilinear_B(const Trajectory& u, const Trajectory& v, double t, int gl_nodes) {
    if (t < 0.0) throw std::domain_error("bilinear_B: t must be nonnegative");
    if (!u.covers(0.0, t) || !v.covers(0.0, t))
        throw std::invalid_argument("bilinear_B: trajectories do not cover [0, t]");
    SpectralField acc(u.field(0).grid(), u.field(0).real_valued() && v.field(0).real_valued());
    if (t == 0.0) return acc;
    auto integrand = [&](double tau) {
        const SpectralField ut = u.evaluate(tau);
        const SpectralField vt = v.evaluate(tau);
        return nonlinear_div(ut, vt);
    };
    // March over the union of u's node intervals clipped to [0, t].
    double prev = 0.0;
    for (std::size_t i = 1; i < u.size() && prev < t; ++i) {
        const double next = std::min(u.time(i), t);
        if (next <= prev) continue;
        acc = duhamel_advance(acc, prev, next, integrand, gl_nodes);
        prev = next;
    }
    if (prev < t) acc = duhamel_advance(acc, prev, t, integrand, gl_nodes);
    return acc;
}

SpectralField projected_tensor_divergence(const TensorField& f) {
    const Grid& g = f.grid;
    SpectralField out(g, false);
    const double inv_lambda = 1.0 / g.box_scale();
    for_each_mode(g, [&](std::size_t idx, int k1, int k2, int k3) {
        const double xi[3] = {k1 * inv_lambda, k2 * inv_lambda, k3 * inv_lambda};
        for (int a = 0; a < g.dim(); ++a) {
            cplx s(0.0, 0.0);
            for (int b = 0; b < g.dim(); ++b) s += xi[b] * f.at(a, b)[idx];
            out.component(a)[idx] = cplx(0.0, 1.0) * s;
        }
    });
    return leray_project(out);
}

} // namespace mns
