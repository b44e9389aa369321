#include "oracles.hpp"

#include "mns/spectral_ops.hpp"

#include <cmath>
#include <stdexcept>

namespace mns::oracle {

namespace {

int wrap_index(int k, int n) { return ((k % n) + n) % n; }

// wavenumber triple of a flat index
void unflatten(const Grid& g, std::size_t idx, int k[3]) {
    const int n = g.n();
    if (g.dim() == 2) {
        k[0] = g.wavenumber(static_cast<int>(idx) / n);
        k[1] = g.wavenumber(static_cast<int>(idx) % n);
        k[2] = 0;
    } else {
        const std::size_t plane = static_cast<std::size_t>(n) * n;
        k[0] = g.wavenumber(static_cast<int>(idx / plane));
        k[1] = g.wavenumber(static_cast<int>((idx % plane) / static_cast<std::size_t>(n)));
        k[2] = g.wavenumber(static_cast<int>(idx % static_cast<std::size_t>(n)));
    }
}

std::size_t flatten_k(const Grid& g, const int k[3]) {
    const int n = g.n();
    const int i1 = wrap_index(k[0], n);
    const int i2 = wrap_index(k[1], n);
    if (g.dim() == 2) return static_cast<std::size_t>(i1) * n + i2;
    const int i3 = wrap_index(k[2], n);
    return (static_cast<std::size_t>(i1) * n + i2) * n + i3;
}

bool in_lattice(const Grid& g, int k) { return k >= -g.n() / 2 && k <= g.n() / 2 - 1; }

} // namespace

SpectralField dense_leray(const SpectralField& f) {
    const Grid& g = f.grid();
    const int d = g.dim();
    SpectralField out(g, f.real_valued());
    const double inv_lambda = 1.0 / g.box_scale();
    for_each_mode(g, [&](std::size_t idx, int k1, int k2, int k3) {
        const double xi[3] = {k1 * inv_lambda, k2 * inv_lambda, k3 * inv_lambda};
        const double xi2 = xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2];
        // explicit matrix P = I - xi xi^T / |xi|^2, identity at xi = 0
        double P[3][3] = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
        if (xi2 > 0.0)
            for (int a = 0; a < d; ++a)
                for (int b = 0; b < d; ++b) P[a][b] -= xi[a] * xi[b] / xi2;
        for (int a = 0; a < d; ++a) {
            cplx acc(0.0, 0.0);
            for (int b = 0; b < d; ++b) acc += P[a][b] * f.component(b)[idx];
            out.component(a)[idx] = acc;
        }
    });
    return out;
}

SpectralField dense_nonlinear_div(const SpectralField& u, const SpectralField& v) {
    const Grid& g = u.grid();
    if (g.size() > 70000)
        throw std::invalid_argument("dense_nonlinear_div: grid too large for the O(N^{2d}) sum");
    const int d = g.dim();
    const double inv_lambda = 1.0 / g.box_scale();
    const int band = g.dealias_band();

    SpectralField div(g, u.real_valued() && v.real_valued());
    // (u_a v_b)^(k) = sum_{k'} u_a(k') v_b(k - k'), truncated to the lattice
    for_each_mode(g, [&](std::size_t idx, int k1, int k2, int k3) {
        const int k[3] = {k1, k2, k3};
        if (std::abs(k1) > band || std::abs(k2) > band || std::abs(k3) > band) return;
        const double xi[3] = {k1 * inv_lambda, k2 * inv_lambda, k3 * inv_lambda};
        for (int a = 0; a < d; ++a) {
            cplx acc(0.0, 0.0);
            for (int b = 0; b < d; ++b) {
                cplx conv(0.0, 0.0);
                for_each_mode(g, [&](std::size_t idxp, int q1, int q2, int q3) {
                    const int r[3] = {k[0] - q1, k[1] - q2, k[2] - q3};
                    if (!in_lattice(g, r[0]) || !in_lattice(g, r[1]) || !in_lattice(g, r[2]))
                        return;
                    conv += u.component(a)[idxp] * v.component(b)[flatten_k(g, r)];
                });
                acc += xi[b] * conv;
            }
            div.component(a)[idx] = cplx(0.0, 1.0) * acc;
        }
    });
    return dense_leray(div);
}

SpectralField integrating_factor_rk4(const SpectralField& u0, double t_end, double dt) {
    const Grid& g = u0.grid();
    // rhs in w variables: dw/dt = e^{t|xi|^2} N(e^{-t|xi|^2} w), N = -P div(u x u)
    auto apply_heat = [&](const SpectralField& f, double t) { return heat_propagate(f, t); };
    auto apply_inverse_heat = [&](const SpectralField& f, double t) {
        // e^{+t|xi|^2}: valid here because it is always paired with a decay
        // factor at least as strong before any norm is taken
        SpectralField out = f;
        const double inv_l2 = 1.0 / (g.box_scale() * g.box_scale());
        for_each_mode(g, [&](std::size_t idx, int k1, int k2, int k3) {
            const double xi2 = (static_cast<double>(k1) * k1 + static_cast<double>(k2) * k2 +
                                static_cast<double>(k3) * k3) *
                               inv_l2;
            const double grow = std::exp(t * xi2);
            for (int a = 0; a < g.dim(); ++a) out.component(a)[idx] *= grow;
        });
        return out;
    };
    auto rhs = [&](const SpectralField& w, double t) {
        const SpectralField u = apply_heat(w, t);
        SpectralField n = nonlinear_div(u, u);
        n *= -1.0;
        return apply_inverse_heat(n, t);
    };

    SpectralField w = u0;
    const int steps = static_cast<int>(std::llround(t_end / dt));
    double t = 0.0;
    for (int s = 0; s < steps; ++s) {
        const SpectralField k1 = rhs(w, t);
        SpectralField w2 = w;
        w2.axpy(0.5 * dt, k1);
        const SpectralField k2 = rhs(w2, t + 0.5 * dt);
        SpectralField w3 = w;
        w3.axpy(0.5 * dt, k2);
        const SpectralField k3 = rhs(w3, t + 0.5 * dt);
        SpectralField w4 = w;
        w4.axpy(dt, k3);
        const SpectralField k4 = rhs(w4, t + dt);
        w.axpy(dt / 6.0, k1);
        w.axpy(dt / 3.0, k2);
        w.axpy(dt / 3.0, k3);
        w.axpy(dt / 6.0, k4);
        t += dt;
    }
    return apply_heat(w, t);
}

double heat_l2_decay_sum(const SpectralField& f, double t) {
    const Grid& g = f.grid();
    const double inv_l2 = 1.0 / (g.box_scale() * g.box_scale());
    double acc = 0.0;
    for_each_mode(g, [&](std::size_t idx, int k1, int k2, int k3) {
        const double xi2 = (static_cast<double>(k1) * k1 + static_cast<double>(k2) * k2 +
                            static_cast<double>(k3) * k3) *
                           inv_l2;
        const double decay = std::exp(-2.0 * t * xi2);
        for (int a = 0; a < g.dim(); ++a) acc += decay * std::norm(f.component(a)[idx]);
    });
    double box = 1.0;
    for (int a = 0; a < g.dim(); ++a) box *= g.box_length();
    return std::sqrt(box * acc);
}

double one_mode_heat_time_norm(double mu, double s, double q) {
    if (!(s < 0.0)) throw std::domain_error("one_mode_heat_time_norm: s must be < 0");
    const double alpha = -s / 2.0;
    if (std::isinf(q)) {
        // sup_t t^alpha e^{-t mu^2} at t* = alpha / mu^2
        return std::pow(alpha / (M_E * mu * mu), alpha);
    }
    // (int t^{alpha q} e^{-q mu^2 t} dt/t)^{1/q} = (Gamma(alpha q) (q mu^2)^{-alpha q})^{1/q}
    return std::pow(std::tgamma(alpha * q) * std::pow(q * mu * mu, -alpha * q), 1.0 / q);
}

Trajectory self_similar_trajectory(const Grid& grid, double T, double bump_amplitude,
                                   double bump_width, const std::vector<double>& times,
                                   const std::vector<double>& record_p) {
    Trajectory traj;
    const int n = grid.n();
    const double h = grid.spacing();
    const double box = grid.box_length();
    auto min_image2 = [&](double dx) {
        dx = std::fmod(std::abs(dx), box);
        dx = std::min(dx, box - dx);
        return dx * dx;
    };
    for (double t : times) {
        const double s = std::sqrt(T - t);
        PhysicalField phys{grid, true, {}};
        for (int a = 0; a < grid.dim(); ++a) phys.component(a).assign(grid.size(), cplx(0.0, 0.0));
        auto& target = phys.component(0);
        const double w = bump_width * s;
        const double amp = bump_amplitude / s;
        std::size_t idx = 0;
        auto fill = [&](int i1, int i2, int i3) {
            double r2 = min_image2(i1 * h) + min_image2(i2 * h);
            if (grid.dim() == 3) r2 += min_image2(i3 * h);
            target[idx++] = amp * std::exp(-r2 / (2.0 * w * w));
        };
        if (grid.dim() == 2) {
            for (int i1 = 0; i1 < n; ++i1)
                for (int i2 = 0; i2 < n; ++i2) fill(i1, i2, 0);
        } else {
            for (int i1 = 0; i1 < n; ++i1)
                for (int i2 = 0; i2 < n; ++i2)
                    for (int i3 = 0; i3 < n; ++i3) fill(i1, i2, i3);
        }
        SpectralField u = to_spectral(phys);
        StepRecord rec;
        rec.omega = sup_norm(u);
        for (double p : record_p) rec.lp.emplace_back(p, lp_norm(u, p));
        traj.append(t, std::move(u), std::move(rec));
    }
    return traj;
}

} // namespace mns::oracle
