#include "doctest.h"
#include "oracles.hpp"

#include "mns/besov.hpp"
#include "mns/diagnostics.hpp"
#include "mns/initial_data.hpp"
#include "mns/solver.hpp"
#include "mns/spectral_ops.hpp"

#include <cmath>

using namespace mns;

TEST_CASE("blowup-rate and type-I traces") {
    SUBCASE("sigma_p needs p > d") {
        CHECK(sigma_p(3, 6.0) == doctest::Approx(4.0));
        CHECK_THROWS_AS((void)sigma_p(3, 3.0), std::domain_error);
    }

    SUBCASE("decaying Taylor-Green: rate trace decreasing to 0") {
        Grid g(2, 32);
        const SolveResult res = solve_local(taylor_green(g), 1.0, {});
        const Trace rate = rate_functional(res.trajectory, 2.0);
        CHECK(rate.value.front() > rate.value.back());
        for (std::size_t i = 1; i < rate.value.size(); ++i)
            CHECK(rate.value[i] <= rate.value[i - 1] * (1.0 + 1e-9));
    }

    SUBCASE("zero trajectory gives zero traces") {
        Grid g(2, 16);
        Trajectory traj;
        for (int k = 0; k < 4; ++k) {
            StepRecord rec;
            rec.omega = 0.0;
            rec.lp.emplace_back(6.0, 0.0);
            traj.append(k * 0.1, SpectralField(g, true), rec);
        }
        for (double v : rate_functional(traj, 1.0).value) CHECK(v == 0.0);
        for (double v : typeI_functional(traj, 1.0, 6.0).value) CHECK(v == 0.0);
    }

    SUBCASE("synthetic self-similar family: rate and type-I constant") {
        Grid g(3, 32);
        std::vector<double> times;
        for (int k = 0; k <= 16; ++k) times.push_back(0.64 * k / 16.0);
        const Trajectory traj = oracle::self_similar_trajectory(g, 1.0, 1.0, 0.5, times, {6.0});
        const Trace rate = rate_functional(traj, 1.0);
        const Trace t1 = typeI_functional(traj, 1.0, 6.0);
        const double r0 = rate.value.front(), t0 = t1.value.front();
        for (std::size_t i = 0; i < rate.value.size(); ++i) {
            CHECK(std::abs(rate.value[i] - r0) <= 1e-3 * r0);
            CHECK(std::abs(t1.value[i] - t0) <= 1e-2 * t0);
        }
    }

    SUBCASE("type-I rejects p <= d and early T_est") {
        Grid g(2, 16);
        Trajectory traj;
        traj.append(0.0, SpectralField(g, true));
        traj.append(1.0, SpectralField(g, true));
        CHECK_THROWS_AS((void)typeI_functional(traj, 2.0, 2.0), std::domain_error);
        CHECK_THROWS_AS((void)typeI_functional(traj, 0.5, 6.0), std::invalid_argument);
    }
}

TEST_CASE("concentration-time selection") {
    SUBCASE("exact spacing on an exponential trace") {
        // omega = 2^t, 100 C^2 = 128: threshold crossing every 7 time units
        const double c_conc = std::sqrt(1.28);
        Trace tr;
        for (int k = 0; k <= 600; ++k) {
            tr.t.push_back(0.05 * k);
            tr.value.push_back(std::pow(2.0, tr.t.back()));
        }
        const std::vector<double> taus = select_concentration_times(tr, c_conc);
        REQUIRE(taus.size() >= 4);
        for (std::size_t i = 1; i < taus.size(); ++i)
            CHECK(taus[i] - taus[i - 1] == doctest::Approx(7.0).epsilon(1e-12));
    }

    SUBCASE("bounded trace returns only tau_0") {
        Trace tr;
        for (int k = 0; k <= 100; ++k) {
            tr.t.push_back(0.01 * k);
            tr.value.push_back(1.0 + 0.2 * std::sin(0.3 * k));
        }
        const std::vector<double> taus = select_concentration_times(tr, 1.0);
        CHECK(taus.size() == 1);
        CHECK(taus[0] == 0.0);
    }

    SUBCASE("selected times re-verify both defining inequalities") {
        // wiggly blowup-like trace
        Trace tr;
        for (int k = 0; k <= 2000; ++k) {
            const double t = k / 2000.0 * 0.999;
            tr.t.push_back(t);
            tr.value.push_back((1.0 + 0.3 * std::sin(37.0 * t)) / std::sqrt(1.0 - t));
        }
        const double c_conc = 0.2;
        const double growth = 100.0 * c_conc * c_conc;
        const std::vector<double> taus = select_concentration_times(tr, c_conc);
        REQUIRE(taus.size() >= 3);
        auto omega_at = [&](double t) {
            for (std::size_t i = 0; i < tr.t.size(); ++i)
                if (tr.t[i] == t) return tr.value[i];
            FAIL("tau not on the trace");
            return 0.0;
        };
        for (std::size_t i = 1; i < taus.size(); ++i) {
            const double w_prev = omega_at(taus[i - 1]);
            const double w_cur = omega_at(taus[i]);
            CHECK(w_cur >= growth * w_prev);
            double running = 0.0;
            for (std::size_t k = 0; k < tr.t.size(); ++k)
                if (tr.t[k] >= taus[i - 1] && tr.t[k] <= taus[i])
                    running = std::max(running, tr.value[k]);
            CHECK(w_cur >= 0.5 * running);
        }
    }
}

TEST_CASE("low-frequency dominance") {
    Grid g(2, 64);

    SUBCASE("band-limited field below beta is fully dominant") {
        RandomFieldOptions ro;
        ro.seed = 50;
        ro.band_hi = 4.0;
        const SpectralField u = random_divfree(g, ro);
        const double omega = sup_norm(u);
        // beta = 100 c omega far above the band
        const DominanceResult res = low_frequency_dominance(u, omega, 1.0);
        CHECK(res.dominant);
        CHECK(res.ratio == doctest::Approx(1.0).epsilon(1e-10));
    }

    SUBCASE("a single mode far above beta is annihilated") {
        SpectralField u(g, true);
        const int n = g.n();
        u.component(0)[static_cast<std::size_t>(20) * n] = cplx(0.0, -0.5);
        u.component(0)[static_cast<std::size_t>(n - 20) * n] = cplx(0.0, 0.5);
        const double omega = sup_norm(u);
        // choose c so beta = 100 c omega = 2, mode sits at |xi| = 20 = 10 beta
        const double c_conc = 2.0 / (100.0 * omega);
        const DominanceResult res = low_frequency_dominance(u, omega, c_conc);
        CHECK_FALSE(res.dominant);
        CHECK(res.ratio <= 1e-10);
    }

    SUBCASE("omega = 0 is rejected") {
        SpectralField z(g, true);
        CHECK_THROWS_AS((void)low_frequency_dominance(z, 0.0, 1.0), std::invalid_argument);
    }
}

TEST_CASE("concentration localization") {
    Grid g(2, 64);
    const double w = 0.3;
    const double height = 1.0 / (100.0 * w); // makes beta^{-1} = w at c_conc = 1
    BumpOptions bo;
    bo.amplitude = height;
    bo.width = w;
    bo.center = {g.spacing() * 20, g.spacing() * 44, 0.0};
    const SpectralField u = gaussian_bump(g, bo);
    const double omega = sup_norm(u);

    SUBCASE("bump center and local mass recovered") {
        const double p = 6.0;
        const ConcentrationResult res = locate_concentration(u, omega, p, 8.0, 1.0);
        CHECK(std::abs(res.x_star[0] - bo.center[0]) <= w);
        CHECK(std::abs(res.x_star[1] - bo.center[1]) <= w);
        // closed-form Gaussian integral: |u|_{L^p(ball)} ~ height w^{d/p} (pi/ (p/2))^{d/(2p)}
        const double predicted =
            height * std::pow(w, 2.0 / p) * std::pow(M_PI / (p / 2.0), 1.0 / p);
        CHECK(res.local_mass >= 0.5 * predicted);
        CHECK(res.local_mass <= 2.0 * predicted);
        CHECK(res.bound_ratio > 0.0);
    }

    SUBCASE("translation equivariance of the argmax") {
        const std::array<int, 3> shift = {7, 13, 0};
        const SpectralField moved = translate(u, shift);
        const ConcentrationResult a = locate_concentration(u, omega, 6.0, 8.0, 1.0);
        const ConcentrationResult b = locate_concentration(moved, omega, 6.0, 8.0, 1.0);
        CHECK(b.index[0] == (a.index[0] + shift[0]) % g.n());
        CHECK(b.index[1] == (a.index[1] + shift[1]) % g.n());
    }

    SUBCASE("p = inf with a large ball reproduces the dominance bound") {
        const ConcentrationResult res = locate_concentration(u, omega, kInf, 500.0, 1.0);
        CHECK(res.local_mass >= 0.5 * omega);
        CHECK(res.bound_ratio >= 0.5);
    }

    SUBCASE("unresolvable ball radius is an error") {
        // huge omega pushes the ball radius below one cell
        CHECK_THROWS_AS((void)locate_concentration(u, 1e6, 6.0, 1.0, 1.0),
                        std::invalid_argument);
    }
}

TEST_CASE("scaling covariance of the diagnostics") {
    Grid g(3, 32);
    BumpOptions bo;
    bo.amplitude = 0.8;
    bo.width = 0.45;
    const SpectralField u = gaussian_bump(g, bo);
    const double lambda = 2.0;
    const SpectralField u2 = rescale_box(u, lambda);

    SUBCASE("omega and beta scale by lambda, the ball radius by 1/lambda") {
        const double w1 = sup_norm(u), w2 = sup_norm(u2);
        CHECK(w2 == doctest::Approx(lambda * w1).epsilon(1e-12));
        const DominanceResult d1 = low_frequency_dominance(u, w1, 1.0);
        const DominanceResult d2 = low_frequency_dominance(u2, w2, 1.0);
        CHECK(d2.beta == doctest::Approx(lambda * d1.beta).epsilon(1e-12));
        CHECK(d2.ratio == doctest::Approx(d1.ratio).epsilon(1e-10));
    }

    SUBCASE("type-I integrand is scale-invariant") {
        // u_lambda(t') = lambda u(lambda^2 t') with T' = T / lambda^2
        const double T = 1.0;
        std::vector<double> times = {0.0, 0.2, 0.5};
        const double p = 6.0, sigma = sigma_p(3, p);
        for (double t : times) {
            const double v1 = (T - t) * std::pow(lp_norm(u, p), sigma);
            const double v2 =
                (T / (lambda * lambda) - t / (lambda * lambda)) *
                std::pow(lp_norm(u2, p), sigma);
            CHECK(v2 == doctest::Approx(v1).epsilon(1e-6));
        }
    }
}
