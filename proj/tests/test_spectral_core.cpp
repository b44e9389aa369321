#include "doctest.h"
#include "oracles.hpp"

#include "mns/fft.hpp"
#include "mns/initial_data.hpp"
#include "mns/spectral_ops.hpp"

#include <cmath>
#include <random>

using namespace mns;

namespace {

std::size_t flat(const Grid& g, int k1, int k2, int k3 = 0) {
    const int n = g.n();
    auto wrap = [&](int k) { return ((k % n) + n) % n; };
    if (g.dim() == 2) return static_cast<std::size_t>(wrap(k1)) * n + wrap(k2);
    return (static_cast<std::size_t>(wrap(k1)) * n + wrap(k2)) * n + wrap(k3);
}

double rel_l2_diff(const SpectralField& a, const SpectralField& b) {
    SpectralField d = a;
    d -= b;
    const double den = std::max(b.l2_norm(), 1e-300);
    return d.l2_norm() / den;
}

} // namespace

TEST_CASE("transform round trip and trivial spectra") {
    Grid g(2, 16);

    SUBCASE("constant field has spectral mass only at k = 0") {
        PhysicalField phys{g, true, {}};
        for (int a = 0; a < 2; ++a) phys.component(a).assign(g.size(), cplx(0.0, 0.0));
        for (auto& v : phys.component(0)) v = 3.25;
        const SpectralField f = to_spectral(phys);
        CHECK(std::abs(f.component(0)[0] - cplx(3.25, 0.0)) < 1e-13);
        double off_mass = f.spectral_mass() - std::norm(f.component(0)[0]);
        CHECK(off_mass < 1e-24);
    }

    SUBCASE("sin(x1) e2 has exactly the two modes k = (+-1, 0)") {
        PhysicalField phys{g, true, {}};
        for (int a = 0; a < 2; ++a) phys.component(a).assign(g.size(), cplx(0.0, 0.0));
        const double h = g.spacing();
        for (int i1 = 0; i1 < g.n(); ++i1)
            for (int i2 = 0; i2 < g.n(); ++i2)
                phys.component(1)[static_cast<std::size_t>(i1) * g.n() + i2] = std::sin(i1 * h);
        const SpectralField f = to_spectral(phys);
        const cplx plus = f.component(1)[flat(g, 1, 0)];
        const cplx minus = f.component(1)[flat(g, -1, 0)];
        CHECK(std::abs(plus - cplx(0.0, -0.5)) < 1e-13);
        CHECK(std::abs(minus - cplx(0.0, 0.5)) < 1e-13);
        int nonzero = 0;
        for (int a = 0; a < 2; ++a)
            for (const auto& v : f.component(a))
                if (std::abs(v) > 1e-12) ++nonzero;
        CHECK(nonzero == 2);
    }

    SUBCASE("random field round-trips to 1e-12 relative") {
        RandomFieldOptions ro;
        ro.seed = 42;
        const SpectralField f = random_divfree(Grid(2, 32), ro);
        const SpectralField back = to_spectral(to_physical(f));
        CHECK(rel_l2_diff(back, f) <= 1e-12);
    }

    SUBCASE("to_physical rejects non-Hermitian data flagged real") {
        SpectralField f(g, true);
        f.component(0)[flat(g, 1, 0)] = cplx(1.0, 0.5); // no mirror entry
        CHECK_THROWS_AS((void)to_physical(f), std::invalid_argument);
    }
}

TEST_CASE("Leray projection") {
    Grid g(2, 16);

    SUBCASE("gradient fields are annihilated") {
        // grad phi for phi = sin(x1 + 2 x2): u = (cos, 2 cos)(x1 + 2 x2)
        SpectralField f(g, true);
        const std::size_t ip = flat(g, 1, 2), im = flat(g, -1, -2);
        f.component(0)[ip] = cplx(0.5, 0.0);
        f.component(0)[im] = cplx(0.5, 0.0);
        f.component(1)[ip] = cplx(1.0, 0.0);
        f.component(1)[im] = cplx(1.0, 0.0);
        const SpectralField pf = leray_project(f);
        CHECK(pf.max_abs_coeff() < 1e-14);
    }

    SUBCASE("divergence-free fields pass through, projection idempotent") {
        RandomFieldOptions ro;
        ro.seed = 3;
        const SpectralField f = random_divfree(g, ro);
        const SpectralField pf = leray_project(f);
        CHECK(rel_l2_diff(pf, f) <= 1e-14);
        const SpectralField ppf = leray_project(pf);
        CHECK(rel_l2_diff(ppf, pf) <= 1e-13);
    }

    SUBCASE("matches the explicit per-mode matrix oracle") {
        SpectralField f(g, true);
        // (sin x2, sin x1)
        f.component(0)[flat(g, 0, 1)] = cplx(0.0, -0.5);
        f.component(0)[flat(g, 0, -1)] = cplx(0.0, 0.5);
        f.component(1)[flat(g, 1, 0)] = cplx(0.0, -0.5);
        f.component(1)[flat(g, -1, 0)] = cplx(0.0, 0.5);
        const SpectralField pf = leray_project(f);
        const SpectralField ref = oracle::dense_leray(f);
        CHECK(rel_l2_diff(pf, ref) <= 1e-14);
    }

    SUBCASE("divergence annihilation on random data") {
        std::mt19937_64 rng(11);
        std::normal_distribution<double> gauss;
        SpectralField f(g, true);
        for (int a = 0; a < 2; ++a)
            for (auto& v : f.component(a)) v = cplx(gauss(rng), gauss(rng));
        f.symmetrize();
        const SpectralField pf = leray_project(f);
        CHECK(pf.divergence_max() <= 1e-12 * pf.l2_norm());
        // k = 0 mode untouched
        CHECK(pf.component(0)[0] == f.component(0)[0]);
    }
}

TEST_CASE("heat propagation") {
    Grid g(2, 16);
    RandomFieldOptions ro;
    ro.seed = 9;
    const SpectralField f = random_divfree(g, ro);

    SUBCASE("t = 0 is the identity") {
        CHECK(rel_l2_diff(heat_propagate(f, 0.0), f) == 0.0);
    }

    SUBCASE("single mode of frequency 1 halves at t = ln 2") {
        SpectralField m(g, true);
        m.component(0)[flat(g, 0, 1)] = cplx(0.5, 0.0);
        m.component(0)[flat(g, 0, -1)] = cplx(0.5, 0.0);
        const SpectralField h = heat_propagate(m, std::log(2.0));
        CHECK(std::abs(h.component(0)[flat(g, 0, 1)].real() - 0.25) < 1e-15);
    }

    SUBCASE("semigroup property to 1e-13") {
        const SpectralField a = heat_propagate(heat_propagate(f, 0.3), 0.45);
        const SpectralField b = heat_propagate(f, 0.75);
        CHECK(rel_l2_diff(a, b) <= 1e-13);
    }

    SUBCASE("l2 decay matches the per-mode oracle to 1e-13") {
        const double direct = heat_propagate(f, 0.17).l2_norm();
        const double ref = oracle::heat_l2_decay_sum(f, 0.17);
        CHECK(std::abs(direct - ref) <= 1e-13 * ref);
    }

    SUBCASE("every Fourier amplitude decays monotonically") {
        const SpectralField h1 = heat_propagate(f, 0.1);
        const SpectralField h2 = heat_propagate(f, 0.3);
        for (int a = 0; a < 2; ++a)
            for (std::size_t i = 0; i < g.size(); ++i)
                CHECK(std::abs(h2.component(a)[i]) <= std::abs(h1.component(a)[i]) + 1e-16);
    }

    SUBCASE("negative time is a domain error") {
        CHECK_THROWS_AS((void)heat_propagate(f, -1e-9), std::domain_error);
    }
}

TEST_CASE("dealiased nonlinear term") {
    Grid g(2, 16);

    SUBCASE("zero inputs give zero") {
        SpectralField z(g, true);
        RandomFieldOptions ro;
        ro.seed = 5;
        const SpectralField f = random_divfree(g, ro);
        CHECK(nonlinear_div(z, f).max_abs_coeff() == 0.0);
        CHECK(nonlinear_div(f, z).max_abs_coeff() == 0.0);
    }

    SUBCASE("Taylor-Green nonlinearity is absorbed by the pressure") {
        Grid g64(2, 64);
        const SpectralField tg = taylor_green(g64);
        const SpectralField n = nonlinear_div(tg, tg);
        CHECK(n.l2_norm() <= 1e-12);
    }

    SUBCASE("agrees with the dense convolution oracle on low modes") {
        RandomFieldOptions ro;
        ro.seed = 17;
        ro.band_lo = 1.0;
        ro.band_hi = 2.5; // dealias-safe band
        const SpectralField u = random_divfree(g, ro);
        ro.seed = 18;
        const SpectralField v = random_divfree(g, ro);
        const SpectralField fast = nonlinear_div(u, v);
        const SpectralField slow = oracle::dense_nonlinear_div(u, v);
        CHECK(rel_l2_diff(fast, slow) <= 1e-12);
    }

    SUBCASE("bilinearity in the first argument") {
        RandomFieldOptions ro;
        ro.seed = 19;
        const SpectralField u = random_divfree(g, ro);
        ro.seed = 20;
        const SpectralField v = random_divfree(g, ro);
        SpectralField au = u;
        au *= 2.75;
        const SpectralField left = nonlinear_div(au, v);
        SpectralField right = nonlinear_div(u, v);
        right *= 2.75;
        CHECK(rel_l2_diff(left, right) <= 1e-13);
    }

    SUBCASE("grid mismatch is rejected") {
        RandomFieldOptions ro;
        const SpectralField u = random_divfree(Grid(2, 16), ro);
        const SpectralField v = random_divfree(Grid(2, 32), ro);
        CHECK_THROWS_AS((void)nonlinear_div(u, v), std::invalid_argument);
    }
}

TEST_CASE("lattice norms") {
    SUBCASE("zero field") {
        Grid g(2, 16);
        SpectralField z(g, true);
        for (double p : {1.0, 2.0, 6.0}) CHECK(lp_norm(z, p) == 0.0);
        CHECK(sup_norm(z) == 0.0);
    }

    SUBCASE("constant on the unit-scale 2D box: L2 norm = |c| 2 pi") {
        Grid g(2, 16);
        SpectralField f(g, true);
        f.component(0)[0] = cplx(-1.5, 0.0);
        CHECK(lp_norm(f, 2.0) == doctest::Approx(1.5 * 2.0 * M_PI).epsilon(1e-13));
        CHECK(f.l2_norm() == doctest::Approx(1.5 * 2.0 * M_PI).epsilon(1e-13));
    }

    SUBCASE("sup of sin(x1) on the refined N = 64 grid") {
        Grid g(2, 64);
        SpectralField f(g, true);
        f.component(0)[flat(g, 1, 0)] = cplx(0.0, -0.5);
        f.component(0)[flat(g, -1, 0)] = cplx(0.0, 0.5);
        const double sup = sup_norm(f, true);
        CHECK(sup >= 0.999);
        CHECK(sup <= 1.0 + 1e-12);
    }

    SUBCASE("p < 1 is rejected") {
        Grid g(2, 16);
        SpectralField z(g, true);
        CHECK_THROWS_AS((void)lp_norm(z, 0.5), std::domain_error);
    }
}

TEST_CASE("translation acts by phase, fields stay real") {
    Grid g(2, 32);
    RandomFieldOptions ro;
    ro.seed = 77;
    const SpectralField f = random_divfree(g, ro);
    const SpectralField shifted = translate(f, {5, -3, 0});
    CHECK(shifted.hermitian_defect() <= 1e-12 * shifted.max_abs_coeff());
    CHECK(lp_norm(shifted, 2.0) == doctest::Approx(lp_norm(f, 2.0)).epsilon(1e-13));
    // shifting back recovers the field
    const SpectralField back = translate(shifted, {-5, 3, 0});
    CHECK(rel_l2_diff(back, f) <= 1e-13);
}

TEST_CASE("field serialization round trip") {
    Grid g(3, 8);
    RandomFieldOptions ro;
    ro.seed = 123;
    ro.band_hi = 3.0;
    const SpectralField f = random_divfree(g, ro);
    const std::string path = "test_field.mnsf";
    save_field(f, path);
    const SpectralField back = load_field(path);
    CHECK(back.grid() == f.grid());
    CHECK(back.real_valued() == f.real_valued());
    CHECK(rel_l2_diff(back, f) == 0.0);
    std::remove(path.c_str());

    // complex (one-sided spectrum) fields keep their flag through the file
    const SpectralField hs = half_space_data(Grid(2, 32), 2, 0.01);
    save_field(hs, "test_hs.mnsf");
    const SpectralField hs_back = load_field("test_hs.mnsf");
    CHECK_FALSE(hs_back.real_valued());
    CHECK(rel_l2_diff(hs_back, hs) == 0.0);
    std::remove("test_hs.mnsf");
}

TEST_CASE("box rescale is the exact scaling map") {
    Grid g(2, 32);
    RandomFieldOptions ro;
    ro.seed = 31;
    const SpectralField f = random_divfree(g, ro);
    const SpectralField f2 = rescale_box(f, 2.0);
    // |u_lambda|_p = lambda^{1 - d/p} |u|_p exactly on the lattice
    for (double p : {2.0, 6.0}) {
        const double expected = std::pow(2.0, 1.0 - 2.0 / p) * lp_norm(f, p);
        CHECK(lp_norm(f2, p) == doctest::Approx(expected).epsilon(1e-12));
    }
    CHECK(sup_norm(f2) == doctest::Approx(2.0 * sup_norm(f)).epsilon(1e-12));
}
