#include "doctest.h"

#include "mns/besov.hpp"
#include "mns/profiles.hpp"

#include <random>
#include "mns/spectral_ops.hpp"

#include <cmath>

using namespace mns;

namespace {

// reference grid: box scale 8 so the representable scale band [32/N, 2]
// holds unit scales comfortably
Grid ref_grid(int n = 128) { return Grid(2, n, 8.0); }

ProfileEntry gaussian_profile(double amp, double width, std::array<double, 3> core,
                              ScaleSchedule::Kind kind = ScaleSchedule::Kind::Constant,
                              double base = 1.0, double rate = 1.0) {
    ProfileEntry e;
    e.shape.amplitude = amp;
    e.shape.width = width;
    e.scale.kind = kind;
    e.scale.base = base;
    e.scale.rate = rate;
    e.core.base = core;
    return e;
}

} // namespace

TEST_CASE("synthesis") {
    const Grid g = ref_grid();
    const double p = 3.0;

    SUBCASE("single profile at unit scale and origin is the profile itself") {
        ProfileDecomposition decomp(g, 2.0 / p);
        decomp.add_profile(gaussian_profile(1.0, 0.6, {0.0, 0.0, 0.0}));
        const SpectralField f = decomp.synthesize(0, 1);
        SpectralField d = f;
        d -= decomp.unit_profile(0);
        CHECK(d.max_abs_coeff() <= 1e-14);
    }

    SUBCASE("disjoint far cores: L^p mass adds to 1e-6") {
        ProfileDecomposition decomp(g, 2.0 / p);
        const double h = g.spacing();
        decomp.add_profile(gaussian_profile(1.0, 0.6, {16 * h, 16 * h, 0.0}));
        decomp.add_profile(gaussian_profile(0.7, 0.7, {76 * h, 76 * h, 0.0}));
        const SpectralField f = decomp.synthesize(0, 2);
        const double sum = std::pow(lp_norm(decomp.unit_profile(0), p), p) +
                           std::pow(lp_norm(decomp.unit_profile(1), p), p);
        CHECK(std::pow(lp_norm(f, p), p) == doctest::Approx(sum).epsilon(1e-6));
    }

    SUBCASE("unrepresentable scales are rejected") {
        ProfileDecomposition decomp(g, 2.0 / p);
        decomp.add_profile(gaussian_profile(1.0, 0.5, {6.0, 6.0, 0.0},
                                            ScaleSchedule::Kind::Shrinking, 1.0, 1.0));
        CHECK_THROWS_AS((void)decomp.synthesize(9, 1), std::invalid_argument);
        ProfileDecomposition big(g, 2.0 / p);
        big.add_profile(gaussian_profile(1.0, 0.5, {6.0, 6.0, 0.0},
                                         ScaleSchedule::Kind::Growing, 1.0, 1.0));
        CHECK_THROWS_AS((void)big.synthesize(5, 1), std::invalid_argument);
    }
}

TEST_CASE("orthogonality quantities") {
    const Grid g = ref_grid();
    ProfileDecomposition decomp(g, 1.0);
    decomp.add_profile(gaussian_profile(1.0, 0.5, {5.0, 5.0, 0.0}));                       // constant
    decomp.add_profile(gaussian_profile(1.0, 0.5, {5.0, 5.0, 0.0},
                                        ScaleSchedule::Kind::Shrinking, 1.0, 1.0));        // 2^{-n}
    decomp.add_profile(gaussian_profile(1.0, 0.5, {5.0, 5.0, 0.0},
                                        ScaleSchedule::Kind::Growing, 1.0, 1.0));          // 2^{n}

    SUBCASE("diagonal is zero, identical pairs score the minimum 2") {
        ProfileDecomposition twin(g, 1.0);
        twin.add_profile(gaussian_profile(1.0, 0.5, {5.0, 5.0, 0.0}));
        twin.add_profile(gaussian_profile(0.4, 0.7, {5.0, 5.0, 0.0}));
        const auto m = twin.orthogonality_matrix(3, 2);
        CHECK(m[0][0] == 0.0);
        CHECK(m[0][1] == doctest::Approx(2.0));
        CHECK(m[1][0] == doctest::Approx(2.0));
    }

    SUBCASE("mixed scales (1, 2^-n, 2^n) diverge as designed") {
        double prev01 = 0.0, prev02 = 0.0, prev12 = 0.0;
        for (int n = 1; n <= 6; ++n) {
            const double q01 = decomp.orthogonality_quantity(0, 1, n);
            const double q02 = decomp.orthogonality_quantity(0, 2, n);
            const double q12 = decomp.orthogonality_quantity(1, 2, n);
            CHECK(q01 > prev01);
            CHECK(q02 > prev02);
            CHECK(q12 > prev12);
            prev01 = q01;
            prev02 = q02;
            prev12 = q12;
        }
        // lambda-ratio structure: q(1, 2^-n) main term 2^n
        CHECK(decomp.orthogonality_quantity(0, 1, 5) >= std::ldexp(1.0, 5));
    }

    SUBCASE("classification into J0 / J1 / Jinf") {
        CHECK(decomp.is_constant(0));
        CHECK(decomp.is_vanishing(1));
        CHECK(decomp.is_growing(2));
    }
}

TEST_CASE("norm splitting") {
    const Grid g = ref_grid();
    const double p = 3.0;

    SUBCASE("single profile without remainder: equality to 1e-10") {
        ProfileDecomposition decomp(g, 2.0 / p);
        decomp.add_profile(gaussian_profile(1.0, 0.6, {0.0, 0.0, 0.0}));
        const SplittingCheck sc = norm_splitting_check(decomp, 0, 1, p);
        CHECK(std::abs(sc.gap) <= 1e-10 * std::max(1.0, sc.rhs));
    }

    SUBCASE("well-separated pair: gap small at large n") {
        ProfileDecomposition decomp(g, 2.0 / p);
        // cores drift apart with n
        const double h = g.spacing();
        ProfileEntry a = gaussian_profile(1.0, 0.6, {24 * h, 24 * h, 0.0});
        ProfileEntry b = gaussian_profile(0.8, 0.6, {32 * h, 32 * h, 0.0});
        b.core.drift = {8 * h, 8 * h, 0.0};
        decomp.add_profile(a);
        decomp.add_profile(b);
        const SplittingCheck early = norm_splitting_check(decomp, 0, 2, p);
        const SplittingCheck late = norm_splitting_check(decomp, 6, 2, p);
        CHECK(std::abs(late.gap) <= 1e-4 * std::max(1.0, late.rhs));
        CHECK(std::abs(late.gap) <= std::abs(early.gap));
    }

    SUBCASE("Sobolev frame includes the remainder in the splitting") {
        ProfileDecomposition decomp(g, 1.0);
        decomp.add_profile(gaussian_profile(1.0, 0.6, {8.0, 8.0, 0.0}));
        RemainderSpec rem;
        rem.amplitude = 0.05;
        rem.band_lo = 40.0;
        rem.band_hi = 60.0;
        decomp.set_remainder(rem);
        const SplittingCheck sc = norm_splitting_check(decomp, 0, 1, 2.0);
        // high-frequency remainder is nearly orthogonal to the profile
        CHECK(std::abs(sc.gap) <= 1e-3 * sc.rhs);
    }

    SUBCASE("alpha inconsistent with the frame is rejected") {
        ProfileDecomposition decomp(g, 0.33);
        decomp.add_profile(gaussian_profile(1.0, 0.6, {8.0, 8.0, 0.0}));
        CHECK_THROWS_AS((void)norm_splitting_check(decomp, 0, 1, p), std::invalid_argument);
    }
}

TEST_CASE("smallness checks") {
    const double p = 3.0;

    SUBCASE("eta -> infinity keeps g and kills the complement") {
        const Grid g = ref_grid();
        ProfileDecomposition decomp(g, 2.0 / p);
        decomp.add_profile(gaussian_profile(1.0, 0.5, {8.0, 8.0, 0.0},
                                            ScaleSchedule::Kind::Shrinking, 1.0, 1.0));
        const SpectralField full = decomp.profile_term(0, 1);
        const SpectralField trunc = decomp.profile_term_truncated(0, 1, 1e12, false);
        const SpectralField comp = decomp.profile_term_truncated(0, 1, 1e12, true);
        SpectralField d = full;
        d -= trunc;
        CHECK(sup_norm(d, false) <= 1e-9 * sup_norm(full, false));
        CHECK(sup_norm(comp, false) <= 1e-9 * sup_norm(full, false));
    }

    SUBCASE("vanishing-scale slope matches d(1/p1 - 1/p) within 5 percent") {
        const Grid g(2, 512, 8.0);
        ProfileDecomposition decomp(g, 2.0 / p);
        decomp.add_profile(gaussian_profile(1.0, 0.6, {12.0, 12.0, 0.0},
                                            ScaleSchedule::Kind::Shrinking, 1.0, 1.0));
        const double p1 = 2.0;
        std::vector<double> logs;
        for (int n = 0; n <= 3; ++n) {
            const SmallnessReport rep = smallness_checks(decomp, n, 100.0, p1, 6.0);
            logs.push_back(std::log2(rep.vanishing_lp1));
        }
        // least-squares slope over n
        double slope = 0.0;
        const double mean_n = 1.5, mean_v = (logs[0] + logs[1] + logs[2] + logs[3]) / 4.0;
        double num = 0.0, den = 0.0;
        for (int n = 0; n <= 3; ++n) {
            num += (n - mean_n) * (logs[static_cast<std::size_t>(n)] - mean_v);
            den += (n - mean_n) * (n - mean_n);
        }
        slope = num / den;
        const double expected = -2.0 * (1.0 / p1 - 1.0 / p); // d(1/p1 - 1/p) per octave
        CHECK(std::abs(slope - expected) <= 0.05 * std::abs(expected));
    }

    SUBCASE("monotone decay along the schedule, empty classes give zero") {
        const Grid g = ref_grid();
        ProfileDecomposition decomp(g, 2.0 / p);
        decomp.add_profile(gaussian_profile(1.0, 0.5, {8.0, 8.0, 0.0},
                                            ScaleSchedule::Kind::Shrinking, 1.0, 1.0));
        double prev = std::numeric_limits<double>::infinity();
        for (int n = 0; n <= 2; ++n) {
            const SmallnessReport rep = smallness_checks(decomp, n, 50.0, 2.0, 6.0);
            CHECK(rep.vanishing_lp1 <= prev);
            CHECK(rep.growing_lp2 == 0.0); // no Jinf profiles
            prev = rep.vanishing_lp1;
        }
    }

    SUBCASE("exponent preconditions") {
        const Grid g = ref_grid();
        ProfileDecomposition decomp(g, 2.0 / p);
        decomp.add_profile(gaussian_profile(1.0, 0.5, {8.0, 8.0, 0.0}));
        CHECK_THROWS_AS((void)smallness_checks(decomp, 0, 10.0, 4.0, 6.0),
                        std::invalid_argument); // p1 >= p
        CHECK_THROWS_AS((void)smallness_checks(decomp, 0, 10.0, 2.0, 2.5),
                        std::invalid_argument); // p2 <= p
        CHECK_THROWS_AS((void)smallness_checks(decomp, 0, 0.5, 2.0, 6.0),
                        std::invalid_argument); // eta < 1
    }
}

TEST_CASE("elementary inequality") {
    SUBCASE("single value has lhs = 0") {
        const ElementaryIneqCheck c = elementary_inequality_check({2.7}, 2.5);
        CHECK(c.lhs == 0.0);
        CHECK(c.rhs == 0.0);
    }

    SUBCASE("hand case a = (1, -1), m = 2") {
        const ElementaryIneqCheck c = elementary_inequality_check({1.0, -1.0}, 2.0);
        CHECK(c.lhs == 2.0);
        CHECK(c.rhs == 2.0);
    }

    SUBCASE("fitted constant is stable over a growing corpus") {
        std::mt19937_64 rng(7);
        std::uniform_real_distribution<double> uni(-2.0, 2.0);
        auto fit_c = [&](int trials) {
            double worst = 0.0;
            for (int t = 0; t < trials; ++t) {
                std::vector<double> a(2 + static_cast<std::size_t>(t % 4));
                for (auto& v : a) v = uni(rng);
                for (double m : {2.0, 5.0 / 3.0 * 3.0}) {
                    const ElementaryIneqCheck c = elementary_inequality_check(a, m);
                    if (c.rhs > 1e-12) worst = std::max(worst, c.lhs / c.rhs);
                }
            }
            return worst;
        };
        const double c100 = fit_c(100);
        const double c400 = fit_c(400);
        CHECK(std::isfinite(c400));
        CHECK(c400 <= 4.0 * std::max(c100, 1.0)); // stable under corpus growth
    }

    SUBCASE("m <= 1 is rejected") {
        CHECK_THROWS_AS((void)elementary_inequality_check({1.0, 2.0}, 1.0),
                        std::domain_error);
    }
}

TEST_CASE("greedy extraction") {
    const Grid g = ref_grid();
    const double p = 3.0;

    SUBCASE("single known profile is recovered within factor 2 / one scale unit") {
        ProfileDecomposition decomp(g, 2.0 / p);
        decomp.add_profile(gaussian_profile(1.0, 0.6, {10.0, 14.0, 0.0},
                                            ScaleSchedule::Kind::Constant, 0.5));
        std::vector<SpectralField> seq;
        for (int n = 0; n < 4; ++n) seq.push_back(decomp.synthesize(n, 1));
        const ExtractionResult ex = greedy_extract(seq, 1, {.p = p, .bump_width = 0.6});
        REQUIRE(ex.profiles.size() == 1);
        const double lam = ex.profiles[0].lambda.back();
        CHECK(lam >= 0.25);
        CHECK(lam <= 1.0);
        const double dx = std::hypot(ex.profiles[0].core.back()[0] - 10.0,
                                     ex.profiles[0].core.back()[1] - 14.0);
        CHECK(dx <= 0.5);
    }

    SUBCASE("pure remainder yields no profiles") {
        ProfileDecomposition decomp(g, 2.0 / p);
        RemainderSpec rem;
        rem.amplitude = 0.01;
        rem.decay_rate = 1.0;
        rem.band_lo = 50.0;
        rem.band_hi = 60.0;
        decomp.set_remainder(rem);
        std::vector<SpectralField> seq;
        for (int n = 2; n < 6; ++n) seq.push_back(decomp.synthesize(n, 0));
        ExtractionOptions opts;
        opts.p = p;
        opts.residual_threshold = 0.05;
        const ExtractionResult ex = greedy_extract(seq, 2, opts);
        CHECK(ex.stopped_early);
        CHECK(ex.profiles.empty());
        CHECK(!ex.notice.empty());
    }

    SUBCASE("three well-separated profiles recovered in any order") {
        ProfileDecomposition decomp(g, 2.0 / p);
        decomp.add_profile(gaussian_profile(1.0, 0.6, {8.0, 8.0, 0.0},
                                            ScaleSchedule::Kind::Constant, 1.0));
        decomp.add_profile(gaussian_profile(0.8, 0.6, {26.0, 26.0, 0.0},
                                            ScaleSchedule::Kind::Constant, 0.5));
        decomp.add_profile(gaussian_profile(1.3, 0.6, {40.0, 12.0, 0.0},
                                            ScaleSchedule::Kind::Constant, 2.0));
        std::vector<SpectralField> seq;
        for (int n = 0; n < 4; ++n) seq.push_back(decomp.synthesize(n, 3));
        const ExtractionResult ex = greedy_extract(seq, 3, {.p = p, .bump_width = 0.6});
        REQUIRE(ex.profiles.size() == 3);
        int matched = 0;
        for (int j = 0; j < 3; ++j) {
            const auto truth = decomp.core_at(j, 0);
            const double lam_truth = decomp.scale_at(j, 0);
            for (const auto& prof : ex.profiles) {
                const double dx = std::hypot(prof.core.back()[0] - truth[0],
                                             prof.core.back()[1] - truth[1]);
                const double ratio = prof.lambda.back() / lam_truth;
                if (dx <= lam_truth && ratio >= 0.5 && ratio <= 2.0) {
                    ++matched;
                    break;
                }
            }
        }
        CHECK(matched == 3);
        // residual norm decreases across rounds
        REQUIRE(ex.residual_norms.size() == 4);
        CHECK(ex.residual_norms.back() < ex.residual_norms.front());
    }
}
