#include "doctest.h"

#include <cmath>
#include <random>

#include "nbm/moments.hpp"
#include "support/oracle.hpp"

using namespace nbm;

namespace {
constexpr double kSqrt2Pi = 2.5066282746310002;
}

TEST_CASE("full-range moments match the closed forms") {
    CHECK(mu_full_range(0, 0.0) == doctest::Approx(kSqrt2Pi).epsilon(1e-14));
    CHECK(mu_full_range(1, 0.0) == 0.0);
    // integration by parts: int x^2 e^{-x^2/2} = int e^{-x^2/2}
    CHECK(mu_full_range(2, 0.0) == doctest::Approx(kSqrt2Pi).epsilon(1e-14));
    CHECK(mu_full_range(0, 1.0) == doctest::Approx(kSqrt2Pi * std::exp(0.5)).epsilon(1e-14));

    // against the quadrature oracle for a spread of orders and tilts
    for (int k : {3, 5, 8, 12}) {
        for (double c : {-1.3, 0.4, 2.0}) {
            double want = oracle::tilted_moment(k, c, 1.0, IntervalUnion::whole_line());
            CHECK(mu_full_range(k, c) == doctest::Approx(want).epsilon(1e-11));
        }
    }
}

TEST_CASE("full-range moments survive tilt overflow in log form") {
    auto v = mu_full_range_log(4, 40.0); // e^{800} territory
    CHECK(v.sign == 1);
    CHECK(std::isfinite(v.logmag));
    // log mu_4(c) ~ c^2/2 + 4 log c for large c
    CHECK(v.logmag == doctest::Approx(0.5 * 1600.0 + 4.0 * std::log(40.0) +
                                      std::log(kSqrt2Pi)).epsilon(1e-3));
}

TEST_CASE("half line and symmetric segment match the error-function values") {
    MomentParams half{0.0, 1.0, IntervalUnion({{0.0, kInf}})};
    CHECK(mu(0, half) == doctest::Approx(0.5 * kSqrt2Pi).epsilon(1e-13));

    MomentParams seg{0.0, 1.0, IntervalUnion::segment(-1.0, 1.0)};
    double phi1 = 0.5 * (1.0 + std::erf(1.0 / std::sqrt(2.0)));
    CHECK(mu(0, seg) == doctest::Approx(kSqrt2Pi * (2.0 * phi1 - 1.0)).epsilon(1e-13));
    CHECK(mu(0, seg) == doctest::Approx(1.7112487).epsilon(1e-7));
}

TEST_CASE("spec example: k=3 moment on a two-component set") {
    IntervalUnion E({{-2.0, 1.0}, {1.5, 3.0}});
    MomentParams p{0.7, 1.1, E};
    double want = oracle::tilted_moment(3, 0.7, 1.1, E);
    CHECK(mu(3, p) == doctest::Approx(want).epsilon(1e-12));
}

TEST_CASE("recurrence agrees with quadrature across the stability window") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> Uc(-6.0, 6.0), Ug(0.5, 1.5), Ux(-4.0, 4.0);
    for (int trial = 0; trial < 30; ++trial) {
        double c = Uc(rng), g = Ug(rng);
        double lo = Ux(rng), hi = lo + 0.5 + std::abs(Ux(rng));
        IntervalUnion E = trial % 3 == 0
                              ? IntervalUnion({{lo, hi}, {hi + 1.0, hi + 2.5}})
                              : IntervalUnion::segment(lo, hi);
        MomentParams p{c, g, E};
        auto seq = moments_scaled(24, p);
        double scale = std::exp(seq.log_scale);
        for (int k = 0; k <= 24; ++k) {
            double want = oracle::tilted_moment(k, c, g, E);
            double got = seq.nu[k] * scale;
            CHECK(got == doctest::Approx(want).epsilon(1e-11));
        }
    }
}

TEST_CASE("moments are additive over disjoint components") {
    IntervalUnion e1 = IntervalUnion::segment(-1.0, 0.5);
    IntervalUnion e2 = IntervalUnion::segment(1.0, 2.0);
    IntervalUnion both({{-1.0, 0.5}, {1.0, 2.0}});
    for (int k : {0, 1, 4, 9}) {
        double a = mu(k, {0.3, 0.9, e1});
        double b = mu(k, {0.3, 0.9, e2});
        double c = mu(k, {0.3, 0.9, both});
        CHECK(c == doctest::Approx(a + b).epsilon(1e-13));
    }
}

TEST_CASE("segment moments converge to the full range as the window grows") {
    double c = 1.7;
    double L = std::abs(c) + 12.0;
    for (int k : {0, 3, 10}) {
        double seg = mu(k, {c, 1.0, IntervalUnion::segment(-L, L)});
        double full = mu_full_range(k, c);
        CHECK(std::abs(seg - full) <= 1e-12 * std::abs(full));
    }
}

TEST_CASE("odd moments vanish by parity on symmetric sets") {
    IntervalUnion syms({{-3.0, -1.0}, {1.0, 3.0}});
    double scale = mu(0, {0.0, 1.0, syms});
    for (int k : {1, 3, 5, 7, 11}) {
        CHECK(std::abs(mu(k, {0.0, 1.0, syms})) <= 1e-13 * scale);
    }
}

TEST_CASE("divergent parameter combinations are rejected") {
    CHECK_THROWS_AS(mu(0, {0.0, -0.5, IntervalUnion::whole_line()}), std::domain_error);
    CHECK_THROWS_AS(mu(0, {0.0, 0.0, IntervalUnion({{0.0, kInf}})}), std::domain_error);
    // but a negative gamma on a bounded set converges
    double got = mu(2, {0.1, -0.8, IntervalUnion::segment(-1.0, 2.0)});
    double want = oracle::tilted_moment(2, 0.1, -0.8, IntervalUnion::segment(-1.0, 2.0));
    CHECK(got == doctest::Approx(want).epsilon(1e-11));
}

TEST_CASE("high orders switch to compensated accumulation and stay accurate") {
    IntervalUnion E = IntervalUnion::segment(-2.0, 2.5);
    MomentParams p{1.1, 1.0, E};
    auto seq = moments_scaled(80, p);
    double want = oracle::tilted_moment(80, 1.1, 1.0, E);
    CHECK(seq.nu[80] * std::exp(seq.log_scale) == doctest::Approx(want).epsilon(1e-10));
}
