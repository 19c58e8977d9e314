#include "doctest.h"

#include <cmath>

#include "nbm/identities.hpp"

using namespace nbm;

namespace {

IdentityConfig config22(const IntervalUnion& E) {
    IdentityConfig cfg;
    cfg.sizes = {{1, 1}, {1, 1}};
    cfg.a = {-1.0, 1.0};
    cfg.b = {-0.5, 0.5};
    cfg.alpha = {0.0, 0.0};
    cfg.beta = {0.0, 0.0};
    cfg.E = E;
    return cfg;
}

} // namespace

TEST_CASE("bilinear identities at the reference configuration") {
    auto cfg = config22(IntervalUnion::segment(-2.0, 2.0));

    auto tt0 = check_hirota(cfg, HirotaFamily::TT, 1, 2, 0);
    CHECK(tt0.status == ResidualReport::Status::Pass);
    CHECK(tt0.rel_residual < 1e-6);

    auto tt1 = check_hirota(cfg, HirotaFamily::TT, 1, 2, 1);
    CHECK(tt1.status == ResidualReport::Status::Pass);
    CHECK(tt1.rel_residual < 1e-5);

    auto ss0 = check_hirota(cfg, HirotaFamily::SS, 2, 1, 0);
    CHECK(ss0.rel_residual < 1e-6);
    auto ss1 = check_hirota(cfg, HirotaFamily::SS, 2, 1, 1);
    CHECK(ss1.rel_residual < 1e-5);

    auto st0 = check_hirota(cfg, HirotaFamily::ST, 1, 2, 0);
    CHECK(st0.rel_residual < 1e-6);
    auto st1 = check_hirota(cfg, HirotaFamily::ST, 2, 1, 1);
    CHECK(st1.rel_residual < 1e-5);
    auto ts1 = check_hirota(cfg, HirotaFamily::TS, 1, 1, 1);
    CHECK(ts1.rel_residual < 1e-5);

    CHECK_THROWS_AS(check_hirota(cfg, HirotaFamily::TT, 1, 1, 0), std::invalid_argument);
}

TEST_CASE("bilinear identities hold with mixed multiplicities") {
    IdentityConfig cfg;
    cfg.sizes = {{2, 1}, {1, 2}};
    cfg.a = {-0.8, 0.8};
    cfg.b = {-0.6, 0.6};
    cfg.alpha = {0.0, 0.0};
    cfg.beta = {0.0, 0.0};
    cfg.E = IntervalUnion({{-2.5, 0.5}, {1.0, 3.0}});

    for (int j : {0, 1}) {
        CHECK(check_hirota(cfg, HirotaFamily::TT, 2, 1, j).passed());
        CHECK(check_hirota(cfg, HirotaFamily::SS, 1, 2, j).passed());
        CHECK(check_hirota(cfg, HirotaFamily::ST, 1, 1, j).passed());
        CHECK(check_hirota(cfg, HirotaFamily::TS, 2, 2, j).passed());
    }
}

TEST_CASE("ratio identities at the reference configuration") {
    auto cfg = config22(IntervalUnion::segment(-2.0, 2.0));
    for (int which : {1, 2, 3, 4}) {
        auto r = check_corollary_ratio(cfg, which, 1, 2);
        INFO(r.id, " rel=", r.rel_residual);
        CHECK(r.status == ResidualReport::Status::Pass);
        CHECK(r.rel_residual < 1e-5);
    }
}

TEST_CASE("degenerate coinciding families report indeterminate, not failure") {
    IdentityConfig cfg;
    cfg.sizes = {{1, 1}, {1, 1}};
    cfg.a = {0.0, 0.0};
    cfg.b = {0.0, 0.0};
    cfg.alpha = {0.0, 0.0};
    cfg.beta = {0.0, 0.0};
    cfg.E = IntervalUnion::segment(-2.0, 2.0);
    auto r = check_corollary_ratio(cfg, 1, 1, 2);
    CHECK(r.status == ResidualReport::Status::Indeterminate);
}

TEST_CASE("virasoro constraints at k = -1 and 0") {
    auto cfg = config22(IntervalUnion({{-1.0, 0.5}, {1.0, 2.0}}));
    auto vm1 = check_virasoro(cfg, -1);
    INFO("k=-1 rel=", vm1.rel_residual);
    CHECK(vm1.status == ResidualReport::Status::Pass);
    CHECK(vm1.rel_residual < 1e-6);

    auto v0 = check_virasoro(cfg, 0);
    CHECK(v0.status == ResidualReport::Status::Pass);
    CHECK(v0.rel_residual < 1e-6);

    // quadratic tilts switched on
    cfg.alpha = {0.05, -0.05};
    cfg.beta = {0.02, -0.02};
    auto vt = check_virasoro(cfg, -1);
    CHECK(vt.rel_residual < 1e-5);
    auto vt0 = check_virasoro(cfg, 0);
    CHECK(vt0.rel_residual < 1e-5);

    cfg.E = IntervalUnion({{0.0, kInf}});
    CHECK_THROWS_AS(check_virasoro(cfg, -1), std::invalid_argument);
}

TEST_CASE("second-derivative relations on the locus") {
    auto cfg = config22(IntervalUnion::segment(-2.0, 2.0));

    auto r1 = check_second_derivative_lemma(cfg, 1, 1, 2);
    INFO("s1s1 rel=", r1.rel_residual);
    CHECK(r1.status == ResidualReport::Status::Pass);
    CHECK(r1.rel_residual < 1e-5);

    auto r3 = check_second_derivative_lemma(cfg, 3, 1, 2);
    CHECK(r3.status == ResidualReport::Status::Pass);
    CHECK(r3.rel_residual < 1e-5);

    auto r4 = check_second_derivative_lemma(cfg, 4, 1, 2);
    CHECK(r4.status == ResidualReport::Status::Pass);
    CHECK(r4.rel_residual < 5e-5);

    // nonzero tilts exercise the alpha/beta coefficient terms
    cfg.alpha = {0.05, -0.05};
    cfg.beta = {-0.03, 0.03};
    for (int rel : {1, 2, 3, 4, 5, 6, 7}) {
        auto r = check_second_derivative_lemma(cfg, rel, 1, 2);
        INFO("relation ", rel, " rel=", r.rel_residual);
        CHECK(r.passed());
        CHECK(r.rel_residual < 5e-5);
    }
}

TEST_CASE("six-equation system at the reference configuration") {
    auto cfg = config22(IntervalUnion::segment(-2.0, 2.0));
    auto reports = check_pq22_system(cfg);
    REQUIRE(reports.size() == 6);
    for (const auto& r : reports) {
        INFO(r.id, " rel=", r.rel_residual);
        CHECK(r.status == ResidualReport::Status::Pass);
        CHECK(r.rel_residual < 1e-3);
    }
}

TEST_CASE("triple representation equality") {
    IdentityConfig cfg;
    cfg.sizes = {{1, 1}, {2}};
    cfg.a = {-1.0, 1.0};
    cfg.b = {0.0};
    cfg.alpha = {0.0, 0.0};
    cfg.beta = {0.0};
    cfg.E = IntervalUnion::segment(-1.0, 1.0);
    auto reports = check_prop1(cfg, 1e-8);
    REQUIRE(reports.size() == 3);
    for (const auto& r : reports) {
        INFO(r.id, " rel=", r.rel_residual);
        CHECK(r.status == ResidualReport::Status::Pass);
        CHECK(r.rel_residual < 1e-8);
    }

    // N = 1: no permutation structure, all members equal a single integral
    IdentityConfig triv;
    triv.sizes = {{1}, {1}};
    triv.a = {0.0};
    triv.b = {0.0};
    triv.alpha = {0.0};
    triv.beta = {0.0};
    triv.E = IntervalUnion::segment(-0.7, 1.3);
    for (const auto& r : check_prop1(triv, 1e-12)) CHECK(r.passed());

    // N = 3 with three starting families
    IdentityConfig big;
    big.sizes = {{1, 1, 1}, {3}};
    big.a = {-1.0, 0.2, 0.8};
    big.b = {0.0};
    big.alpha = {0.0, 0.0, 0.0};
    big.beta = {0.0};
    big.E = IntervalUnion::segment(-1.2, 1.4);
    for (const auto& r : check_prop1(big, 1e-7)) {
        INFO(r.id, " rel=", r.rel_residual);
        CHECK(r.passed());
        CHECK(r.rel_residual < 1e-7);
    }
    IdentityConfig four;
    four.sizes = {{4}, {4}};
    four.a = {0.0};
    four.b = {0.0};
    four.alpha = {0.0};
    four.beta = {0.0};
    four.E = IntervalUnion::segment(-1.0, 1.0);
    CHECK_THROWS_AS(check_prop1(four, 1e-7), std::invalid_argument);
}
