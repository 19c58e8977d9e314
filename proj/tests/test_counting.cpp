#include "doctest.h"

#include "nbm/counting.hpp"

using namespace nbm;

TEST_CASE("binomials are exact at large arguments") {
    CHECK(binomial(6, 3) == 20);
    CHECK(binomial(8, 5) == 56);
    CHECK(binomial(52, 26) == BigInt("495918532948104"));
    CHECK(binomial(100, 50) == BigInt("100891344545564193334812497256"));
}

TEST_CASE("census reproduces the p=q=2 balance point") {
    auto c3 = census(2, 2, 3);
    CHECK(c3.M == 6);
    CHECK(c3.equations == 120);
    CHECK(c3.unknown_bound == 112);
    CHECK(c3.balanced);

    auto c2 = census(2, 2, 2);
    CHECK(c2.equations == 60);
    CHECK(c2.unknown_bound == 70);
    CHECK(!c2.balanced);
}

TEST_CASE("kstar scan crosses where the census balances") {
    CHECK(kstar(4) == 3);
    CHECK(kstar(5) == 4);
    // at x = 6 the quadratic is already positive at K = 4 (the census
    // balances 1890 equations against an 1848 bound), see the census check
    CHECK(kstar(6) == 4);
    CHECK(kstar(7) == 5);
    CHECK(kstar(8) == 5);

    auto c = census(3, 3, 4);
    CHECK(c.equations == 1890);
    CHECK(c.unknown_bound == 1848);
    CHECK(c.balanced);
    CHECK(!census(3, 3, 3).balanced);

    // splitting of x=5 with K* from the scan
    CHECK(census(2, 3, kstar(5)).balanced);
}

TEST_CASE("kstar agrees with the census over the full desk range") {
    for (int x = 4; x <= 40; ++x) {
        int ks = kstar(x);
        for (int p = 1; p < x; ++p) {
            int q = x - p;
            CHECK(census(p, q, ks).balanced);
            CHECK(!census(p, q, ks - 1).balanced);
        }
    }
}

TEST_CASE("kstar grows slowly and stabilizes locally") {
    int prev = kstar(4);
    for (int x = 5; x <= 64; ++x) {
        int k = kstar(x);
        CHECK(k >= prev); // non-decreasing over the scanned window
        CHECK(k - prev <= 1);
        prev = k;
    }
}
