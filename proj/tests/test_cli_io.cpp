#include "doctest.h"

#include "nbm/json_io.hpp"

using namespace nbm;

TEST_CASE("interval json round trip with infinity sentinels") {
    IntervalUnion e({{-kInf, 0.0}, {1.0, 2.5}});
    auto j = to_json(e);
    auto back = interval_from_json(j);
    CHECK(back.components()[0].lo == -kInf);
    CHECK(back.components()[1].hi == 2.5);

    CHECK_THROWS_AS(interval_from_json(Json{{"intervals", Json::array()}, {"extra", 1}}),
                    std::invalid_argument);
    CHECK_THROWS_AS(interval_from_json(Json{{"intervals", {{"+oo", 1.0}}}}),
                    std::invalid_argument);
}

TEST_CASE("ensemble json round trip and strictness") {
    EnsembleSpec s;
    s.q = 2;
    s.p = 1;
    s.m = {1, 1};
    s.n = {2};
    s.a = {-1.0, 1.0};
    s.b = {0.0};
    s.t = 0.25;
    auto j = to_json(s);
    auto back = ensemble_from_json(j);
    CHECK(back.q == 2);
    CHECK(back.m == s.m);
    CHECK(back.t == 0.25);

    j["surprise"] = true;
    CHECK_THROWS_AS(ensemble_from_json(j), std::invalid_argument);
}

TEST_CASE("content hash is stable and key-order independent") {
    Json a{{"x", 1}, {"y", 2.5}};
    Json b{{"y", 2.5}, {"x", 1}};
    CHECK(content_hash(a) == content_hash(b));
    CHECK(content_hash(a).size() == 16);
    Json c{{"x", 1}, {"y", 2.50001}};
    CHECK(content_hash(a) != content_hash(c));
}
