#include "nbm/json_io.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace nbm {

namespace {

void reject_unknown(const Json& j, std::initializer_list<const char*> keys) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool known = false;
        for (const char* k : keys)
            if (it.key() == k) {
                known = true;
                break;
            }
        if (!known) throw std::invalid_argument("unknown key: " + it.key());
    }
}

Json endpoint_to_json(double v) {
    if (v == -kInf) return "-inf";
    if (v == kInf) return "inf";
    return v;
}

double endpoint_from_json(const Json& j) {
    if (j.is_string()) {
        std::string s = j.get<std::string>();
        if (s == "-inf") return -kInf;
        if (s == "inf" || s == "+inf") return kInf;
        throw std::invalid_argument("bad endpoint sentinel: " + s);
    }
    return j.get<double>();
}

} // namespace

Json to_json(const IntervalUnion& e) {
    Json arr = Json::array();
    for (const auto& c : e.components())
        arr.push_back(Json::array({endpoint_to_json(c.lo), endpoint_to_json(c.hi)}));
    return Json{{"intervals", arr}};
}

IntervalUnion interval_from_json(const Json& j) {
    reject_unknown(j, {"intervals"});
    if (!j.contains("intervals")) throw std::invalid_argument("missing 'intervals'");
    std::vector<IntervalUnion::Component> comps;
    for (const auto& pair : j.at("intervals")) {
        if (!pair.is_array() || pair.size() != 2)
            throw std::invalid_argument("each interval must be [lo, hi]");
        comps.push_back({endpoint_from_json(pair[0]), endpoint_from_json(pair[1])});
    }
    return IntervalUnion(comps);
}

Json to_json(const EnsembleSpec& s) {
    return Json{{"q", s.q}, {"p", s.p}, {"m", s.m}, {"n", s.n},
                {"a", s.a}, {"b", s.b}, {"t", s.t}};
}

EnsembleSpec ensemble_from_json(const Json& j) {
    reject_unknown(j, {"q", "p", "m", "n", "a", "b", "t"});
    EnsembleSpec s;
    s.q = j.at("q").get<int>();
    s.p = j.at("p").get<int>();
    s.m = j.at("m").get<std::vector<int>>();
    s.n = j.at("n").get<std::vector<int>>();
    s.a = j.at("a").get<std::vector<double>>();
    s.b = j.at("b").get<std::vector<double>>();
    s.t = j.at("t").get<double>();
    return s;
}

Json to_json(const ResidualReport& r) {
    const char* status = r.status == ResidualReport::Status::Pass
                             ? "pass"
                             : (r.status == ResidualReport::Status::Fail ? "fail"
                                                                         : "indeterminate");
    return Json{{"id", r.id},
                {"lhs", r.lhs},
                {"rhs", r.rhs},
                {"abs_residual", r.abs_residual},
                {"rel_residual", r.rel_residual},
                {"fd_error_estimate", r.fd_error_estimate},
                {"tolerance", r.tolerance},
                {"status", status}};
}

Json to_json(const Estimate& e) {
    return Json{{"p_hat", e.p_hat},
                {"std_error", e.std_error},
                {"ess", e.ess},
                {"sign_flips", e.sign_flips},
                {"acceptance_rate", e.acceptance_rate},
                {"split_rhat", e.split_rhat},
                {"total_samples", e.total_samples},
                {"healthy", e.healthy}};
}

std::string content_hash(const Json& j) {
    std::string s = j.dump();
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", (unsigned long long)h);
    return std::string(buf);
}

} // namespace nbm
