// Python bindings for the main operations: probability evaluation, tau
// values, the identity checkers, the counting census, the full-range
// machinery, and the stochastic cross-check.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "nbm/appendix.hpp"
#include "nbm/counting.hpp"
#include "nbm/identities.hpp"
#include "nbm/montecarlo.hpp"
#include "nbm/tau.hpp"

namespace py = pybind11;
using namespace nbm;

namespace {

IntervalUnion make_interval(const std::vector<std::pair<double, double>>& comps) {
    std::vector<IntervalUnion::Component> cs;
    for (auto& [lo, hi] : comps) cs.push_back({lo, hi});
    return IntervalUnion(cs);
}

EnsembleSpec make_spec(int q, int p, std::vector<int> m, std::vector<int> n,
                       std::vector<double> a, std::vector<double> b, double t) {
    EnsembleSpec s;
    s.q = q;
    s.p = p;
    s.m = std::move(m);
    s.n = std::move(n);
    s.a = std::move(a);
    s.b = std::move(b);
    s.t = t;
    return s;
}

IdentityConfig make_identity_config(std::vector<int> m, std::vector<int> n,
                                    std::vector<double> a, std::vector<double> b,
                                    const IntervalUnion& E, std::vector<double> alpha,
                                    std::vector<double> beta) {
    IdentityConfig cfg;
    cfg.sizes = {std::move(m), std::move(n)};
    cfg.a = std::move(a);
    cfg.b = std::move(b);
    cfg.E = E;
    cfg.alpha = alpha.empty() ? std::vector<double>(cfg.a.size(), 0.0) : std::move(alpha);
    cfg.beta = beta.empty() ? std::vector<double>(cfg.b.size(), 0.0) : std::move(beta);
    return cfg;
}

py::dict report_dict(const ResidualReport& r) {
    py::dict d;
    d["id"] = r.id;
    d["lhs"] = r.lhs;
    d["rhs"] = r.rhs;
    d["abs_residual"] = r.abs_residual;
    d["rel_residual"] = r.rel_residual;
    d["fd_error_estimate"] = r.fd_error_estimate;
    d["tolerance"] = r.tolerance;
    d["status"] = r.status == ResidualReport::Status::Pass
                      ? "pass"
                      : (r.status == ResidualReport::Status::Fail ? "fail" : "indeterminate");
    return d;
}

} // namespace

PYBIND11_MODULE(_nbm, mod) {
    mod.doc() = "non-intersecting Brownian motion probabilities and "
                "integrable-structure checks";

    py::class_<IntervalUnion>(mod, "IntervalUnion")
        .def(py::init(&make_interval), py::arg("components"))
        .def_static("whole_line", &IntervalUnion::whole_line)
        .def_static("segment", &IntervalUnion::segment, py::arg("lo"), py::arg("hi"))
        .def("contains", &IntervalUnion::contains)
        .def("finite_boundaries", &IntervalUnion::finite_boundaries)
        .def("__len__", &IntervalUnion::size);

    py::class_<EnsembleSpec>(mod, "EnsembleSpec")
        .def(py::init(&make_spec), py::arg("q"), py::arg("p"), py::arg("m"), py::arg("n"),
             py::arg("a"), py::arg("b"), py::arg("t"))
        .def_readonly("q", &EnsembleSpec::q)
        .def_readonly("p", &EnsembleSpec::p)
        .def_readonly("t", &EnsembleSpec::t)
        .def("total", &EnsembleSpec::total);

    mod.def("validate", &validate, py::arg("spec"));

    mod.def(
        "normalize",
        [](const EnsembleSpec& s, const IntervalUnion& E) {
            auto n = normalize(s, E);
            return py::make_tuple(n.a, n.b, n.E);
        },
        py::arg("spec"), py::arg("E"));

    mod.def(
        "mu",
        [](int k, double c, double gamma, const IntervalUnion& E) {
            return mu(k, {c, gamma, E});
        },
        py::arg("k"), py::arg("c") = 0.0, py::arg("gamma") = 1.0,
        py::arg("E") = IntervalUnion::whole_line(), "tilted Gaussian moment over E");

    mod.def("mu_full_range", &mu_full_range, py::arg("k"), py::arg("c"));

    mod.def(
        "log_tau",
        [](std::vector<int> m, std::vector<int> n, std::vector<double> a,
           std::vector<double> b, const IntervalUnion& E, bool dd_precision) {
            BlockSizes sz{std::move(m), std::move(n)};
            TauPoint pt = TauPoint::locus(a, b, E);
            TauOptions opts;
            if (dd_precision) opts.precision = Precision::DoubleDouble;
            auto v = tau_log(sz, pt, opts);
            return py::make_tuple(v.sign, v.logmag);
        },
        py::arg("m"), py::arg("n"), py::arg("a"), py::arg("b"), py::arg("E"),
        py::arg("dd_precision") = false,
        "sign and log magnitude of the block moment determinant");

    mod.def(
        "probability",
        [](const EnsembleSpec& s, const IntervalUnion& E) {
            auto r = probability(s, E);
            py::dict d;
            d["probability"] = r.probability;
            d["clamped"] = r.clamped;
            d["log_tau_E"] = r.log_tau_E.logmag;
            d["log_tau_R"] = r.log_tau_R.logmag;
            return d;
        },
        py::arg("spec"), py::arg("E"));

    mod.def(
        "check_hirota",
        [](std::vector<int> m, std::vector<int> n, std::vector<double> a,
           std::vector<double> b, const IntervalUnion& E, const std::string& family, int l,
           int lp, int j) {
            auto cfg = make_identity_config(m, n, a, b, E, {}, {});
            HirotaFamily fam = family == "tt"   ? HirotaFamily::TT
                               : family == "ss" ? HirotaFamily::SS
                               : family == "st" ? HirotaFamily::ST
                                                : HirotaFamily::TS;
            return report_dict(check_hirota(cfg, fam, l, lp, j));
        },
        py::arg("m"), py::arg("n"), py::arg("a"), py::arg("b"), py::arg("E"),
        py::arg("family"), py::arg("l"), py::arg("lp"), py::arg("j"));

    mod.def(
        "check_virasoro",
        [](std::vector<int> m, std::vector<int> n, std::vector<double> a,
           std::vector<double> b, const IntervalUnion& E, int k, std::vector<double> alpha,
           std::vector<double> beta) {
            auto cfg = make_identity_config(m, n, a, b, E, alpha, beta);
            return report_dict(check_virasoro(cfg, k));
        },
        py::arg("m"), py::arg("n"), py::arg("a"), py::arg("b"), py::arg("E"), py::arg("k"),
        py::arg("alpha") = std::vector<double>{}, py::arg("beta") = std::vector<double>{});

    mod.def(
        "check_pq22_system",
        [](std::vector<int> m, std::vector<int> n, std::vector<double> a,
           std::vector<double> b, const IntervalUnion& E) {
            auto cfg = make_identity_config(m, n, a, b, E, {}, {});
            py::list out;
            for (const auto& r : check_pq22_system(cfg)) out.append(report_dict(r));
            return out;
        },
        py::arg("m"), py::arg("n"), py::arg("a"), py::arg("b"), py::arg("E"));

    mod.def("kstar", &kstar, py::arg("x"));

    mod.def(
        "census",
        [](int p, int q, int K) {
            auto c = census(p, q, K);
            py::dict d;
            d["p"] = c.p;
            d["q"] = c.q;
            d["K"] = c.K;
            d["M"] = c.M;
            d["equations"] = c.equations.str();
            d["unknown_bound"] = c.unknown_bound.str();
            d["balanced"] = c.balanced;
            return d;
        },
        py::arg("p"), py::arg("q"), py::arg("K"));

    mod.def(
        "hermite_p",
        [](int j) {
            py::list out;
            for (const auto& c : hermite_p(j)) out.append(py::int_(py::str(c.str())));
            return out;
        },
        py::arg("j"), "exact coefficients, ascending powers");

    mod.def(
        "tau_full_range",
        [](int m1, int m2, double at, double bt) {
            auto v = tau_full_range(m1, m2, at, bt);
            return py::make_tuple(v.sign, v.logmag);
        },
        py::arg("m1"), py::arg("m2"), py::arg("at"), py::arg("bt"));

    mod.def("x_tail_log", &x_tail_log, py::arg("z"), py::arg("m2"));

    mod.def(
        "x_asymptotic_log",
        [](double A, double B, double m2) {
            return x_asymptotic_log(ScalingPoint{A, B, m2});
        },
        py::arg("A"), py::arg("B"), py::arg("m2"));

    mod.def(
        "estimate_probability",
        [](const EnsembleSpec& s, const IntervalUnion& E, int chains, long steps, long burnin,
           std::uint64_t seed, int threads) {
            ChainConfig cc;
            cc.chains = chains;
            cc.steps = steps;
            cc.burnin = burnin;
            cc.seed = seed;
            cc.threads = threads;
            auto e = estimate_probability(s, E, cc);
            py::dict d;
            d["p_hat"] = e.p_hat;
            d["std_error"] = e.std_error;
            d["ess"] = e.ess;
            d["sign_flips"] = e.sign_flips;
            d["acceptance_rate"] = e.acceptance_rate;
            d["split_rhat"] = e.split_rhat;
            d["healthy"] = e.healthy;
            return d;
        },
        py::arg("spec"), py::arg("E"), py::arg("chains") = 4, py::arg("steps") = 100000,
        py::arg("burnin") = 10000, py::arg("seed") = 20110422, py::arg("threads") = 1);
}
