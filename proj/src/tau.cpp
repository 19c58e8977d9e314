#include "nbm/tau.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace nbm {

TauPoint TauPoint::locus(const std::vector<double>& a, const std::vector<double>& b,
                         const IntervalUnion& E) {
    TauPoint pt;
    pt.a = a;
    pt.b = b;
    pt.alpha.assign(a.size(), 0.0);
    pt.s1.assign(a.size(), 0.0);
    pt.s2.assign(a.size(), 0.0);
    pt.beta.assign(b.size(), 0.0);
    pt.t1.assign(b.size(), 0.0);
    pt.t2.assign(b.size(), 0.0);
    pt.E = E;
    return pt;
}

int BlockSizes::total_m() const { return std::accumulate(m.begin(), m.end(), 0); }
int BlockSizes::total_n() const { return std::accumulate(n.begin(), n.end(), 0); }

BlockSizes shifted(const BlockSizes& base, const std::vector<int>& dm,
                   const std::vector<int>& dn) {
    BlockSizes out = base;
    if (!dm.empty()) {
        if (dm.size() != out.m.size()) throw std::invalid_argument("bad row shift length");
        for (std::size_t i = 0; i < dm.size(); ++i) out.m[i] += dm[i];
    }
    if (!dn.empty()) {
        if (dn.size() != out.n.size()) throw std::invalid_argument("bad column shift length");
        for (std::size_t j = 0; j < dn.size(); ++j) out.n[j] += dn[j];
    }
    for (int mi : out.m)
        if (mi < 0) throw std::invalid_argument("shift makes a multiplicity negative");
    for (int nj : out.n)
        if (nj < 0) throw std::invalid_argument("shift makes a multiplicity negative");
    if (out.total_m() != out.total_n())
        throw std::invalid_argument("shift leaves unequal totals");
    return out;
}

double block_tilt_c(const TauPoint& pt, int i, int j) {
    return pt.a[i] + pt.b[j] + pt.t1[j] - pt.s1[i];
}

double block_tilt_gamma(const TauPoint& pt, int i, int j) {
    return 1.0 - 2.0 * (pt.alpha[i] + pt.beta[j] + pt.t2[j] - pt.s2[i]);
}

namespace {

template <typename Scalar, typename MomentFn>
Mat<Scalar> assemble(const BlockSizes& sizes, const TauPoint& pt, MomentFn&& block_moments) {
    const int q = (int)sizes.m.size(), p = (int)sizes.n.size();
    if ((int)pt.a.size() != q || (int)pt.b.size() != p)
        throw std::invalid_argument("block sizes inconsistent with coordinates");
    const int N = sizes.total_m();
    if (N != sizes.total_n()) throw std::invalid_argument("unequal block totals");

    Mat<Scalar> M(N, N);
    int row0 = 0;
    for (int bi = 0; bi < q; ++bi) {
        if (sizes.m[bi] == 0) continue;
        int col0 = 0;
        for (int bj = 0; bj < p; ++bj) {
            if (sizes.n[bj] == 0) {
                continue;
            }
            int kmax = sizes.m[bi] + sizes.n[bj] - 2;
            std::vector<Scalar> mus = block_moments(bi, bj, kmax);
            for (int i = 0; i < sizes.m[bi]; ++i)
                for (int j = 0; j < sizes.n[bj]; ++j)
                    M(row0 + i, col0 + j) = mus[i + j];
            col0 += sizes.n[bj];
        }
        row0 += sizes.m[bi];
    }
    return M;
}

} // namespace

Matrix build_matrix(const BlockSizes& sizes, const TauPoint& pt) {
    return assemble<double>(sizes, pt, [&](int bi, int bj, int kmax) {
        MomentParams mp{block_tilt_c(pt, bi, bj), block_tilt_gamma(pt, bi, bj), pt.E};
        auto sm = moments_scaled(kmax, mp);
        double scale = std::exp(sm.log_scale);
        std::vector<double> out(kmax + 1);
        for (int k = 0; k <= kmax; ++k) out[k] = sm.nu[k] * scale;
        return out;
    });
}

MatrixDD build_matrix_dd(const BlockSizes& sizes, const TauPoint& pt) {
    return assemble<dd>(sizes, pt, [&](int bi, int bj, int kmax) {
        double c = block_tilt_c(pt, bi, bj);
        double g = block_tilt_gamma(pt, bi, bj);
        MomentParams mp{c, g, pt.E};
        auto sm = moments_scaled_dd(kmax, mp);
        dd scale = exp(dd(c) * dd(c) / (dd(2.0) * dd(g)));
        std::vector<dd> out(kmax + 1);
        for (int k = 0; k <= kmax; ++k) out[k] = sm.nu[k] * scale;
        return out;
    });
}

SignedLog tau_log(const BlockSizes& sizes, const TauPoint& pt, const TauOptions& opts) {
    const int N = sizes.total_m();
    if (N > opts.desk_limit_dd)
        throw NumericalGuardError("N exceeds the double-double desk-scale ceiling");

    bool want_dd = opts.precision == Precision::DoubleDouble || N > opts.desk_limit_double;
    if (!want_dd) {
        auto r = log_det(build_matrix(sizes, pt));
        if (r.det.is_zero() || r.cond1 <= opts.cond_guard) return r.det;
        want_dd = true;
    }
    auto r = log_det(build_matrix_dd(sizes, pt));
    if (!r.det.is_zero() && r.cond1 > opts.cond_limit)
        throw NumericalGuardError("moment matrix condition beyond double-double budget");
    return r.det;
}

SignedLog tau_shifted(const BlockSizes& sizes, const TauPoint& pt,
                      const std::vector<int>& dm, const std::vector<int>& dn,
                      const TauOptions& opts) {
    return tau_log(shifted(sizes, dm, dn), pt, opts);
}

ProbabilityResult probability(const EnsembleSpec& spec, const IntervalUnion& E,
                              const TauOptions& opts) {
    EnsembleSpec v = validate(spec);
    ProbabilityResult out;
    out.normalized = normalize(v, E);

    BlockSizes sizes{v.m, v.n};
    TauPoint ptE = TauPoint::locus(out.normalized.a, out.normalized.b, out.normalized.E);
    TauPoint ptR = TauPoint::locus(out.normalized.a, out.normalized.b,
                                   IntervalUnion::whole_line());

    out.log_tau_E = tau_log(sizes, ptE, opts);
    out.log_tau_R = tau_log(sizes, ptR, opts);
    if (out.log_tau_R.is_zero())
        throw NumericalGuardError("degenerate configuration: tau over the full line vanishes");

    SignedLog ratio = out.log_tau_E / out.log_tau_R;
    out.probability = ratio.value();
    out.clamped = std::min(1.0, std::max(0.0, out.probability));
    return out;
}

} // namespace nbm
