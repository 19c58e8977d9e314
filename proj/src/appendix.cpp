#include "nbm/appendix.hpp"

#include <cmath>
#include <stdexcept>

namespace nbm {

namespace {

constexpr double kLog2Pi = 1.8378770664093453;
const dd kLog2PiDD(1.8378770664093453, -1.3279862434060913e-17);

template <typename Scalar>
Scalar hermite_rec(int j, Scalar ax) {
    Scalar prev(1.0), cur = ax;
    if (j == 0) return prev;
    for (int k = 1; k < j; ++k) {
        Scalar next = ax * cur + Scalar(double(k)) * prev;
        prev = cur;
        cur = next;
    }
    return cur;
}

template <typename Scalar> Scalar hermite_sv(int j, Scalar x);
template <> double hermite_sv<double>(int j, double x) { return hermite_value(j, x); }
template <> dd hermite_sv<dd>(int j, dd x) { return hermite_value_dd(j, x); }

inline double exp_scalar(double x) { return std::exp(x); }
inline dd exp_scalar(dd x) { return exp(x); }

} // namespace

std::vector<BigInt> hermite_p(int j) {
    if (j < 0) throw std::invalid_argument("polynomial degree must be >= 0");
    std::vector<BigInt> p{1};
    for (int d = 0; d < j; ++d) {
        std::vector<BigInt> next(p.size() + 1, BigInt(0));
        for (std::size_t i = 0; i < p.size(); ++i) next[i + 1] += p[i]; // x p
        for (std::size_t i = 1; i < p.size(); ++i) next[i - 1] += BigInt(long(i)) * p[i]; // p'
        p = std::move(next);
    }
    return p;
}

double hermite_value(int j, double x) {
    double v = hermite_rec(j, std::abs(x));
    return (x < 0.0 && j % 2 == 1) ? -v : v;
}

dd hermite_value_dd(int j, dd x) {
    dd v = hermite_rec(j, abs(x));
    return (x.hi < 0.0 && j % 2 == 1) ? -v : v;
}

SignedLog tau_full_range(int m1, int m2, double at, double bt, Precision prec) {
    if (m1 < 0 || m2 < 0 || m1 + m2 < 1) throw std::invalid_argument("bad block sizes");
    BlockSizes sz{{m1, m2}, {m1, m2}};
    TauPoint pt = TauPoint::locus({at, -at}, {bt, -bt}, IntervalUnion::whole_line());
    TauOptions opts;
    opts.precision = prec;
    return tau_log(sz, pt, opts);
}

namespace {

// The tilt sums are formed in the working scalar: the determinant is badly
// conditioned against uncorrelated entry rounding, so the dd path must keep
// a~+b~ and a~-b~ exact rather than rounding them to double first.
template <typename Scalar>
SignedLog factored_det(int m1, int m2, double at, double bt) {
    const int N = m1 + m2;
    Mat<Scalar> M(N, N);
    Scalar a(at), b(bt);
    Scalar ez = exp_scalar(Scalar(4.0) * a * b);
    auto put = [&](int r0, int c0, int rows, int cols, Scalar arg, bool scale) {
        for (int i = 0; i < rows; ++i)
            for (int j = 0; j < cols; ++j) {
                Scalar v = hermite_sv<Scalar>(i + j, arg);
                if (scale) v *= ez;
                M(r0 + i, c0 + j) = v;
            }
    };
    put(0, 0, m1, m1, a + b, true);
    put(0, m1, m1, m2, a - b, false);
    put(m1, 0, m2, m1, b - a, false);
    put(m1, m1, m2, m2, -(a + b), false);
    return log_det(M).det;
}

} // namespace

SignedLog tau_full_range_factored(int m1, int m2, double at, double bt, Precision prec) {
    if (m1 < 0 || m2 < 0 || m1 + m2 < 1) throw std::invalid_argument("bad block sizes");
    const int N = m1 + m2;
    double pref = 0.5 * N * kLog2Pi + 0.5 * N * (at + bt) * (at + bt) - 4.0 * m1 * at * bt;
    SignedLog det = prec == Precision::DoubleDouble ? factored_det<dd>(m1, m2, at, bt)
                                                    : factored_det<double>(m1, m2, at, bt);
    if (det.is_zero()) return det;
    return SignedLog::from_log(det.sign, det.logmag + pref);
}

namespace {

template <typename Scalar>
SignedLog schur_impl(const Mat<Scalar>& A, const Mat<Scalar>& B, const Mat<Scalar>& C,
                     const Mat<Scalar>& D) {
    if (A.rows() != A.cols() || D.rows() != D.cols())
        throw std::invalid_argument("A and D must be square");
    if (B.rows() != A.rows() || B.cols() != D.cols() || C.rows() != D.rows() ||
        C.cols() != A.cols())
        throw std::invalid_argument("inconsistent block shapes");
    if (D.rows() == 0) return log_det(A).det;

    auto detD = log_det(D).det;
    if (detD.is_zero()) throw NumericalGuardError("D block is singular");
    if (A.rows() == 0) return detD;

    Mat<Scalar> X = C; // D^{-1} C
    lu_solve(D, X);
    Mat<Scalar> S = A;
    for (int i = 0; i < A.rows(); ++i)
        for (int j = 0; j < A.cols(); ++j) {
            Scalar s = S(i, j);
            for (int k = 0; k < D.rows(); ++k) s -= B(i, k) * X(k, j);
            S(i, j) = s;
        }
    auto detS = log_det(S).det;
    return detD * detS;
}

} // namespace

SignedLog schur_det(const Matrix& A, const Matrix& B, const Matrix& C, const Matrix& D) {
    return schur_impl(A, B, C, D);
}

SignedLog schur_det_dd(const MatrixDD& A, const MatrixDD& B, const MatrixDD& C,
                       const MatrixDD& D) {
    return schur_impl(A, B, C, D);
}

double x_tail_log(double z, int m2) {
    if (!(z > 0.0)) throw std::invalid_argument("tail sum needs z > 0");
    if (m2 < 0) throw std::invalid_argument("m2 must be >= 0");
    if (m2 == 0) {
        // whole series: log e^z
        return z;
    }
    double lead = m2 * std::log(z) - std::lgamma(m2 + 1.0);
    double sum = 1.0, r = 1.0;
    long j = m2;
    while (true) {
        r *= z / double(j + 1);
        sum += r;
        ++j;
        if (j > z && r < 1e-18 * sum) break;
        if (j > m2 + 100000000L) break;
    }
    return lead + std::log(sum);
}

dd x_head_dd(dd z, int m2) {
    dd sum(0.0), term(1.0);
    for (int j = 0; j < m2; ++j) {
        sum += term;
        term = term * z / dd(double(j + 1));
    }
    return sum;
}

double ScalingPoint::a() const { return 0.5 * std::sqrt(m2 / 2.0) * (1.0 + A / std::cbrt(m2)); }
double ScalingPoint::b() const { return 0.5 * std::sqrt(m2 / 2.0) * (1.0 - B / std::cbrt(m2)); }

double ScalingPoint::z() const {
    double e = std::cbrt(m2);
    return m2 * (1.0 + (A - B) / e - A * B / (e * e));
}

double x_asymptotic_log(const ScalingPoint& pt) {
    if (!(pt.A < pt.B)) throw std::invalid_argument("scaling needs A < B");
    double m2 = pt.m2;
    double t13 = std::cbrt(m2);
    return m2 + (pt.A - pt.B) * t13 * t13 - 0.5 * (pt.A * pt.A + pt.B * pt.B) * t13 +
           0.5 * pt.A * pt.B * (pt.A - pt.B) - std::log(m2) / 6.0 -
           std::log(std::sqrt(2.0 * M_PI) * (pt.B - pt.A));
}

namespace {

// B D^{-1} C of the Hermite-factored blocks in double-double
MatrixDD reduced_correction(int m1, int m2, double at, double bt) {
    MatrixDD B(m1, m2), C(m2, m1), D(m2, m2);
    dd a(at), b(bt);
    auto fill = [&](MatrixDD& M, int rows, int cols, dd arg) {
        for (int i = 0; i < rows; ++i)
            for (int j = 0; j < cols; ++j) M(i, j) = hermite_value_dd(i + j, arg);
    };
    fill(B, m1, m2, a - b);
    fill(C, m2, m1, b - a);
    fill(D, m2, m2, -(a + b));
    MatrixDD X = C;
    lu_solve(D, X);
    MatrixDD out(m1, m1);
    for (int i = 0; i < m1; ++i)
        for (int j = 0; j < m1; ++j) {
            dd s(0.0);
            for (int k = 0; k < m2; ++k) s += B(i, k) * X(k, j);
            out(i, j) = s;
        }
    return out;
}

} // namespace

ConjectureReport conjecture_report(int m1, int m2, double at, double bt) {
    if (m1 < 1 || m1 > 4 || m2 < 1 || m2 > 40)
        throw std::invalid_argument("conjecture exploration limited to m1 <= 4, m2 <= 40");
    ConjectureReport rep;
    rep.m1 = m1;
    rep.m2 = m2;
    rep.at = at;
    rep.bt = bt;

    const dd z = dd(4.0) * dd(at) * dd(bt);
    const double logX = x_tail_log(double(z), m2);
    const dd head = x_head_dd(z, m2);

    // P_ij = p_{i+j}(a~+b~) head - (B D^{-1} C)_ij  (the e^z parts cancel)
    MatrixDD BDC = reduced_correction(m1, m2, at, bt);
    MatrixDD BDC_swap = reduced_correction(m1, m2, bt, at);

    auto P = [&](const MatrixDD& M, int i, int j) {
        return hermite_value_dd(i + j, dd(at) + dd(bt)) * head - M(i, j);
    };

    dd p00 = P(BDC, 0, 0);
    rep.entry00_rel_residual = std::abs(double(p00)) / std::exp(logX);

    for (int i = 0; i < m1; ++i)
        for (int j = i + 1; j < m1; ++j) {
            dd pij = P(BDC, i, j);
            dd pji = P(BDC_swap, j, i);
            double scale = std::max({std::abs(double(pij)), std::abs(double(pji)), 1e-300});
            rep.symmetry_rel_residuals.push_back(std::abs(double(pij - pji)) / scale);
        }

    // exact log tau via the reduced determinant and det D = prod i!
    const int N = m1 + m2;
    double log_fact_m2 = 0.0, log_fact_m1 = 0.0;
    for (int i = 1; i < m2; ++i) log_fact_m2 += std::lgamma(i + 1.0);
    for (int i = 1; i < m1; ++i) log_fact_m1 += std::lgamma(i + 1.0);

    MatrixDD S(m1, m1);
    dd ez = exp(z);
    for (int i = 0; i < m1; ++i)
        for (int j = 0; j < m1; ++j)
            S(i, j) = hermite_value_dd(i + j, dd(at) + dd(bt)) * ez - BDC(i, j);
    auto detS = log_det(S).det;
    double pref = 0.5 * N * kLog2Pi + 0.5 * N * (at + bt) * (at + bt) - 4.0 * m1 * at * bt;
    rep.exact_log_tau = pref + log_fact_m2 + detS.logmag;

    rep.conjecture_log_m1_variant = 0.5 * N * kLog2Pi + 0.5 * N * (at + bt) * (at + bt) -
                                    4.0 * m1 * at * bt + log_fact_m1 + log_fact_m2 +
                                    m1 * logX;
    rep.conjecture_log_m2_variant = 0.5 * N * kLog2Pi + 0.5 * N * (at + bt) * (at + bt) -
                                    4.0 * m2 * at * bt + log_fact_m1 + log_fact_m2 +
                                    m2 * logX;
    return rep;
}

} // namespace nbm
