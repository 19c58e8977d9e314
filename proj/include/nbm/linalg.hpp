#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "nbm/dd.hpp"
#include "nbm/signedlog.hpp"

namespace nbm {

// Thrown when a numerical safeguard trips (conditioning beyond budget,
// non-finite matrix entries, desk-scale ceiling exceeded). CLI maps it to a
// dedicated exit code.
struct NumericalGuardError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

template <typename Scalar>
class Mat {
public:
    Mat() = default;
    Mat(int rows, int cols) : rows_(rows), cols_(cols), d_(std::size_t(rows) * cols, Scalar(0.0)) {}

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    Scalar& operator()(int i, int j) { return d_[std::size_t(i) * cols_ + j]; }
    const Scalar& operator()(int i, int j) const { return d_[std::size_t(i) * cols_ + j]; }

private:
    int rows_ = 0, cols_ = 0;
    std::vector<Scalar> d_;
};

using Matrix = Mat<double>;
using MatrixDD = Mat<dd>;

struct LogDetResult {
    SignedLog det;
    double cond1 = 0.0; // one-norm condition estimate of the row-equilibrated matrix
};

namespace detail {
inline double to_double(double x) { return x; }
inline double to_double(dd x) { return double(x); }
inline double log_mag(double x) { return std::log(std::abs(x)); }
inline double log_mag(dd x) { return double(log(abs(x))); }
inline double abs_s(double x) { return std::abs(x); }
inline dd abs_s(dd x) { return abs(x); }
}

// LU with partial pivoting on a row-equilibrated copy; the per-row max
// magnitudes are pulled into the log so the elimination runs on O(1) numbers.
// Exactly singular input yields sign 0. Also returns a one-norm condition
// estimate obtained from the factorization.
template <typename Scalar>
LogDetResult lu_log_det(Mat<Scalar> A) {
    const int n = A.rows();
    if (n != A.cols()) throw std::invalid_argument("log_det needs a square matrix");
    if (n == 0) return {SignedLog::from_log(1, 0.0), 1.0};

    double logaccum = 0.0;
    int sign = 1;
    for (int i = 0; i < n; ++i) {
        Scalar rmax(0.0);
        for (int j = 0; j < n; ++j) {
            Scalar v = detail::abs_s(A(i, j));
            if (!(std::isfinite(detail::to_double(v))))
                throw NumericalGuardError("non-finite matrix entry");
            if (rmax < v) rmax = v;
        }
        if (detail::to_double(rmax) == 0.0) return {SignedLog::zero(), 0.0};
        logaccum += detail::log_mag(rmax);
        for (int j = 0; j < n; ++j) A(i, j) /= rmax;
    }

    std::vector<int> piv(n);
    double anorm1 = 0.0;
    for (int j = 0; j < n; ++j) {
        double s = 0.0;
        for (int i = 0; i < n; ++i) s += std::abs(detail::to_double(A(i, j)));
        anorm1 = std::max(anorm1, s);
    }

    for (int k = 0; k < n; ++k) {
        int pk = k;
        for (int i = k + 1; i < n; ++i)
            if (detail::abs_s(A(pk, k)) < detail::abs_s(A(i, k))) pk = i;
        piv[k] = pk;
        if (pk != k) {
            for (int j = 0; j < n; ++j) std::swap(A(k, j), A(pk, j));
            sign = -sign;
        }
        if (detail::to_double(A(k, k)) == 0.0) return {SignedLog::zero(), 0.0};
        for (int i = k + 1; i < n; ++i) {
            Scalar f = A(i, k) / A(k, k);
            A(i, k) = f;
            for (int j = k + 1; j < n; ++j) A(i, j) -= f * A(k, j);
        }
    }

    double logmag = logaccum;
    for (int k = 0; k < n; ++k) {
        double ukk = detail::to_double(A(k, k));
        if (ukk < 0.0) sign = -sign;
        logmag += detail::log_mag(A(k, k));
    }

    // inv(A) one column at a time from the stored factors
    auto solve = [&](std::vector<double>& x) {
        for (int k = 0; k < n; ++k) {
            if (piv[k] != k) std::swap(x[k], x[piv[k]]);
            for (int i = k + 1; i < n; ++i) x[i] -= detail::to_double(A(i, k)) * x[k];
        }
        for (int k = n - 1; k >= 0; --k) {
            for (int j = k + 1; j < n; ++j) x[k] -= detail::to_double(A(k, j)) * x[j];
            x[k] /= detail::to_double(A(k, k));
        }
    };
    double invnorm1 = 0.0;
    for (int j = 0; j < n; ++j) {
        std::vector<double> e(n, 0.0);
        e[j] = 1.0;
        solve(e);
        double s = 0.0;
        for (double v : e) s += std::abs(v);
        invnorm1 = std::max(invnorm1, s);
    }

    return {SignedLog::from_log(sign, logmag), anorm1 * invnorm1};
}

// Solve A X = B in place of B (general small dense solve, partial pivoting).
template <typename Scalar>
void lu_solve(Mat<Scalar> A, Mat<Scalar>& B) {
    const int n = A.rows();
    if (n != A.cols() || B.rows() != n) throw std::invalid_argument("bad solve dimensions");
    for (int k = 0; k < n; ++k) {
        int pk = k;
        for (int i = k + 1; i < n; ++i)
            if (detail::abs_s(A(pk, k)) < detail::abs_s(A(i, k))) pk = i;
        if (pk != k) {
            for (int j = 0; j < n; ++j) std::swap(A(k, j), A(pk, j));
            for (int j = 0; j < B.cols(); ++j) std::swap(B(k, j), B(pk, j));
        }
        if (detail::to_double(A(k, k)) == 0.0)
            throw NumericalGuardError("singular matrix in solve");
        for (int i = k + 1; i < n; ++i) {
            Scalar f = A(i, k) / A(k, k);
            for (int j = k; j < n; ++j) A(i, j) -= f * A(k, j);
            for (int j = 0; j < B.cols(); ++j) B(i, j) -= f * B(k, j);
        }
    }
    for (int k = n - 1; k >= 0; --k) {
        for (int j = 0; j < B.cols(); ++j) {
            Scalar s = B(k, j);
            for (int i = k + 1; i < n; ++i) s -= A(k, i) * B(i, j);
            B(k, j) = s / A(k, k);
        }
    }
}

inline LogDetResult log_det(const Matrix& m) { return lu_log_det(m); }
inline LogDetResult log_det(const MatrixDD& m) { return lu_log_det(m); }

} // namespace nbm
