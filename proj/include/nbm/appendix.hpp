#pragma once

#include <vector>

#include "nbm/counting.hpp"
#include "nbm/linalg.hpp"
#include "nbm/signedlog.hpp"
#include "nbm/tau.hpp"

namespace nbm {

// Monic Hermite-type polynomials p_j(x) = e^{-x^2/2} (d/dx)^j e^{x^2/2},
// satisfying p_{j+1} = x p_j + p_j'. Exact integer coefficients, ascending.
std::vector<BigInt> hermite_p(int j);

// Value via the three-term recurrence p_{j+1} = x p_j + j p_{j-1}; all
// coefficients are nonnegative, so evaluation at |x| with the parity sign
// p_j(-x) = (-1)^j p_j(x) is cancellation-free.
double hermite_value(int j, double x);
dd hermite_value_dd(int j, dd x);

// The full-range tau for two symmetric families (sizes m1, m2 at +-a~, +-b~),
// evaluated from the block moment determinant with tilts a~+b~, a~-b~,
// -a~+b~, -a~-b~.
SignedLog tau_full_range(int m1, int m2, double at, double bt,
                         Precision prec = Precision::DoubleDouble);

// The same value through the factored form: the prefactor
// (2 pi)^{N/2} e^{(N/2)(a~+b~)^2} e^{-4 m1 a~ b~} times the determinant of the
// Hermite-polynomial block matrix (with e^{4 a~ b~} on the upper-left block).
SignedLog tau_full_range_factored(int m1, int m2, double at, double bt,
                                  Precision prec = Precision::DoubleDouble);

// det [[A,B],[C,D]] = det(D) det(A - B D^{-1} C), D square invertible.
SignedLog schur_det(const Matrix& A, const Matrix& B, const Matrix& C, const Matrix& D);
SignedLog schur_det_dd(const MatrixDD& A, const MatrixDD& B, const MatrixDD& C,
                       const MatrixDD& D);

// log of X = e^z - sum_{j<m2} z^j/j!, computed as the tail series
// sum_{j>=m2} z^j/j! (cancellation-free). Requires z > 0; the sign is +1.
double x_tail_log(double z, int m2);

// Taylor head sum_{j<m2} z^j/j! in double-double.
dd x_head_dd(dd z, int m2);

// The scaled endpoint data of the large-m2 regime: a and b pinched together
// so the m1 wanderers touch the bulk of m2 paths.
struct ScalingPoint {
    double A = 0.0;
    double B = 0.0; // requires A < B
    double m2 = 0.0;

    double a() const;
    double b() const;
    double z() const; // 8ab = m2 (1 + (A-B) m2^{-1/3} - A B m2^{-2/3})
};

// Leading-order saddle-point value of log X under the scaling, i.e. log of
//   m2^{-1/6}/(sqrt(2 pi)(B-A)) exp(m2 + (A-B) m2^{2/3}
//        - (A^2+B^2)/2 m2^{1/3} + AB(A-B)/2).
double x_asymptotic_log(const ScalingPoint& pt);

// Numerical exploration of the conjectured structure of the reduced
// full-range determinant. Residual (i): the (0,0) entry of A - B D^{-1} C
// against p_0 X = X. Residuals (ii): P_ij(a~,b~) - P_ji(b~,a~) for the
// correction polynomials P_ij = (A - B D^{-1} C)_ij - p_{i+j}(a~+b~) X.
// Ratios (iii): exact log tau against the two readings of the conjectured
// product (the m1 exponent and the printed m2 exponent). Report only; the
// underlying claims are numerical observations, so nothing is gated here.
struct ConjectureReport {
    int m1 = 0, m2 = 0;
    double at = 0.0, bt = 0.0;
    double entry00_rel_residual = 0.0;
    std::vector<double> symmetry_rel_residuals; // row-major over (i,j), i<j
    double exact_log_tau = 0.0;
    double conjecture_log_m1_variant = 0.0;
    double conjecture_log_m2_variant = 0.0;
};

ConjectureReport conjecture_report(int m1, int m2, double at, double bt);

} // namespace nbm
