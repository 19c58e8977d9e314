#pragma once

#include <vector>

#include "nbm/ensemble.hpp"
#include "nbm/linalg.hpp"
#include "nbm/moments.hpp"

namespace nbm {

enum class Precision { Double, DoubleDouble };

// Evaluation point of the deformed tau function: coordinates of the
// normalized problem plus the finite deformation. All vectors are full
// (length q resp. p); sum-zero constraints are realized by how derivative
// directions move the entries, not re-imposed here.
struct TauPoint {
    std::vector<double> a, alpha, s1, s2; // size q
    std::vector<double> b, beta, t1, t2;  // size p
    IntervalUnion E;

    static TauPoint locus(const std::vector<double>& a, const std::vector<double>& b,
                          const IntervalUnion& E);
};

// Block row/column multiplicities of the moment matrix; |m| = |n| = N.
struct BlockSizes {
    std::vector<int> m, n;

    int total_m() const;
    int total_n() const;
};

// Block sizes after a shift m += dm, n += dn; throws if any multiplicity goes
// negative or the totals end up unequal.
BlockSizes shifted(const BlockSizes& base, const std::vector<int>& dm,
                   const std::vector<int>& dn);

// Entry tilt of block (i,j): linear c_ij = a_i + b_j + t1_j - s1_i, quadratic
// gamma_ij = 1 - 2(alpha_i + beta_j + t2_j - s2_i).
double block_tilt_c(const TauPoint& pt, int i, int j);
double block_tilt_gamma(const TauPoint& pt, int i, int j);

// The N x N block moment matrix; row blocks in starting-family order, column
// blocks in ending-family order, confluent powers increasing within a block.
Matrix build_matrix(const BlockSizes& sizes, const TauPoint& pt);
MatrixDD build_matrix_dd(const BlockSizes& sizes, const TauPoint& pt);

struct TauOptions {
    Precision precision = Precision::Double;
    double cond_guard = 1e12;    // above this, retry in double-double
    double cond_limit = 1e24;    // above this even in dd, refuse
    int desk_limit_double = 12;  // largest N trusted in double
    int desk_limit_dd = 20;      // largest N trusted at all
};

// log tau as a signed log determinant. Applies the conditioning guard; throws
// NumericalGuardError rather than returning a silently wrong sign.
SignedLog tau_log(const BlockSizes& sizes, const TauPoint& pt, const TauOptions& opts = {});

// tau of the shifted block structure (same weights, multiplicities moved).
SignedLog tau_shifted(const BlockSizes& sizes, const TauPoint& pt,
                      const std::vector<int>& dm, const std::vector<int>& dn,
                      const TauOptions& opts = {});

struct ProbabilityResult {
    double probability = 0.0; // raw ratio tau^E / tau^R
    double clamped = 0.0;     // reporting value clamped to [0,1]
    SignedLog log_tau_E;
    SignedLog log_tau_R;
    NormalizedProblem normalized;
};

// P(all particles in E at time t) via the normalized problem and the tau ratio.
ProbabilityResult probability(const EnsembleSpec& spec, const IntervalUnion& E,
                              const TauOptions& opts = {});

} // namespace nbm
