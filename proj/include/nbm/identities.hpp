#pragma once

#include <string>
#include <vector>

#include "nbm/diffops.hpp"
#include "nbm/tau.hpp"

namespace nbm {

// One verified identity: both sides, residuals, the finite-difference error
// estimate, and the verdict. `indeterminate` marks configurations where both
// sides legitimately vanish (symmetric degeneracies), which is not a failure.
struct ResidualReport {
    std::string id;
    double lhs = 0.0;
    double rhs = 0.0;
    double abs_residual = 0.0;
    double rel_residual = 0.0;
    double fd_error_estimate = 0.0;
    double tolerance = 0.0;
    enum class Status { Pass, Fail, Indeterminate } status = Status::Fail;

    bool passed() const { return status != Status::Fail; }
};

ResidualReport make_report(std::string id, double lhs, double rhs, double tolerance,
                           double fd_error, double floor = 1e-8);

// A tau configuration for identity checking: block sizes, the (sum-zero) full
// coordinate vectors, the quadratic tilts of the evaluation point, and the set.
// All times sit at zero; alpha/beta may be nonzero where a check allows it.
struct IdentityConfig {
    BlockSizes sizes;
    std::vector<double> a, b;
    std::vector<double> alpha, beta;
    IntervalUnion E;
    TauOptions tau;
    FdPolicy fd;

    int q() const { return (int)sizes.m.size(); }
    int p() const { return (int)sizes.n.size(); }
    TauPoint point() const;
};

enum class HirotaFamily { TT, SS, ST, TS };

// Bilinear residue identities of the hierarchy, j in {0,1}:
//   TT: tau^2 d2 log tau / dt_{j+1}^(l) dt_1^(l') = Hirota(tau_{n+e_l-e_l'}, tau_{n-e_l+e_l'})
//   SS: the s-family mirror
//   ST: tau^2 d2 log tau / ds_1^(k) dt_{j+1}^(l) = -Hirota(tau_{m+e_k,n+e_l}, tau_{m-e_k,n-e_l})
//   TS: tau^2 d2 log tau / dt_1^(l) ds_{j+1}^(k) = -Hirota(tau_{m-e_k,n-e_l}, tau_{m+e_k,n+e_l})
// k,l are 1-based family indices; same-family checks need k != k' (l != l').
ResidualReport check_hirota(const IdentityConfig& cfg, HirotaFamily fam, int l, int lp, int j,
                            double tolerance = 1e-5);

// The four ratio identities (first derivatives of shifted-tau ratios against
// ratios of mixed second derivatives); `which` in 1..4 in the order above.
ResidualReport check_corollary_ratio(const IdentityConfig& cfg, int which, int k, int l,
                                     double tolerance = 1e-4);

// Virasoro constraints specialized to k = -1, 0 at (t,s) = 0.
ResidualReport check_virasoro(const IdentityConfig& cfg, int k, double tolerance = 1e-5);

// The seven second-derivative relations on the locus (t,s) = 0; `relation` in
// 1..7, with j,k 1-based family indices of the respective families.
ResidualReport check_second_derivative_lemma(const IdentityConfig& cfg, int relation, int j,
                                             int k, double tolerance = 5e-5);

// The six-equation system for p = q = 2 (single free alpha and beta). Each
// equation is evaluated over the configured step sweep; the reported residual
// is the smallest across the sweep.
std::vector<ResidualReport> check_pq22_system(const IdentityConfig& cfg,
                                              std::vector<double> step_sweep = {1e-2, 2e-2,
                                                                                4e-2},
                                              double tolerance = 1e-3);

// The triple-representation equality at zero deformation for N <= 3:
// (i) N! times the multiple integral of the two confluent determinants,
// (ii) (N!)^2 det of the single-integral moment matrix,
// (iii) the multinomial-weighted permutation sum with explicit Vandermondes.
// Returns the three pairwise comparisons.
std::vector<ResidualReport> check_prop1(const IdentityConfig& cfg, double tolerance,
                                        int nodes_per_component = 64);

// Everything at once: the standard verification sweep over one configuration.
std::vector<ResidualReport> run_identity_suite(const IdentityConfig& cfg);

} // namespace nbm
