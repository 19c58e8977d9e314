#pragma once

#include <functional>
#include <vector>

#include "nbm/tau.hpp"

namespace nbm {

// Differentiation coordinates of the deformed tau functional. A/B/Alpha/Beta
// are the free coordinates of the sum-zero families: moving A[i] by h moves
// the last family coordinate by -h, so derivatives respect the constraint.
// T1/T2/S1/S2 are unconstrained time coordinates; Endpoint indexes the finite
// boundaries of E in increasing order.
enum class CoordKind { A, B, Alpha, Beta, T1, T2, S1, S2, Endpoint };

struct Coordinate {
    CoordKind kind;
    int index = 0;
};

TauPoint displaced(const TauPoint& pt, const Coordinate& c, double h);

// Step sizes by differentiation depth: a first derivative of a plain
// functional uses h1; differentiating something that is itself a first
// derivative uses h2, and so on. Each derivative is centrally differenced and
// Richardson-extrapolated `richardson` times with halving steps.
struct FdPolicy {
    double h1 = 1e-3;
    double h2 = 5e-3;
    double h3 = 2e-2;
    int richardson = 2;
    double step_scale = 1.0;

    double step(int depth) const {
        double h = depth <= 1 ? h1 : (depth == 2 ? h2 : h3);
        return h * step_scale;
    }
};

struct FdValue {
    double value = 0.0;
    double error = 0.0;
};

// Scalar functional of a tau evaluation point. `depth` counts how many FD
// layers built it, which selects the step of the next derivative.
struct Functional {
    std::function<double(const TauPoint&)> eval;
    int depth = 0;

    double operator()(const TauPoint& pt) const { return eval(pt); }
};

// log tau (logmag of the signed log determinant) as a functional of the point
Functional log_tau_functional(BlockSizes sizes, TauOptions opts = {});

FdValue fd_first(const Functional& f, const TauPoint& at, const Coordinate& dir,
                 const FdPolicy& pol);

// mixed partial along dirs via nested central differences
FdValue fd_mixed(const Functional& f, const TauPoint& at, const std::vector<Coordinate>& dirs,
                 const FdPolicy& pol);

// the derivative as a functional (one FD layer deeper)
Functional differentiate(const Functional& f, const Coordinate& dir, const FdPolicy& pol);

// First-order linear differential operator sum_i coeff_i(pt) d/d dir_i plus an
// optional zeroth-order multiplication term. Compositions are evaluated
// numerically (operator applied to an already-differentiated functional), so
// products of coefficient functions and derivatives follow automatically.
class OperatorExpr {
public:
    using Coeff = std::function<double(const TauPoint&)>;

    OperatorExpr& add(Coordinate dir, double constant = 1.0);
    OperatorExpr& add(Coordinate dir, Coeff coeff);
    OperatorExpr& add_zeroth(double constant);
    OperatorExpr& add_zeroth(Coeff coeff);

    // op1 + op2 as operators
    OperatorExpr& add_op(const OperatorExpr& other, double factor = 1.0);

    Functional apply(const Functional& f, const FdPolicy& pol) const;

private:
    struct Term {
        Coeff coeff; // null means 1
        double constant = 1.0;
        Coordinate dir;
    };
    std::vector<Term> terms_;
    std::vector<std::pair<Coeff, double>> zeroth_;
};

// {f,g}_X = g X(f) - f X(g)
Functional bracket(const Functional& f, const Functional& g, const OperatorExpr& X,
                   const FdPolicy& pol);

// pointwise algebra on functionals
Functional f_const(double v);
Functional f_add(Functional a, Functional b);
Functional f_sub(Functional a, Functional b);
Functional f_mul(Functional a, Functional b);
Functional f_scale(Functional a, double s);
Functional f_shift(Functional a, double s);
Functional f_log(Functional a);

// ---- operator builders (1-based family indices, matching the constraint
// algebra; q and p are the family counts of the configuration) ----

// boundary operators: B_k = sum_i c_i^{k+1} d/dc_i over the finite endpoints
OperatorExpr op_boundary(int k, int n_endpoints);

// A_j, B_j, hatA_j, hatB_j: the Virasoro-reduced first-order operators in the
// free coordinates (a, b, alpha, beta) with alpha/beta-dependent coefficients
OperatorExpr op_A(int j, int q, int p, int n_endpoints);
OperatorExpr op_B(int j, int q, int p, int n_endpoints);
OperatorExpr op_hatA(int j, int q, int p, int n_endpoints);
OperatorExpr op_hatB(int j, int q, int p, int n_endpoints);

// locus versions (alpha = beta = 0 coefficients dropped)
OperatorExpr op_A_locus(int j, int q, int n_endpoints);
OperatorExpr op_B_locus(int j, int p, int n_endpoints);
OperatorExpr op_hatB0(int q, int p, int n_endpoints);

} // namespace nbm
