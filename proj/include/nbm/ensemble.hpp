#pragma once

#include <vector>

#include "nbm/interval.hpp"

namespace nbm {

// The diffusion problem: N non-intersecting Brownian motions on [0,1], with
// m_i of them leaving from a_i at time 0 (i = 1..q) and n_j arriving at b_j at
// time 1 (j = 1..p), observed at an intermediate time t in (0,1). Coinciding
// start or end points are always expressed through the multiplicities, never
// by duplicating coordinates.
struct EnsembleSpec {
    int q = 0;
    int p = 0;
    std::vector<int> m;    // q multiplicities, sum = N
    std::vector<int> n;    // p multiplicities, sum = N
    std::vector<double> a; // q starting coordinates, increasing, sum 0
    std::vector<double> b; // p ending coordinates, increasing, sum 0
    double t = 0.5;

    int total() const;
};

// Checks all invariants and re-derives the last coordinate so that the sum-zero
// constraints hold exactly: a_q = -sum_{i<q} a_i and b_p = -sum_{j<p} b_j.
// Throws std::invalid_argument describing the first violated invariant.
EnsembleSpec validate(const EnsembleSpec& spec);

// Normalized data: the space-time change of variables that removes t from the
// problem. a~ = sqrt(2(1-t)/t) a, b~ = sqrt(2t/(1-t)) b, E~ = sqrt(2/(t(1-t))) E.
// The products a~_i b~_j = 2 a_i b_j are invariant under the map.
struct NormalizedProblem {
    std::vector<double> a;
    std::vector<double> b;
    IntervalUnion E;
};

NormalizedProblem normalize(const EnsembleSpec& spec, const IntervalUnion& E);

// Finite deformation of the weights: one (t1, t2) pair per ending family, one
// (s1, s2) pair per starting family, and the quadratic tilts alpha (per
// starting family) and beta (per ending family). Only the first and second
// time variables of each family are carried; higher ones stay at zero.
struct Deformation {
    std::vector<double> t1, t2; // size p
    std::vector<double> s1, s2; // size q
    std::vector<double> alpha;  // size q, sum 0 when the linear conditions hold
    std::vector<double> beta;   // size p, sum 0 likewise

    static Deformation zero(int q, int p) {
        Deformation d;
        d.t1.assign(p, 0.0);
        d.t2.assign(p, 0.0);
        d.s1.assign(q, 0.0);
        d.s2.assign(q, 0.0);
        d.alpha.assign(q, 0.0);
        d.beta.assign(p, 0.0);
        return d;
    }

    bool is_zero() const;
};

} // namespace nbm
