#pragma once

#include <boost/multiprecision/cpp_int.hpp>

namespace nbm {

using BigInt = boost::multiprecision::cpp_int;

BigInt binomial(long n, long k);

// The elimination census for the constraint system: M equations before
// differentiation, their count after K rounds of differentiation, and the
// bound on the number of unknown auxiliary derivatives.
struct Census {
    int p = 0, q = 0, K = 0;
    long M = 0;                  // (p+q)(p+q-1)/2
    BigInt equations;            // M * C(p+q+K-1, K)
    BigInt unknown_bound;        // (p+q-2) * C(p+q+K+1, K+2)
    bool balanced = false;       // equations > unknown_bound
};

Census census(int p, int q, int K);

// Smallest positive K with (x^2-3x+4)K^2 + (-x^2+3x+4)K - 2x(x^2-2x-1) > 0,
// by direct integer scan (exact arithmetic).
int kstar(int x);

} // namespace nbm
