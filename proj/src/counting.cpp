#include "nbm/counting.hpp"

#include <stdexcept>

namespace nbm {

BigInt binomial(long n, long k) {
    if (k < 0 || k > n) return 0;
    if (k > n - k) k = n - k;
    BigInt v = 1;
    for (long i = 1; i <= k; ++i) {
        v *= (n - k + i);
        v /= i;
    }
    return v;
}

Census census(int p, int q, int K) {
    if (p < 1 || q < 1) throw std::invalid_argument("p and q must be >= 1");
    if (K < 0) throw std::invalid_argument("K must be >= 0");
    Census c;
    c.p = p;
    c.q = q;
    c.K = K;
    long x = p + q;
    c.M = x * (x - 1) / 2;
    c.equations = BigInt(c.M) * binomial(x + K - 1, K);
    c.unknown_bound = BigInt(x - 2) * binomial(x + K + 1, K + 2);
    c.balanced = c.equations > c.unknown_bound;
    return c;
}

int kstar(int x) {
    if (x < 2) throw std::invalid_argument("x = p + q must be >= 2");
    BigInt X = x;
    BigInt c2 = X * X - 3 * X + 4;
    BigInt c1 = -X * X + 3 * X + 4;
    BigInt c0 = -2 * X * (X * X - 2 * X - 1);
    for (int K = 1;; ++K) {
        BigInt Kb = K;
        if (c2 * Kb * Kb + c1 * Kb + c0 > 0) return K;
    }
}

} // namespace nbm
