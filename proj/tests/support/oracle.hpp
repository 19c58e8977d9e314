#pragma once

// Test-only oracles, deliberately independent of the library's own
// integration paths: a fixed-order Gauss-Legendre rule built from scratch and
// brute-force determinant expansion.

#include <cmath>
#include <functional>
#include <vector>

#include "nbm/interval.hpp"

namespace oracle {

struct GLRule {
    std::vector<double> x, w;
};

// Nodes/weights on [-1,1] via bisection-free Newton on the Legendre recurrence.
inline GLRule gauss_legendre(int n) {
    GLRule r;
    r.x.resize(n);
    r.w.resize(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double z = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 200; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
            }
            pp = n * (z * p0 - p1) / (z * z - 1.0);
            double dz = p0 / pp;
            z -= dz;
            if (std::abs(dz) < 1e-16) break;
        }
        r.x[i] = -z;
        r.x[n - 1 - i] = z;
        r.w[i] = r.w[n - 1 - i] = 2.0 / ((1.0 - z * z) * pp * pp);
    }
    return r;
}

// integral of f over [lo,hi] with `panels` equal panels of a 64-node rule
inline double integrate(const std::function<double(double)>& f, double lo, double hi,
                        int panels = 8, int order = 64) {
    static GLRule cached = gauss_legendre(64);
    GLRule local;
    const GLRule& r = (order == 64) ? cached : (local = gauss_legendre(order), local);
    double total = 0.0;
    for (int p = 0; p < panels; ++p) {
        double a = lo + (hi - lo) * p / panels;
        double b = lo + (hi - lo) * (p + 1) / panels;
        double mid = 0.5 * (a + b), half = 0.5 * (b - a);
        for (std::size_t i = 0; i < r.x.size(); ++i) total += half * r.w[i] * f(mid + half * r.x[i]);
    }
    return total;
}

// integral of x^k e^{-gamma x^2/2 + c x} over an interval union, truncating
// infinite ends far outside the effective support
inline double tilted_moment(int k, double c, double gamma, const nbm::IntervalUnion& E) {
    double total = 0.0;
    double mean = gamma > 0.0 ? c / gamma : 0.0;
    double radius = gamma > 0.0 ? (12.0 + std::sqrt(4.0 * k + 1.0)) / std::sqrt(gamma) : 50.0;
    for (const auto& comp : E.components()) {
        double lo = std::isinf(comp.lo) ? mean - radius : comp.lo;
        double hi = std::isinf(comp.hi) ? mean + radius : comp.hi;
        if (!(lo < hi)) continue;
        total += integrate(
            [&](double x) { return std::pow(x, k) * std::exp(-0.5 * gamma * x * x + c * x); },
            lo, hi, 16);
    }
    return total;
}

// determinant by cofactor expansion, exponential cost, fine for n <= 6
inline double cofactor_det(const std::vector<std::vector<double>>& m) {
    std::size_t n = m.size();
    if (n == 0) return 1.0;
    if (n == 1) return m[0][0];
    double det = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        std::vector<std::vector<double>> minor(n - 1, std::vector<double>(n - 1));
        for (std::size_t i = 1; i < n; ++i) {
            std::size_t cc = 0;
            for (std::size_t jj = 0; jj < n; ++jj) {
                if (jj == j) continue;
                minor[i - 1][cc++] = m[i][jj];
            }
        }
        det += ((j % 2 == 0) ? 1.0 : -1.0) * m[0][j] * cofactor_det(minor);
    }
    return det;
}

} // namespace oracle
