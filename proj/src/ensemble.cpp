#include "nbm/ensemble.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace nbm {

int EnsembleSpec::total() const {
    return std::accumulate(m.begin(), m.end(), 0);
}

EnsembleSpec validate(const EnsembleSpec& spec) {
    EnsembleSpec s = spec;
    if (s.q < 1 || s.p < 1) throw std::invalid_argument("p and q must be >= 1");
    if ((int)s.m.size() != s.q) throw std::invalid_argument("m must have q entries");
    if ((int)s.n.size() != s.p) throw std::invalid_argument("n must have p entries");
    if ((int)s.a.size() != s.q) throw std::invalid_argument("a must have q entries");
    if ((int)s.b.size() != s.p) throw std::invalid_argument("b must have p entries");
    for (int mi : s.m)
        if (mi < 1) throw std::invalid_argument("multiplicities must be >= 1");
    for (int nj : s.n)
        if (nj < 1) throw std::invalid_argument("multiplicities must be >= 1");

    int N = std::accumulate(s.m.begin(), s.m.end(), 0);
    int Nn = std::accumulate(s.n.begin(), s.n.end(), 0);
    if (N != Nn) throw std::invalid_argument("multiplicity mismatch: sum(m) != sum(n)");
    if (N < 1) throw std::invalid_argument("N must be >= 1");

    if (!(s.t > 0.0 && s.t < 1.0)) throw std::invalid_argument("t must lie in (0,1)");

    for (int i = 0; i + 1 < s.q; ++i)
        if (!(s.a[i] < s.a[i + 1])) throw std::invalid_argument("a not increasing");
    for (int j = 0; j + 1 < s.p; ++j)
        if (!(s.b[j] < s.b[j + 1])) throw std::invalid_argument("b not increasing");

    // Only the first q-1 (resp. p-1) coordinates are free; the last is derived.
    double asum = 0.0, bsum = 0.0;
    for (int i = 0; i + 1 < s.q; ++i) asum += s.a[i];
    for (int j = 0; j + 1 < s.p; ++j) bsum += s.b[j];
    if (std::abs(s.a.back() + asum) > 1e-12 * std::max(1.0, std::abs(asum)))
        throw std::invalid_argument("a does not sum to zero");
    if (std::abs(s.b.back() + bsum) > 1e-12 * std::max(1.0, std::abs(bsum)))
        throw std::invalid_argument("b does not sum to zero");
    s.a.back() = -asum;
    s.b.back() = -bsum;
    if (s.q >= 2 && !(s.a[s.q - 2] < s.a.back()))
        throw std::invalid_argument("a not increasing");
    if (s.p >= 2 && !(s.b[s.p - 2] < s.b.back()))
        throw std::invalid_argument("b not increasing");
    return s;
}

NormalizedProblem normalize(const EnsembleSpec& spec, const IntervalUnion& E) {
    if (!(spec.t > 0.0 && spec.t < 1.0)) throw std::invalid_argument("t must lie in (0,1)");
    double t = spec.t;
    double fa = std::sqrt(2.0 * (1.0 - t) / t);
    double fb = std::sqrt(2.0 * t / (1.0 - t));
    double fE = std::sqrt(2.0 / (t * (1.0 - t)));
    NormalizedProblem out;
    out.a = spec.a;
    out.b = spec.b;
    for (auto& x : out.a) x *= fa;
    for (auto& x : out.b) x *= fb;
    out.E = E.scaled(fE);
    return out;
}

bool Deformation::is_zero() const {
    auto all0 = [](const std::vector<double>& v) {
        for (double x : v)
            if (x != 0.0) return false;
        return true;
    };
    return all0(t1) && all0(t2) && all0(s1) && all0(s2) && all0(alpha) && all0(beta);
}

} // namespace nbm
