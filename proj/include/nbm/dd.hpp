#pragma once

#include <cmath>
#include <cstdlib>
#include <limits>

namespace nbm {

// Double-double scalar: value represented as an unevaluated sum hi + lo with
// |lo| <= ulp(hi)/2, giving roughly 32 significant decimal digits. Based on the
// classic error-free transforms of Dekker and Knuth; products use FMA when the
// compiler provides one.
struct dd {
    double hi = 0.0;
    double lo = 0.0;

    constexpr dd() = default;
    constexpr dd(double h) : hi(h), lo(0.0) {}
    constexpr dd(double h, double l) : hi(h), lo(l) {}

    explicit operator double() const { return hi + lo; }
};

namespace detail {

inline dd two_sum(double a, double b) {
    double s = a + b;
    double bb = s - a;
    double err = (a - (s - bb)) + (b - bb);
    return {s, err};
}

inline dd quick_two_sum(double a, double b) {
    double s = a + b;
    return {s, b - (s - a)};
}

inline dd two_prod(double a, double b) {
    double p = a * b;
    double err = std::fma(a, b, -p);
    return {p, err};
}

} // namespace detail

inline dd operator+(dd a, dd b) {
    dd s = detail::two_sum(a.hi, b.hi);
    double lo = s.lo + a.lo + b.lo;
    return detail::quick_two_sum(s.hi, lo);
}

inline dd operator-(dd a) { return {-a.hi, -a.lo}; }
inline dd operator-(dd a, dd b) { return a + (-b); }

inline dd operator*(dd a, dd b) {
    dd p = detail::two_prod(a.hi, b.hi);
    double lo = p.lo + a.hi * b.lo + a.lo * b.hi;
    return detail::quick_two_sum(p.hi, lo);
}

inline dd operator/(dd a, dd b) {
    double q1 = a.hi / b.hi;
    dd r = a - dd(q1) * b;
    double q2 = r.hi / b.hi;
    r = r - dd(q2) * b;
    double q3 = r.hi / b.hi;
    dd q = detail::quick_two_sum(q1, q2);
    return q + dd(q3);
}

inline dd& operator+=(dd& a, dd b) { a = a + b; return a; }
inline dd& operator-=(dd& a, dd b) { a = a - b; return a; }
inline dd& operator*=(dd& a, dd b) { a = a * b; return a; }
inline dd& operator/=(dd& a, dd b) { a = a / b; return a; }

inline bool operator<(dd a, dd b) { return a.hi < b.hi || (a.hi == b.hi && a.lo < b.lo); }
inline bool operator>(dd a, dd b) { return b < a; }
inline bool operator==(dd a, dd b) { return a.hi == b.hi && a.lo == b.lo; }
inline bool operator!=(dd a, dd b) { return !(a == b); }

inline dd abs(dd a) { return a.hi < 0.0 || (a.hi == 0.0 && a.lo < 0.0) ? -a : a; }

inline dd sqrt(dd a) {
    if (a.hi == 0.0 && a.lo == 0.0) return {};
    double x = std::sqrt(a.hi);
    // one Newton step in dd
    dd xx(x);
    return (xx + a / xx) * dd(0.5);
}

inline dd exp(dd a) {
    if (a.hi < -746.0) return {};
    if (a.hi > 710.0) return {std::numeric_limits<double>::infinity(), 0.0};
    static const dd ln2(0.6931471805599453, 2.3190468138462996e-17);
    double n = std::round(a.hi / ln2.hi);
    dd r = a - ln2 * dd(n);
    dd sum(1.0), term(1.0);
    for (int i = 1; i < 40; ++i) {
        term = term * r / dd(double(i));
        sum += term;
        if (std::abs(term.hi) < 1e-35 * std::abs(sum.hi)) break;
    }
    sum.hi = std::scalbn(sum.hi, (int)n);
    sum.lo = std::scalbn(sum.lo, (int)n);
    return sum;
}

inline dd log(dd a) {
    // one Newton step on top of the double log; the residual is O(eps) so the
    // correction factor only needs double accuracy in its own exp.
    double l = std::log(a.hi);
    dd r = a * exp(dd(-l)) - dd(1.0);
    return dd(l) + r - r * r * dd(0.5);
}

} // namespace nbm
