#include "nbm/interval.hpp"

#include <algorithm>
#include <cmath>

namespace nbm {

IntervalUnion::IntervalUnion(std::vector<Component> comps) : comps_(std::move(comps)) {
    std::sort(comps_.begin(), comps_.end(),
              [](const Component& a, const Component& b) { return a.lo < b.lo; });
    double prev_hi = -kInf;
    bool first = true;
    for (const auto& c : comps_) {
        if (std::isnan(c.lo) || std::isnan(c.hi))
            throw std::invalid_argument("interval endpoint is NaN");
        if (!(c.lo < c.hi))
            throw std::invalid_argument("interval endpoints not increasing");
        if (c.lo == kInf || c.hi == -kInf)
            throw std::invalid_argument("interval endpoint has wrong infinity");
        if (!first && !(c.lo > prev_hi))
            throw std::invalid_argument("interval components touch or overlap");
        prev_hi = c.hi;
        first = false;
    }
}

bool IntervalUnion::contains(double x) const {
    for (const auto& c : comps_)
        if (x >= c.lo && x <= c.hi) return true;
    return false;
}

std::vector<double> IntervalUnion::finite_boundaries() const {
    std::vector<double> out;
    for (const auto& c : comps_) {
        if (std::isfinite(c.lo)) out.push_back(c.lo);
        if (std::isfinite(c.hi)) out.push_back(c.hi);
    }
    return out;
}

IntervalUnion IntervalUnion::with_boundary(std::size_t k, double value) const {
    auto comps = comps_;
    std::size_t idx = 0;
    for (auto& c : comps) {
        if (std::isfinite(c.lo)) {
            if (idx == k) {
                c.lo = value;
                return IntervalUnion(comps);
            }
            ++idx;
        }
        if (std::isfinite(c.hi)) {
            if (idx == k) {
                c.hi = value;
                return IntervalUnion(comps);
            }
            ++idx;
        }
    }
    throw std::out_of_range("boundary index out of range");
}

IntervalUnion IntervalUnion::scaled(double factor) const {
    if (!(factor > 0.0)) throw std::invalid_argument("scale factor must be positive");
    auto comps = comps_;
    for (auto& c : comps) {
        c.lo *= factor;
        c.hi *= factor;
    }
    return IntervalUnion(comps);
}

IntervalUnion IntervalUnion::reflected() const {
    std::vector<Component> comps;
    comps.reserve(comps_.size());
    for (const auto& c : comps_) comps.push_back({-c.hi, -c.lo});
    return IntervalUnion(comps);
}

} // namespace nbm
