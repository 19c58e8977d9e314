#pragma once

#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace nbm {

constexpr double kInf = std::numeric_limits<double>::infinity();

// A finite union of disjoint closed intervals E = [c1,c2] u [c3,c4] u ...,
// where the leftmost lower endpoint may be -inf and the rightmost upper
// endpoint +inf. Components are kept sorted; input order does not matter.
class IntervalUnion {
public:
    struct Component {
        double lo;
        double hi;
    };

    IntervalUnion() = default;

    explicit IntervalUnion(std::vector<Component> comps);

    static IntervalUnion whole_line() { return IntervalUnion({{-kInf, kInf}}); }

    static IntervalUnion segment(double lo, double hi) { return IntervalUnion({{lo, hi}}); }

    const std::vector<Component>& components() const { return comps_; }
    std::size_t size() const { return comps_.size(); }
    bool empty() const { return comps_.empty(); }

    bool left_infinite() const { return !comps_.empty() && comps_.front().lo == -kInf; }
    bool right_infinite() const { return !comps_.empty() && comps_.back().hi == kInf; }
    bool bounded() const { return !left_infinite() && !right_infinite(); }
    bool is_whole_line() const {
        return comps_.size() == 1 && left_infinite() && right_infinite();
    }

    bool contains(double x) const;

    // Finite endpoints c_1 < c_2 < ... in increasing order (infinite ends skipped).
    std::vector<double> finite_boundaries() const;

    // Replace the k-th finite boundary (indexing into finite_boundaries()) by value.
    IntervalUnion with_boundary(std::size_t k, double value) const;

    // Scale every endpoint by factor > 0.
    IntervalUnion scaled(double factor) const;

    // Reflection x -> -x (components reversed).
    IntervalUnion reflected() const;

private:
    std::vector<Component> comps_;
};

} // namespace nbm
