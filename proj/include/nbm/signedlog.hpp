#pragma once

#include <cmath>
#include <limits>

namespace nbm {

// Sign and natural log of the magnitude of a real number. The universal
// carrier for tau values and determinants, which overflow doubles long
// before desk-scale problem sizes do.
struct SignedLog {
    int sign = 0;      // -1, 0, +1
    double logmag = -std::numeric_limits<double>::infinity();

    static SignedLog zero() { return {}; }

    static SignedLog from_value(double v) {
        if (v == 0.0) return {};
        return {v > 0.0 ? 1 : -1, std::log(std::abs(v))};
    }

    static SignedLog from_log(int sign, double logmag) {
        if (sign == 0) return {};
        return {sign, logmag};
    }

    double value() const { return sign == 0 ? 0.0 : sign * std::exp(logmag); }

    bool is_zero() const { return sign == 0; }

    friend SignedLog operator*(SignedLog a, SignedLog b) {
        if (a.sign == 0 || b.sign == 0) return {};
        return {a.sign * b.sign, a.logmag + b.logmag};
    }

    friend SignedLog operator/(SignedLog a, SignedLog b) {
        if (a.sign == 0) return {};
        return {a.sign * b.sign, a.logmag - b.logmag};
    }
};

} // namespace nbm
