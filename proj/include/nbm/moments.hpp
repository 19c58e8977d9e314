#pragma once

#include <vector>

#include "nbm/dd.hpp"
#include "nbm/interval.hpp"
#include "nbm/signedlog.hpp"

namespace nbm {

// Parameters of the tilted Gaussian moment mu_k = int_E x^k e^{-gamma x^2/2 + c x} dx.
// gamma must be positive whenever E is unbounded; on bounded E any gamma is
// admissible (gamma near zero falls back to quadrature).
struct MomentParams {
    double c = 0.0;
    double gamma = 1.0;
    IntervalUnion E = IntervalUnion::whole_line();
};

// Scaled moment sequence nu_k = e^{-c^2/(2 gamma)} mu_k, k = 0..kmax, together
// with the common log factor that was pulled out. The scaled values stay
// polynomially bounded, so the recurrence never sees the e^{c^2/2} growth.
struct ScaledMoments {
    std::vector<double> nu;
    double log_scale = 0.0; // mu_k = nu_k * exp(log_scale)
};

struct ScaledMomentsDD {
    std::vector<dd> nu;
    double log_scale = 0.0;
};

// Recurrence stability budget: plain double up to dd_threshold, double-double
// accumulation beyond it, adaptive quadrature past quadrature_threshold.
struct MomentBudget {
    int dd_threshold = 64;
    int quadrature_threshold = 200;
};

// Full-range moments at gamma = 1 via the derivative recurrence
// mu_{k+1} = c mu_k + k mu_{k-1}, mu_0 = sqrt(2 pi) e^{c^2/2}.
double mu_full_range(int k, double c);
SignedLog mu_full_range_log(int k, double c);

// General tilted moment over an interval union. Throws std::domain_error when
// the integral diverges (gamma <= 0 on an unbounded set).
double mu(int k, const MomentParams& params, const MomentBudget& budget = {});
SignedLog mu_log(int k, const MomentParams& params, const MomentBudget& budget = {});

ScaledMoments moments_scaled(int kmax, const MomentParams& params,
                             const MomentBudget& budget = {});
ScaledMomentsDD moments_scaled_dd(int kmax, const MomentParams& params);

// erf(x2) - erf(x1) without cancellation for same-sign arguments.
double erf_diff(double x1, double x2);

} // namespace nbm
