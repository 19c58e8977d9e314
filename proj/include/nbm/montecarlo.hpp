#pragma once

#include <cstdint>
#include <vector>

#include "nbm/ensemble.hpp"
#include "nbm/tau.hpp"

namespace nbm {

// Random-walk Metropolis configuration. `steps` counts sweeps (one proposal
// per coordinate per sweep). Chains get independent streams derived from the
// seed and are reduced in fixed order, so runs are reproducible bit for bit.
struct ChainConfig {
    int chains = 4;
    long steps = 200000;
    long burnin = 20000;
    double proposal_sigma = 0.8; // starting value, auto-tuned during burn-in
    std::uint64_t seed = 20110422;
    int threads = 1;
};

struct Estimate {
    double p_hat = 0.0;
    double std_error = 0.0;
    double ess = 0.0;
    long sign_flips = 0;
    double acceptance_rate = 0.0;
    double split_rhat = 0.0;
    long total_samples = 0;
    bool healthy = true; // no sign flips, tuned acceptance, rhat in budget
};

// Draws from the density proportional to
// |prod e^{-x_i^2/2} det[psi~_i(x_j)] det[phi~_i(x_j)]| on R^N in the
// normalized coordinates, tracking the weight sign (expected constant).
// Returns the chain of sign * indicator(all x in E~) with diagnostics folded
// into `estimate_probability`.
Estimate estimate_probability(const EnsembleSpec& spec, const IntervalUnion& E,
                              const ChainConfig& cfg);

// Raw samples from one chain (for distribution-level tests).
std::vector<std::vector<double>> sample_chain(const EnsembleSpec& spec, const ChainConfig& cfg,
                                              int chain_index);

} // namespace nbm
