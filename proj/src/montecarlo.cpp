#include "nbm/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <atomic>
#include <random>
#include <stdexcept>
#include <thread>

#include "nbm/linalg.hpp"

namespace nbm {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

struct Basis {
    std::vector<int> fam, pow;
    std::vector<double> tilt; // family coordinates
};

// log |w| and sign of the confluent biorthogonal weight at x
struct WeightEval {
    const Basis* psi;
    const Basis* phi;
    int N;

    std::pair<double, int> operator()(const std::vector<double>& x) const {
        Matrix P(N, N), Q(N, N);
        for (int i = 0; i < N; ++i)
            for (int j = 0; j < N; ++j) {
                P(i, j) = std::pow(x[j], psi->pow[i]) * std::exp(psi->tilt[psi->fam[i]] * x[j]);
                Q(i, j) = std::pow(x[j], phi->pow[i]) * std::exp(phi->tilt[phi->fam[i]] * x[j]);
            }
        auto dp = log_det(P).det;
        auto dq = log_det(Q).det;
        if (dp.is_zero() || dq.is_zero()) return {-std::numeric_limits<double>::infinity(), 0};
        double g = 0.0;
        for (double xi : x) g -= 0.5 * xi * xi;
        return {g + dp.logmag + dq.logmag, dp.sign * dq.sign};
    }
};

struct ChainResult {
    std::vector<signed char> in_set; // sign * indicator per kept sweep
    std::vector<signed char> sign;
    long flips = 0;
    double acceptance = 0.0;
    bool tuned_ok = true;
    double sigma_final = 0.0;
};

ChainResult run_chain(const Basis& psi, const Basis& phi, int N, const IntervalUnion* E,
                      const ChainConfig& cfg, int chain_index) {
    std::mt19937_64 rng(splitmix64(cfg.seed ^ (0x517cc1b727220a95ULL * (chain_index + 1))));
    std::normal_distribution<double> normal;
    std::uniform_real_distribution<double> unif;

    WeightEval w{&psi, &phi, N};

    double spread = 1.0;
    for (double t : psi.tilt) spread = std::max(spread, std::abs(t));
    for (double t : phi.tilt) spread = std::max(spread, std::abs(t));
    std::vector<double> x(N);
    for (int i = 0; i < N; ++i)
        x[i] = (N == 1 ? 0.0 : -spread + 2.0 * spread * i / (N - 1.0)) + 0.1 * (chain_index + 1);

    auto [logw, sgn] = w(x);
    if (sgn == 0) {
        for (int i = 0; i < N; ++i) x[i] += 0.37 * (i + 1);
        std::tie(logw, sgn) = w(x);
    }

    ChainResult out;
    out.in_set.reserve(cfg.steps - cfg.burnin);
    out.sign.reserve(cfg.steps - cfg.burnin);

    double sigma = cfg.proposal_sigma;
    long accepted = 0, proposed = 0;
    long tune_acc = 0, tune_prop = 0;
    int prev_sign = sgn;

    std::vector<double> xp = x;
    for (long sweep = 0; sweep < cfg.steps; ++sweep) {
        for (int i = 0; i < N; ++i) {
            xp = x;
            xp[i] = x[i] + sigma * normal(rng);
            auto [lw, sg] = w(xp);
            ++proposed;
            ++tune_prop;
            if (sg != 0 && std::log(unif(rng) + 1e-300) < lw - logw) {
                x = xp;
                logw = lw;
                sgn = sg;
                ++accepted;
                ++tune_acc;
            }
        }
        if (sweep < cfg.burnin) {
            if (tune_prop >= 200 * N) {
                double rate = double(tune_acc) / tune_prop;
                sigma *= std::exp(1.2 * (rate - 0.3));
                sigma = std::min(10.0, std::max(1e-3, sigma));
                tune_acc = tune_prop = 0;
            }
            continue;
        }
        if (sgn != prev_sign) ++out.flips;
        prev_sign = sgn;
        bool inside = true;
        if (E)
            for (double xi : x)
                if (!E->contains(xi)) {
                    inside = false;
                    break;
                }
        out.sign.push_back((signed char)sgn);
        out.in_set.push_back((signed char)(inside ? sgn : 0));
    }
    out.acceptance = proposed ? double(accepted) / proposed : 0.0;
    out.sigma_final = sigma;
    out.tuned_ok = out.acceptance >= 0.05 && out.acceptance <= 0.8;
    return out;
}

Basis make_basis(const std::vector<int>& mult, const std::vector<double>& tilt) {
    Basis b;
    b.tilt = tilt;
    for (std::size_t f = 0; f < mult.size(); ++f)
        for (int d = 0; d < mult[f]; ++d) {
            b.fam.push_back((int)f);
            b.pow.push_back(d);
        }
    return b;
}

} // namespace

std::vector<std::vector<double>> sample_chain(const EnsembleSpec& spec, const ChainConfig& cfg,
                                              int chain_index) {
    EnsembleSpec v = validate(spec);
    auto norm = normalize(v, IntervalUnion::whole_line());
    Basis psi = make_basis(v.m, norm.a);
    Basis phi = make_basis(v.n, norm.b);
    const int N = v.total();

    // re-run the chain, storing states; mirrors run_chain's path exactly
    std::mt19937_64 rng(splitmix64(cfg.seed ^ (0x517cc1b727220a95ULL * (chain_index + 1))));
    std::normal_distribution<double> normal;
    std::uniform_real_distribution<double> unif;
    WeightEval w{&psi, &phi, N};

    double spread = 1.0;
    for (double t : psi.tilt) spread = std::max(spread, std::abs(t));
    for (double t : phi.tilt) spread = std::max(spread, std::abs(t));
    std::vector<double> x(N);
    for (int i = 0; i < N; ++i)
        x[i] = (N == 1 ? 0.0 : -spread + 2.0 * spread * i / (N - 1.0)) + 0.1 * (chain_index + 1);
    auto [logw, sgn] = w(x);
    if (sgn == 0) {
        for (int i = 0; i < N; ++i) x[i] += 0.37 * (i + 1);
        std::tie(logw, sgn) = w(x);
    }

    std::vector<std::vector<double>> out;
    out.reserve(cfg.steps - cfg.burnin);
    double sigma = cfg.proposal_sigma;
    long tune_acc = 0, tune_prop = 0;
    std::vector<double> xp = x;
    for (long sweep = 0; sweep < cfg.steps; ++sweep) {
        for (int i = 0; i < N; ++i) {
            xp = x;
            xp[i] = x[i] + sigma * normal(rng);
            auto [lw, sg] = w(xp);
            ++tune_prop;
            if (sg != 0 && std::log(unif(rng) + 1e-300) < lw - logw) {
                x = xp;
                logw = lw;
                sgn = sg;
                ++tune_acc;
            }
        }
        if (sweep < cfg.burnin) {
            if (tune_prop >= 200 * N) {
                double rate = double(tune_acc) / tune_prop;
                sigma *= std::exp(1.2 * (rate - 0.3));
                sigma = std::min(10.0, std::max(1e-3, sigma));
                tune_acc = tune_prop = 0;
            }
            continue;
        }
        out.push_back(x);
    }
    return out;
}

Estimate estimate_probability(const EnsembleSpec& spec, const IntervalUnion& E,
                              const ChainConfig& cfg) {
    if (cfg.chains < 2) throw std::invalid_argument("need at least 2 chains");
    if (cfg.steps <= cfg.burnin) throw std::invalid_argument("steps must exceed burn-in");
    EnsembleSpec v = validate(spec);
    auto norm = normalize(v, E);
    Basis psi = make_basis(v.m, norm.a);
    Basis phi = make_basis(v.n, norm.b);
    const int N = v.total();

    std::vector<ChainResult> results(cfg.chains);
    int workers = std::max(1, std::min(cfg.threads, cfg.chains));
    if (workers == 1) {
        for (int c = 0; c < cfg.chains; ++c)
            results[c] = run_chain(psi, phi, N, &norm.E, cfg, c);
    } else {
        std::vector<std::thread> pool;
        std::atomic_int next{0};
        for (int t = 0; t < workers; ++t)
            pool.emplace_back([&] {
                for (int c = next.fetch_add(1); c < cfg.chains; c = next.fetch_add(1))
                    results[c] = run_chain(psi, phi, N, &norm.E, cfg, c);
            });
        for (auto& th : pool) th.join();
    }

    Estimate est;
    long kept = 0;
    double flips = 0.0;
    double numer = 0.0, denom = 0.0, acc = 0.0;
    for (const auto& r : results) {
        kept += (long)r.in_set.size();
        flips += r.flips;
        acc += r.acceptance;
        for (signed char s : r.in_set) numer += s;
        for (signed char s : r.sign) denom += s;
        if (!r.tuned_ok) est.healthy = false;
    }
    est.total_samples = kept;
    est.sign_flips = (long)flips;
    est.acceptance_rate = acc / cfg.chains;
    if (denom == 0.0) throw NumericalGuardError("all weight signs cancelled");
    est.p_hat = numer / denom;

    // batch means over the concatenated (per-chain) indicator series
    const int batches_per_chain = std::max(1, 50 / cfg.chains);
    std::vector<double> bm;
    for (const auto& r : results) {
        long n = (long)r.in_set.size();
        long bs = n / batches_per_chain;
        for (int b = 0; b < batches_per_chain; ++b) {
            double s = 0.0;
            for (long i = b * bs; i < (b + 1) * bs; ++i) s += r.in_set[i];
            bm.push_back(s / bs);
        }
    }
    double mean = 0.0;
    for (double b : bm) mean += b;
    mean /= bm.size();
    double var_bm = 0.0;
    for (double b : bm) var_bm += (b - mean) * (b - mean);
    var_bm /= (bm.size() - 1);
    est.std_error = std::sqrt(var_bm / bm.size());

    // sample variance for the effective sample size
    double svar = 0.0, smean = numer / kept;
    for (const auto& r : results)
        for (signed char s : r.in_set) svar += (s - smean) * (s - smean);
    svar /= (kept - 1);
    double se2 = est.std_error * est.std_error;
    est.ess = se2 > 0.0 ? std::min((double)kept, svar / se2) : (double)kept;
    if (est.ess < 100.0) throw NumericalGuardError("effective sample size below budget");

    // split-chain diagnostic on the indicator series
    {
        std::vector<std::pair<double, double>> halves; // mean, var
        for (const auto& r : results) {
            long n = (long)r.in_set.size();
            long h = n / 2;
            for (int part = 0; part < 2; ++part) {
                double m = 0.0;
                for (long i = part * h; i < (part + 1) * h; ++i) m += r.in_set[i];
                m /= h;
                double vv = 0.0;
                for (long i = part * h; i < (part + 1) * h; ++i)
                    vv += (r.in_set[i] - m) * (r.in_set[i] - m);
                vv /= (h - 1);
                halves.push_back({m, vv});
            }
        }
        double W = 0.0, gm = 0.0;
        for (auto& hv : halves) {
            W += hv.second;
            gm += hv.first;
        }
        W /= halves.size();
        gm /= halves.size();
        double Bv = 0.0;
        for (auto& hv : halves) Bv += (hv.first - gm) * (hv.first - gm);
        long h = (long)results[0].in_set.size() / 2;
        Bv = Bv * h / (halves.size() - 1);
        double varp = (double(h - 1) / h) * W + Bv / h;
        est.split_rhat = W > 0.0 ? std::sqrt(varp / W) : 1.0;
    }

    if (est.sign_flips > 0 || est.split_rhat > 1.05) est.healthy = false;
    return est;
}

} // namespace nbm
