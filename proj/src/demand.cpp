#include "platform_eq/demand.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace peq {

namespace {

constexpr int kMonteCarloChunks = 64;

std::mt19937_64 chunk_engine(std::uint64_t seed, std::uint64_t stream, std::uint64_t chunk) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(chunk)};
    return std::mt19937_64(seq);
}

long chunk_size(long samples, int c) {
    long base = samples / kMonteCarloChunks;
    return base + (c < samples % kMonteCarloChunks ? 1 : 0);
}

}  // namespace

PriceProfile PriceProfile::symmetric(int n, const Vec2& price) {
    PriceProfile pp;
    for (int k = 0; k < 2; ++k) pp.p[k].assign(n, price[k]);
    return pp;
}

MarketState MarketState::uniform(int n) {
    MarketState s;
    for (int k = 0; k < 2; ++k) s.x[k].assign(n + 1, 1.0 / (n + 1));
    return s;
}

double MarketState::sup_distance(const MarketState& o) const {
    double d = 0.0;
    for (int k = 0; k < 2; ++k)
        for (std::size_t i = 0; i < x[k].size(); ++i) d = std::max(d, std::abs(x[k][i] - o.x[k][i]));
    return d;
}

std::vector<double> logit_shares(const std::vector<double>& u, double beta) {
    if (!(beta > 0.0) || !std::isfinite(beta)) throw InvalidArgument("invalid utility: beta must be positive");
    if (u.empty()) throw InvalidArgument("invalid utility: empty choice set");
    double m = -HUGE_VAL;
    for (double v : u) {
        if (!std::isfinite(v)) throw InvalidArgument("invalid utility");
        m = std::max(m, v);
    }
    std::vector<double> out(u.size());
    double sum = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        out[i] = std::exp((u[i] - m) / beta);
        sum += out[i];
    }
    for (double& v : out) v /= sum;
    return out;
}

double omega(double z, double N) { return 1.0 / (std::exp(-z) + N); }

double omega_prime(double z, double N) {
    double d = std::exp(-z) + N;
    return std::exp(-z) / (d * d);
}

MarketState share_map(const MarketParams& params, const PriceProfile& prices, const MarketState& x) {
    const int n = prices.n_platforms();
    MarketState out;
    std::vector<double> u(n + 1);
    for (int k = 0; k < 2; ++k) {
        u[0] = params.u0[k];
        for (int i = 1; i <= n; ++i)
            u[i] = params.phi(k, 0) * x.x[0][i] + params.phi(k, 1) * x.x[1][i] - prices.p[k][i - 1];
        out.x[k] = logit_shares(u, params.beta[k]);
    }
    return out;
}

double share_residual(const MarketParams& params, const PriceProfile& prices, const MarketState& x) {
    return share_map(params, prices, x).sup_distance(x);
}

FixedPointResult share_fixed_point(const MarketParams& params, const PriceProfile& prices,
                                   const FixedPointOptions& opt, const MarketState* start) {
    const int n = prices.n_platforms();
    if (n < 1 || static_cast<int>(prices.p[1].size()) != n) throw InvalidArgument("price profile has no platforms");
    if (!(opt.damping > 0.0 && opt.damping <= 1.0)) throw InvalidArgument("damping must lie in (0, 1]");
    if (!(opt.tol > 0.0)) throw InvalidArgument("tol must be positive");
    for (int k = 0; k < 2; ++k)
        for (double v : prices.p[k])
            if (!std::isfinite(v)) throw InvalidArgument("non-finite price");

    MarketState x = start ? *start : MarketState::uniform(n);
    if (params.phi.isZero()) {
        // The map ignores x, so one application is the fixed point.
        MarketState s = share_map(params, prices, x);
        return {std::move(s), 1, 0.0};
    }
    double r = HUGE_VAL;
    for (long it = 0; it < opt.max_iter; ++it) {
        MarketState s = share_map(params, prices, x);
        r = s.sup_distance(x);
        if (!std::isfinite(r)) break;
        if (r <= opt.tol) {
            // The image is usually a better fixed-point estimate; keep whichever has the smaller residual.
            double rs = share_residual(params, prices, s);
            if (rs <= r) return {std::move(s), it + 1, rs};
            return {std::move(x), it + 1, r};
        }
        for (int k = 0; k < 2; ++k)
            for (std::size_t i = 0; i < x.x[k].size(); ++i)
                x.x[k][i] = (1.0 - opt.damping) * x.x[k][i] + opt.damping * s.x[k][i];
    }
    throw SolverError("share fixed point did not converge", r);
}

MarketState random_interior_state(int n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(0.05, 1.0);
    MarketState s;
    for (int k = 0; k < 2; ++k) {
        s.x[k].resize(n + 1);
        double sum = 0.0;
        for (double& v : s.x[k]) sum += (v = unif(rng));
        for (double& v : s.x[k]) v /= sum;
    }
    return s;
}

MultiStartResult share_fixed_point_multistart(const MarketParams& params, const PriceProfile& prices,
                                              int starts, std::uint64_t seed, const FixedPointOptions& opt,
                                              double dist_tol) {
    MultiStartResult res;
    res.certified = contraction_margin(params) > 0.0;
    std::mt19937_64 seeder(seed);
    for (int s = 0; s < starts; ++s) {
        MarketState x0 = random_interior_state(prices.n_platforms(), seeder());
        MarketState x = share_fixed_point(params, prices, opt, &x0).state;
        bool seen = false;
        for (const auto& q : res.points)
            if (q.sup_distance(x) <= dist_tol) seen = true;
        if (!seen) res.points.push_back(std::move(x));
    }
    res.multiple = res.points.size() > 1;
    return res;
}

double contraction_margin(const MarketParams& params) {
    double m_t = 1.0 / (2.0 * std::min(params.beta[0], params.beta[1]));
    double m_phi = std::max(std::abs(params.phi(0, 0)) + std::abs(params.phi(0, 1)),
                            std::abs(params.phi(1, 0)) + std::abs(params.phi(1, 1)));
    return 1.0 - m_t * m_phi;
}

ShareSensitivities sensitivities(double z, const MarketParams& params, Side side) {
    const double b = params.beta[idx(side)];
    if (!(b > 0.0)) throw InvalidArgument("beta must be positive");
    const double N = params.N();
    if (z < -700.0) return {0.0, 0.0};
    // Written in e^{-z} so that large z does not overflow.
    double em = std::exp(-z);
    double d = em + N;
    ShareSensitivities s;
    s.S = (em + N - 1.0) / (b * d * d);
    s.R = -1.0 / (b * d * d);
    return s;
}

MonteCarloShares monte_carlo_shares(const MarketParams& params, const PriceProfile& prices,
                                    const MarketState& fixed_state, long samples, std::uint64_t seed, Exec exec) {
    if (samples < 1) throw InvalidArgument("samples must be >= 1");
    const int n = prices.n_platforms();
    std::array<std::vector<double>, 2> det;
    for (int k = 0; k < 2; ++k) {
        det[k].resize(n + 1);
        det[k][0] = params.u0[k];
        for (int i = 1; i <= n; ++i)
            det[k][i] = params.phi(k, 0) * fixed_state.x[0][i] + params.phi(k, 1) * fixed_state.x[1][i] -
                        prices.p[k][i - 1];
    }

    // counts[k][chunk][option]
    std::array<std::vector<std::vector<long>>, 2> counts;
    for (int k = 0; k < 2; ++k) counts[k].assign(kMonteCarloChunks, std::vector<long>(n + 1, 0));

    auto run_chunk = [&](int k, int c) {
        auto rng = chunk_engine(seed, static_cast<std::uint64_t>(k), static_cast<std::uint64_t>(c));
        std::extreme_value_distribution<double> gumbel(params.mu[k], params.beta[k]);
        long m = chunk_size(samples, c);
        auto& cnt = counts[k][c];
        for (long s = 0; s < m; ++s) {
            int best = 0;
            double best_v = -HUGE_VAL;
            for (int i = 0; i <= n; ++i) {
                double v = det[k][i] + gumbel(rng);
                if (v > best_v) {
                    best_v = v;
                    best = i;
                }
            }
            ++cnt[best];
        }
    };

    const int tasks = 2 * kMonteCarloChunks;
    if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(dynamic)
        for (int t = 0; t < tasks; ++t) run_chunk(t / kMonteCarloChunks, t % kMonteCarloChunks);
    } else {
        for (int t = 0; t < tasks; ++t) run_chunk(t / kMonteCarloChunks, t % kMonteCarloChunks);
    }

    MonteCarloShares out;
    out.samples = samples;
    for (int k = 0; k < 2; ++k) {
        out.freq[k].assign(n + 1, 0.0);
        out.stderr_[k].assign(n + 1, 0.0);
        for (int i = 0; i <= n; ++i) {
            long total = 0;
            for (int c = 0; c < kMonteCarloChunks; ++c) total += counts[k][c][i];
            double f = static_cast<double>(total) / static_cast<double>(samples);
            out.freq[k][i] = f;
            out.stderr_[k][i] = std::sqrt(f * (1.0 - f) / static_cast<double>(samples));
        }
    }
    return out;
}

MonteCarloMean monte_carlo_emax(int n_options, double mu, double beta, long samples, std::uint64_t seed, Exec exec) {
    if (samples < 2) throw InvalidArgument("samples must be >= 2");
    if (n_options < 1) throw InvalidArgument("need at least one option");
    std::vector<double> sum(kMonteCarloChunks, 0.0), sumsq(kMonteCarloChunks, 0.0);

    auto run_chunk = [&](int c) {
        auto rng = chunk_engine(seed, 2, static_cast<std::uint64_t>(c));
        std::extreme_value_distribution<double> gumbel(mu, beta);
        long m = chunk_size(samples, c);
        double s1 = 0.0, s2 = 0.0;
        for (long s = 0; s < m; ++s) {
            double best = -HUGE_VAL;
            for (int i = 0; i < n_options; ++i) best = std::max(best, gumbel(rng));
            s1 += best;
            s2 += best * best;
        }
        sum[c] = s1;
        sumsq[c] = s2;
    };

    if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(dynamic)
        for (int c = 0; c < kMonteCarloChunks; ++c) run_chunk(c);
    } else {
        for (int c = 0; c < kMonteCarloChunks; ++c) run_chunk(c);
    }

    double s1 = 0.0, s2 = 0.0;
    for (int c = 0; c < kMonteCarloChunks; ++c) {
        s1 += sum[c];
        s2 += sumsq[c];
    }
    const double n = static_cast<double>(samples);
    MonteCarloMean out;
    out.samples = samples;
    out.mean = s1 / n;
    double var = std::max(0.0, (s2 - n * out.mean * out.mean) / (n - 1.0));
    out.stderr_ = std::sqrt(var / n);
    return out;
}

}  // namespace peq
