#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "platform_eq/model.hpp"
#include "platform_eq/parallel.hpp"

namespace peq {

// p[k][i] is the price platform i+1 charges side k; the outside option is free.
struct PriceProfile {
    std::array<std::vector<double>, 2> p;

    static PriceProfile symmetric(int n, const Vec2& price);
    int n_platforms() const { return static_cast<int>(p[0].size()); }
};

// x[k][0] is the outside-option mass, x[k][i] the share of platform i.
struct MarketState {
    std::array<std::vector<double>, 2> x;

    static MarketState uniform(int n);
    int n_platforms() const { return static_cast<int>(x[0].size()) - 1; }
    double sup_distance(const MarketState& o) const;
};

struct FixedPointOptions {
    double damping = 0.5;
    double tol = 1e-12;
    long max_iter = 100000;
};

struct FixedPointResult {
    MarketState state;
    long iterations = 0;
    double residual = 0.0;
};

struct MultiStartResult {
    std::vector<MarketState> points;
    bool multiple = false;
    bool certified = false;  // contraction margin > 0
};

struct ShareSensitivities {
    double S = 0.0;  // d x^i / d u^i
    double R = 0.0;  // d x^i / d u^j, j != i
};

struct MonteCarloShares {
    std::array<std::vector<double>, 2> freq;
    std::array<std::vector<double>, 2> stderr_;
    long samples = 0;
};

struct MonteCarloMean {
    double mean = 0.0;
    double stderr_ = 0.0;
    long samples = 0;
};

// Softmax of u / beta with max subtraction.
std::vector<double> logit_shares(const std::vector<double>& u, double beta);

// Per-platform share at a symmetric profile, 1 / (e^{-z} + N).
double omega(double z, double N);
double omega_prime(double z, double N);

// One application of the stage-2 share map.
MarketState share_map(const MarketParams& params, const PriceProfile& prices, const MarketState& x);
double share_residual(const MarketParams& params, const PriceProfile& prices, const MarketState& x);

FixedPointResult share_fixed_point(const MarketParams& params, const PriceProfile& prices,
                                   const FixedPointOptions& opt = {}, const MarketState* start = nullptr);

// Runs from `starts` random interior points and clusters the limits.
MultiStartResult share_fixed_point_multistart(const MarketParams& params, const PriceProfile& prices,
                                              int starts, std::uint64_t seed,
                                              const FixedPointOptions& opt = {}, double dist_tol = 1e-9);

MarketState random_interior_state(int n, std::uint64_t seed);

double contraction_margin(const MarketParams& params);

ShareSensitivities sensitivities(double z, const MarketParams& params, Side side);

// Frequencies of argmax over Gumbel draws with the externality term frozen at `fixed_state`.
MonteCarloShares monte_carlo_shares(const MarketParams& params, const PriceProfile& prices,
                                    const MarketState& fixed_state, long samples, std::uint64_t seed,
                                    Exec exec = Exec::Parallel);

// Mean of the maximum of n_options Gumbel(mu, beta) draws.
MonteCarloMean monte_carlo_emax(int n_options, double mu, double beta, long samples, std::uint64_t seed,
                                Exec exec = Exec::Parallel);

}  // namespace peq
