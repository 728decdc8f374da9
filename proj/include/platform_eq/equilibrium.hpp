#pragma once

#include <string>

#include "platform_eq/model.hpp"

namespace peq {

struct ZPoint {
    double z_b = 0.0;
    double z_s = 0.0;

    Vec2 vec() const { return {z_b, z_s}; }
    static ZPoint from(const Vec2& v) { return {v[0], v[1]}; }
    double operator[](int k) const { return k == 0 ? z_b : z_s; }
};

enum class Regime { CNE, CE };
const char* regime_name(Regime r);

struct SymmetricEquilibrium {
    Regime regime = Regime::CNE;
    ZPoint z;
    Vec2 prices = Vec2::Zero();     // H(z) Omega(z)
    Vec2 price_alt = Vec2::Zero();  // Phi Omega(z) - beta z - u0
    Vec2 shares = Vec2::Zero();
    Vec2 participation = Vec2::Zero();
    Vec2 profit_per_side = Vec2::Zero();
    double total_profit = 0.0;  // per platform
    Vec2 consumer_surplus = Vec2::Zero();
    double foc_residual = 0.0;
    bool existence_warning = false;
    int iterations = 0;

    double aggregate_profit(double N) const { return N * total_profit; }
};

struct RegimeComparison {
    SymmetricEquilibrium cne;
    SymmetricEquilibrium ce;
    Vec2 dz = Vec2::Zero();               // z* - z^C
    Vec2 d_participation = Vec2::Zero();  // N x* - N x^C
    Vec2 d_price = Vec2::Zero();          // p* - p^C
    Vec2 externality_term = Vec2::Zero();  // Phi (x^C - x*)
    Vec2 heterogeneity_term = Vec2::Zero();  // beta (z* - z^C)
};

struct SolveOptions {
    double tol = 1e-10;
    double bracket = 60.0;
};

Vec2 omega_vec(const ZPoint& z, double N);

// Pricing matrix of the competitive regime and the FOC residual (Phi - H) Omega - u0 - beta z.
Mat2 h_matrix(const ZPoint& z, const MarketParams& params);
Vec2 cne_foc_residual(const ZPoint& z, const MarketParams& params);

Mat2 hc_matrix(const ZPoint& z, const MarketParams& params);
Vec2 ce_foc_residual(const ZPoint& z, const MarketParams& params);

// One-side FOCs when the cross externalities are zero, and their z-derivatives.
double decoupled_m(double z, double beta, double phi_kk, double N, double u0);
double decoupled_dm(double z, double beta, double phi_kk, double N);
double decoupled_mc(double z, double beta, double phi_kk, double N, double u0);
double decoupled_dmc(double z, double beta, double phi_kk, double N);

// Root of a decreasing-at-infinity scalar FOC by bracketed bisection plus one Newton polish.
double solve_decoupled(Regime regime, double beta, double phi_kk, double N, double u0, const SolveOptions& opt = {});

SymmetricEquilibrium solve_cne(const MarketParams& params, const SolveOptions& opt = {});
SymmetricEquilibrium solve_ce(const MarketParams& params, const SolveOptions& opt = {});
SymmetricEquilibrium solve(Regime regime, const MarketParams& params, const SolveOptions& opt = {});

// Fills every output field from z; used by both solvers.
SymmetricEquilibrium assemble(Regime regime, const ZPoint& z, const MarketParams& params);

Vec2 consumer_surplus(const Vec2& prices, const Vec2& shares, const MarketParams& params);

RegimeComparison compare_regimes(const MarketParams& params, const SolveOptions& opt = {});

}  // namespace peq
