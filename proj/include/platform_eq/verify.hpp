#pragma once

#include <limits>

#include "platform_eq/demand.hpp"
#include "platform_eq/equilibrium.hpp"
#include "platform_eq/model.hpp"
#include "platform_eq/parallel.hpp"

namespace peq {

struct DeviationReport {
    SymmetricEquilibrium base;
    double base_profit = 0.0;  // deviation_profit at the symmetric point
    Vec2 best_deviation_prices = Vec2::Zero();
    double best_gain = 0.0;
    double radius = 0.5;
    int grid_n = 41;
    bool refined = false;

    bool certified(double rel_tol = 1e-6) const;
};

struct SOCReport {
    Vec2 cne_diag = Vec2::Constant(std::numeric_limits<double>::quiet_NaN());  // NaN with cross externalities
    Mat2 ce_hessian = Mat2::Zero();
    Mat2 numeric_hessian = Mat2::Zero();
    bool cne_diag_negative = false;
    bool ce_negative_definite = false;
    bool numeric_negative_definite = false;

    // Closed form when available for the regime, numeric Hessian otherwise.
    bool passed(Regime regime, bool cross_free) const;
};

// Profit of platform 1 charging `deviation` while platforms 2..N charge `others`.
double deviation_profit(const MarketParams& params, const Vec2& others, const Vec2& deviation,
                        const MarketState* start = nullptr);

// Outside-option and per-platform shares of a symmetric equilibrium as a stage-2 state.
MarketState symmetric_state(const SymmetricEquilibrium& eq, int n);

DeviationReport verify_nash(const MarketParams& params, const SymmetricEquilibrium& eq, double radius = 0.5,
                            int grid_n = 41, Exec exec = Exec::Parallel);

double soc_cne_value(double z, double beta, double phi_kk, double N);
double soc_cne_diag(double z, const MarketParams& params, Side side);
Mat2 soc_ce_hessian(const ZPoint& z, const MarketParams& params);
bool negative_definite(const Mat2& m);

// Second differences of deviation_profit in the deviating platform's own prices.
Mat2 numeric_price_hessian(const MarketParams& params, const SymmetricEquilibrium& eq);

SOCReport soc_report(const MarketParams& params, const SymmetricEquilibrium& eq);

// Decoupled FOC decreasing and the competitive SOC negative on z in [-30, 30].
bool cne_conditions_hold(double beta, double phi_kk, double N, int z_samples = 601);

}  // namespace peq
