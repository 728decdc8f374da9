#pragma once

#include <optional>

#include "platform_eq/coeffs.hpp"
#include "platform_eq/equilibrium.hpp"
#include "platform_eq/model.hpp"

namespace peq {

enum class Quantity { Price, Profit, ConsumerSurplus, Participation, Z };
enum class Wrt { OutsideUtility, NumPlatforms };

const char* quantity_name(Quantity q);
const char* wrt_name(Wrt w);

struct DerivativeBundle {
    Quantity quantity = Quantity::Price;
    Wrt wrt = Wrt::OutsideUtility;
    Side side = Side::Buyer;
    std::optional<double> analytic;
    double finite_difference = 0.0;
    double agreement = 0.0;  // relative error, 0 when analytic is absent
};

struct AsymptoticLimits {
    double p_u = 0.0;
    double p_E = 0.0;
    double pi_u = 0.0;
    double pi_E = 0.0;
};

inline constexpr double kFdStepU0 = 1e-5;
inline constexpr double kFdStepN = 1e-4;

// Competitive z* for one side with the cross externalities switched off.
double decoupled_z_star(const MarketParams& params, Side side);

// Closed forms; all throw InvalidArgument when a cross externality is nonzero.
double dz_du0(const MarketParams& params, Side side);
double dprice_du0(const MarketParams& params, Side side);
double dprofit_du0(const MarketParams& params, Side side);
double dcs_du0(const MarketParams& params, Side side);
double dprice_dN(const MarketParams& params, Side side);
double dparticipation_dN(const MarketParams& params, Side side);
double dcs_dN(const MarketParams& params, Side side);
double dprofit_dN(const MarketParams& params, Side side);

// Analytic value or nullopt when no closed form exists for the pair.
std::optional<double> analytic_derivative(Quantity q, Wrt w, const MarketParams& params, Side side);

double quantity_value(const SymmetricEquilibrium& eq, Quantity q, Side side);

// Central difference of the solved quantity; N is treated as real.
double fd_derivative(Quantity q, Wrt w, const MarketParams& params, Side side, double h,
                     Regime regime = Regime::CNE);

DerivativeBundle derivative_bundle(Quantity q, Wrt w, const MarketParams& params, Side side);

AsymptoticLimits asymptotic_limits(const MarketParams& params, Side side);

}  // namespace peq
