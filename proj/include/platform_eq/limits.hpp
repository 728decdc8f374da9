#pragma once

#include <string>
#include <vector>

#include "platform_eq/equilibrium.hpp"
#include "platform_eq/model.hpp"

namespace peq {

enum class LimitKind { LargeN, LargeU0, SmallU0 };
const char* limit_kind_name(LimitKind k);

inline constexpr double kLargeNTol = 1e-2;
inline constexpr double kOutsideOptionTol = 1e-3;

struct LimitPoint {
    MarketParams params;
    double observed = 0.0;  // price at the point
    double error = 0.0;     // against the target of the check
    std::string failure;    // solver message when the point did not solve
};

struct LimitCheck {
    LimitKind kind = LimitKind::LargeN;
    Side side = Side::Buyer;
    std::vector<LimitPoint> points;
    double target = 0.0;
    double achieved_error = 0.0;  // error at the last point of the sequence
    double tolerance = 0.0;
    bool converged = false;

    // LargeN extras: participation gap and the limiting sign rule for z*.
    double participation_error = 0.0;
    int limiting_z_sign = 0;  // +1 iff u0 < 0 and beta < -u0
    int observed_z_sign = 0;

    // LargeU0 extra: equilibrium profit at u0 = +magnitude.
    double profit_at_large_u0 = 0.0;
};

// Solves along `n_sequence` and compares the last point with p -> beta, N x -> 1.
LimitCheck perfect_competition_check(const MarketParams& base, const std::vector<double>& n_sequence,
                                     Side side = Side::Buyer);

// Two checks: u0 = -magnitude against p_u (SmallU0) and u0 = +magnitude against p_E (LargeU0).
std::vector<LimitCheck> outside_option_limit_check(const MarketParams& base, double magnitude,
                                                   Side side = Side::Buyer);

}  // namespace peq
