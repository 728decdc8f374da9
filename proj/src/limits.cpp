#include "platform_eq/limits.hpp"

#include <cmath>

#include "platform_eq/statics.hpp"

namespace peq {

const char* limit_kind_name(LimitKind k) {
    switch (k) {
        case LimitKind::LargeN: return "large_n";
        case LimitKind::LargeU0: return "large_u0";
        case LimitKind::SmallU0: return "small_u0";
    }
    return "?";
}

LimitCheck perfect_competition_check(const MarketParams& base, const std::vector<double>& n_sequence, Side side) {
    if (n_sequence.empty()) throw InvalidArgument("empty N sequence");
    const int k = idx(side);
    LimitCheck c;
    c.kind = LimitKind::LargeN;
    c.side = side;
    c.target = base.beta[k];
    c.tolerance = kLargeNTol;
    c.limiting_z_sign = (base.u0[k] < 0.0 && base.beta[k] < -base.u0[k]) ? 1 : -1;

    bool last_ok = false;
    for (double N : n_sequence) {
        if (!(N >= 2.0)) throw InvalidArgument("every N in the sequence must be >= 2");
        LimitPoint pt;
        pt.params = base;
        pt.params.n_platforms = N;
        last_ok = false;
        try {
            const SymmetricEquilibrium eq = solve_cne(pt.params);
            pt.observed = eq.prices[k];
            pt.error = std::abs(eq.prices[k] - c.target);
            c.participation_error = std::abs(eq.participation[k] - 1.0);
            c.observed_z_sign = eq.z[k] > 0.0 ? 1 : (eq.z[k] < 0.0 ? -1 : 0);
            last_ok = true;
        } catch (const Error& e) {
            pt.failure = e.what();
        }
        c.points.push_back(pt);
    }
    c.achieved_error = std::max(c.points.back().error, c.participation_error);
    c.converged = last_ok && c.achieved_error < c.tolerance;
    return c;
}

std::vector<LimitCheck> outside_option_limit_check(const MarketParams& base, double magnitude, Side side) {
    if (!(magnitude > 0.0)) throw InvalidArgument("magnitude must be positive");
    const AsymptoticLimits lim = asymptotic_limits(base, side);
    const int k = idx(side);
    std::vector<LimitCheck> out;
    for (double sign : {-1.0, 1.0}) {
        LimitCheck c;
        c.kind = sign < 0.0 ? LimitKind::SmallU0 : LimitKind::LargeU0;
        c.side = side;
        c.target = sign < 0.0 ? lim.p_u : lim.p_E;
        c.tolerance = kOutsideOptionTol;
        LimitPoint pt;
        pt.params = base;
        pt.params.u0 = Vec2::Constant(sign * magnitude);
        bool ok = false;
        try {
            const SymmetricEquilibrium eq = solve_cne(pt.params);
            pt.observed = eq.prices[k];
            pt.error = std::abs(eq.prices[k] - c.target);
            c.profit_at_large_u0 = eq.profit_per_side[k];
            ok = true;
        } catch (const Error& e) {
            pt.failure = e.what();
        }
        c.points.push_back(pt);
        c.achieved_error = pt.error;
        c.converged = ok && c.achieved_error < c.tolerance;
        if (c.kind == LimitKind::LargeU0) c.converged = c.converged && c.profit_at_large_u0 < c.tolerance;
        out.push_back(c);
    }
    return out;
}

}  // namespace peq
