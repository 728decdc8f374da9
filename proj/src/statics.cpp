#include "platform_eq/statics.hpp"

#include <cmath>

#include "platform_eq/demand.hpp"

namespace peq {

namespace {

void require_cross_free(const MarketParams& params) {
    params.validate();
    if (!params.cross_free())
        throw InvalidArgument("analytic comparative statics need zero cross externalities (use fd_derivative)");
}

struct SideView {
    double beta, phi, N, u0, z, t;
};

SideView view(const MarketParams& params, Side side) {
    require_cross_free(params);
    const int k = idx(side);
    const double z = decoupled_z_star(params, side);
    return {params.beta[k], params.phi(k, k), params.N(), params.u0[k], z, std::exp(z)};
}

double ratio(CoeffFamily num, CoeffFamily den, const SideView& v) {
    const double d = build_coeffs(den, v.beta, v.phi, v.N, v.u0, v.z).evaluate(v.t);
    if (!std::isfinite(d) || std::abs(d) < 1e-300) throw SolverError("vanishing denominator in comparative statics");
    return build_coeffs(num, v.beta, v.phi, v.N, v.u0, v.z).evaluate(v.t) / d;
}

}  // namespace

const char* quantity_name(Quantity q) {
    switch (q) {
        case Quantity::Price: return "price";
        case Quantity::Profit: return "profit";
        case Quantity::ConsumerSurplus: return "cs";
        case Quantity::Participation: return "participation";
        case Quantity::Z: return "z";
    }
    return "?";
}

const char* wrt_name(Wrt w) { return w == Wrt::OutsideUtility ? "u0" : "N"; }

double decoupled_z_star(const MarketParams& params, Side side) {
    const int k = idx(side);
    return solve_decoupled(Regime::CNE, params.beta[k], params.phi(k, k), params.N(), params.u0[k]);
}

double dz_du0(const MarketParams& params, Side side) {
    const SideView v = view(params, side);
    const double dm = decoupled_dm(v.z, v.beta, v.phi, v.N);
    if (!std::isfinite(dm) || std::abs(dm) < 1e-14) throw SolverError("singular FOC derivative");
    return 1.0 / dm;
}

double dprice_du0(const MarketParams& params, Side side) {
    return -ratio(CoeffFamily::NPu, CoeffFamily::DPu, view(params, side));
}

double dprofit_du0(const MarketParams& params, Side side) {
    return -ratio(CoeffFamily::NPiu, CoeffFamily::DPiu, view(params, side));
}

double dcs_du0(const MarketParams& params, Side side) {
    return ratio(CoeffFamily::NCSu, CoeffFamily::DCSu, view(params, side));
}

double dprice_dN(const MarketParams& params, Side side) {
    return ratio(CoeffFamily::NP, CoeffFamily::D, view(params, side));
}

double dparticipation_dN(const MarketParams& params, Side side) {
    return ratio(CoeffFamily::NNx, CoeffFamily::DNx, view(params, side));
}

double dcs_dN(const MarketParams& params, Side side) {
    return ratio(CoeffFamily::NCSk, CoeffFamily::DCSk, view(params, side));
}

double dprofit_dN(const MarketParams& params, Side side) {
    return ratio(CoeffFamily::NPik, CoeffFamily::DPik, view(params, side));
}

std::optional<double> analytic_derivative(Quantity q, Wrt w, const MarketParams& params, Side side) {
    if (w == Wrt::OutsideUtility) {
        switch (q) {
            case Quantity::Z: return dz_du0(params, side);
            case Quantity::Price: return dprice_du0(params, side);
            case Quantity::Profit: return dprofit_du0(params, side);
            case Quantity::ConsumerSurplus: return dcs_du0(params, side);
            case Quantity::Participation: {
                const double z = decoupled_z_star(params, side);
                return params.N() * omega_prime(z, params.N()) * dz_du0(params, side);
            }
        }
    } else {
        switch (q) {
            case Quantity::Price: return dprice_dN(params, side);
            case Quantity::Profit: return dprofit_dN(params, side);
            case Quantity::ConsumerSurplus: return dcs_dN(params, side);
            case Quantity::Participation: return dparticipation_dN(params, side);
            case Quantity::Z: return std::nullopt;
        }
    }
    return std::nullopt;
}

double quantity_value(const SymmetricEquilibrium& eq, Quantity q, Side side) {
    const int k = idx(side);
    switch (q) {
        case Quantity::Price: return eq.prices[k];
        case Quantity::Profit: return eq.profit_per_side[k];
        case Quantity::ConsumerSurplus: return eq.consumer_surplus[k];
        case Quantity::Participation: return eq.participation[k];
        case Quantity::Z: return eq.z[k];
    }
    return 0.0;
}

double fd_derivative(Quantity q, Wrt w, const MarketParams& params, Side side, double h, Regime regime) {
    if (!(h > 0.0)) throw InvalidArgument("finite-difference step must be positive");
    MarketParams lo = params, hi = params;
    if (w == Wrt::OutsideUtility) {
        lo.u0[idx(side)] -= h;
        hi.u0[idx(side)] += h;
    } else {
        lo.n_platforms -= h;
        hi.n_platforms += h;
    }
    SolveOptions opt;
    opt.tol = 1e-12;
    const double f_hi = quantity_value(solve(regime, hi, opt), q, side);
    const double f_lo = quantity_value(solve(regime, lo, opt), q, side);
    return (f_hi - f_lo) / (2.0 * h);
}

DerivativeBundle derivative_bundle(Quantity q, Wrt w, const MarketParams& params, Side side) {
    DerivativeBundle b;
    b.quantity = q;
    b.wrt = w;
    b.side = side;
    b.finite_difference = fd_derivative(q, w, params, side, w == Wrt::OutsideUtility ? kFdStepU0 : kFdStepN);
    if (params.cross_free()) b.analytic = analytic_derivative(q, w, params, side);
    if (b.analytic) {
        const double denom = std::max(std::abs(*b.analytic), 1e-300);
        b.agreement = std::abs(*b.analytic - b.finite_difference) / denom;
    }
    return b;
}

AsymptoticLimits asymptotic_limits(const MarketParams& params, Side side) {
    require_cross_free(params);
    const int k = idx(side);
    const double N = params.N(), b = params.beta[k], f = params.phi(k, k);
    AsymptoticLimits out;
    out.p_u = N * b / (N - 1.0) - f / (N - 1.0);
    out.p_E = b;
    out.pi_u = b / (N - 1.0) - f / ((N - 1.0) * N);
    out.pi_E = 0.0;
    return out;
}

}  // namespace peq
