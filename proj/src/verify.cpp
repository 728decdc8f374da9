#include "platform_eq/verify.hpp"

#include <algorithm>
#include <array>
#include <functional>
#include <cmath>
#include <limits>

#include "platform_eq/coeffs.hpp"

namespace peq {

namespace {

constexpr int kPolishIterations = 200;

FixedPointOptions deviation_fp_options() {
    FixedPointOptions opt;
    opt.tol = 1e-13;
    return opt;
}

// Nelder-Mead maximisation of f over R^2.
Vec2 nelder_mead_max(const std::function<double(const Vec2&)>& f, const Vec2& x0, double step, int iterations,
                     double& best_value) {
    std::array<Vec2, 3> x{x0, x0 + Vec2(step, 0.0), x0 + Vec2(0.0, step)};
    std::array<double, 3> v{};
    for (int i = 0; i < 3; ++i) v[i] = f(x[i]);
    for (int it = 0; it < iterations; ++it) {
        std::array<int, 3> order{0, 1, 2};
        std::sort(order.begin(), order.end(), [&](int a, int b) { return v[a] > v[b]; });
        const int best = order[0], mid = order[1], worst = order[2];
        const Vec2 centroid = 0.5 * (x[best] + x[mid]);
        const Vec2 xr = centroid + (centroid - x[worst]);
        const double vr = f(xr);
        if (vr > v[best]) {
            const Vec2 xe = centroid + 2.0 * (centroid - x[worst]);
            const double ve = f(xe);
            if (ve > vr) {
                x[worst] = xe;
                v[worst] = ve;
            } else {
                x[worst] = xr;
                v[worst] = vr;
            }
        } else if (vr > v[mid]) {
            x[worst] = xr;
            v[worst] = vr;
        } else {
            const Vec2 xc = centroid + 0.5 * (x[worst] - centroid);
            const double vc = f(xc);
            if (vc > v[worst]) {
                x[worst] = xc;
                v[worst] = vc;
            } else {
                for (int i : {mid, worst}) {
                    x[i] = x[best] + 0.5 * (x[i] - x[best]);
                    v[i] = f(x[i]);
                }
            }
        }
    }
    const int arg = static_cast<int>(std::max_element(v.begin(), v.end()) - v.begin());
    best_value = v[arg];
    return x[arg];
}

}  // namespace

bool DeviationReport::certified(double rel_tol) const {
    return best_gain <= rel_tol * std::max(1.0, std::abs(base.total_profit));
}

bool SOCReport::passed(Regime regime, bool cross_free) const {
    if (regime == Regime::CE) return ce_negative_definite;
    if (cross_free) return cne_diag_negative;
    return numeric_negative_definite;
}

MarketState symmetric_state(const SymmetricEquilibrium& eq, int n) {
    MarketState s;
    for (int k = 0; k < 2; ++k) {
        s.x[k].assign(n + 1, eq.shares[k]);
        s.x[k][0] = 1.0 - n * eq.shares[k];
    }
    return s;
}

double deviation_profit(const MarketParams& params, const Vec2& others, const Vec2& deviation,
                        const MarketState* start) {
    const int n = params.n_int();
    PriceProfile prices = PriceProfile::symmetric(n, others);
    prices.p[0][0] = deviation[0];
    prices.p[1][0] = deviation[1];
    const FixedPointResult fp = share_fixed_point(params, prices, deviation_fp_options(), start);
    return deviation[0] * fp.state.x[0][1] + deviation[1] * fp.state.x[1][1];
}

DeviationReport verify_nash(const MarketParams& params, const SymmetricEquilibrium& eq, double radius, int grid_n,
                            Exec exec) {
    if (eq.regime != Regime::CNE) throw InvalidArgument("verify_nash needs a competitive equilibrium");
    if (grid_n < 2) throw InvalidArgument("grid_n must be >= 2");
    const int n = params.n_int();
    const MarketState warm = symmetric_state(eq, n);
    const Vec2 center = eq.prices;

    DeviationReport rep;
    rep.base = eq;
    rep.radius = radius;
    rep.grid_n = grid_n;
    rep.base_profit = deviation_profit(params, center, center, &warm);

    Vec2 half;
    for (int k = 0; k < 2; ++k) half[k] = radius * std::max(std::abs(center[k]), 1e-3);

    auto grid_point = [&](int i, int j) {
        const double a = -1.0 + 2.0 * i / (grid_n - 1), b = -1.0 + 2.0 * j / (grid_n - 1);
        return Vec2(center[0] + a * half[0], center[1] + b * half[1]);
    };

    const int cells = grid_n * grid_n;
    std::vector<double> values(cells);
    auto eval_cell = [&](int c) {
        try {
            values[c] = deviation_profit(params, center, grid_point(c % grid_n, c / grid_n), &warm);
        } catch (const SolverError&) {
            values[c] = -std::numeric_limits<double>::infinity();
        }
    };
    if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(dynamic)
        for (int c = 0; c < cells; ++c) eval_cell(c);
    } else {
        for (int c = 0; c < cells; ++c) eval_cell(c);
    }

    // First maximum in row-major order, so serial and parallel runs agree.
    int best = 0;
    for (int c = 1; c < cells; ++c)
        if (values[c] > values[best]) best = c;
    Vec2 best_x = grid_point(best % grid_n, best / grid_n);
    double best_v = values[best];

    auto objective = [&](const Vec2& p) {
        try {
            return deviation_profit(params, center, p, &warm);
        } catch (const SolverError&) {
            return -std::numeric_limits<double>::infinity();
        }
    };
    double polished_v = best_v;
    const double step = 2.0 * std::min(half[0], half[1]) / (grid_n - 1);
    const Vec2 polished = nelder_mead_max(objective, best_x, step, kPolishIterations, polished_v);
    rep.refined = true;
    if (polished_v > best_v) {
        best_v = polished_v;
        best_x = polished;
    }
    rep.best_deviation_prices = best_x;
    rep.best_gain = best_v - rep.base_profit;
    return rep;
}

double soc_cne_value(double z, double beta, double phi_kk, double N) {
    const double t = std::exp(z);
    const double w = beta * (1.0 + (N - 1.0) * t) * (1.0 + N * t) - t * phi_kk;
    const double den = t * w * w * w;
    if (!std::isfinite(den) || std::abs(den) < 1e-300) throw SolverError("SOC denominator vanishes");
    return build_coeffs(CoeffFamily::S, beta, phi_kk, N).evaluate(t) / den;
}

double soc_cne_diag(double z, const MarketParams& params, Side side) {
    if (!params.cross_free()) throw InvalidArgument("closed-form SOC needs zero cross externalities");
    const int k = idx(side);
    return soc_cne_value(z, params.beta[k], params.phi(k, k), params.N());
}

Mat2 soc_ce_hessian(const ZPoint& z, const MarketParams& params) {
    const double N = params.N();
    Mat2 m;
    for (int k = 0; k < 2; ++k) {
        const double t = std::exp(z[k]);
        const double q = N * t + 1.0;
        m(k, k) = -N * std::exp(-z[k]) * (params.beta[k] * q * q * q - 2.0 * t * params.phi(k, k));
    }
    m(0, 1) = m(1, 0) = N * (params.phi(0, 1) + params.phi(1, 0));
    return m;
}

bool negative_definite(const Mat2& m) { return m(0, 0) < 0.0 && m.determinant() > 0.0; }

Mat2 numeric_price_hessian(const MarketParams& params, const SymmetricEquilibrium& eq) {
    const int n = params.n_int();
    const MarketState warm = symmetric_state(eq, n);
    const Vec2 p = eq.prices;
    Vec2 h;
    for (int k = 0; k < 2; ++k) h[k] = 1e-4 * std::max(1.0, std::abs(p[k]));
    auto f = [&](double db, double ds) { return deviation_profit(params, p, p + Vec2(db, ds), &warm); };
    const double f0 = f(0, 0);
    Mat2 H;
    H(0, 0) = (f(h[0], 0) - 2.0 * f0 + f(-h[0], 0)) / (h[0] * h[0]);
    H(1, 1) = (f(0, h[1]) - 2.0 * f0 + f(0, -h[1])) / (h[1] * h[1]);
    H(0, 1) = H(1, 0) = (f(h[0], h[1]) - f(h[0], -h[1]) - f(-h[0], h[1]) + f(-h[0], -h[1])) / (4.0 * h[0] * h[1]);
    return H;
}

SOCReport soc_report(const MarketParams& params, const SymmetricEquilibrium& eq) {
    SOCReport r;
    if (params.cross_free()) {
        for (Side s : kSides) r.cne_diag[idx(s)] = soc_cne_diag(eq.z[idx(s)], params, s);
        r.cne_diag_negative = r.cne_diag[0] < 0.0 && r.cne_diag[1] < 0.0;
    }
    r.ce_hessian = soc_ce_hessian(eq.z, params);
    r.ce_negative_definite = negative_definite(r.ce_hessian);
    if (eq.regime == Regime::CNE) {
        r.numeric_hessian = numeric_price_hessian(params, eq);
        r.numeric_negative_definite = negative_definite(r.numeric_hessian);
    }
    return r;
}

bool cne_conditions_hold(double beta, double phi_kk, double N, int z_samples) {
    for (int i = 0; i < z_samples; ++i) {
        const double z = -30.0 + 60.0 * i / (z_samples - 1);
        try {
            if (!(decoupled_dm(z, beta, phi_kk, N) < 0.0)) return false;
            if (!(soc_cne_value(z, beta, phi_kk, N) < 0.0)) return false;
        } catch (const SolverError&) {
            return false;
        }
    }
    return true;
}

}  // namespace peq
