#include "platform_eq/equilibrium.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

#include "platform_eq/coeffs.hpp"

namespace peq {

namespace {

constexpr double kBracketCap = 200.0;

double sup_norm(const Vec2& v) { return v.cwiseAbs().maxCoeff(); }

using Residual = std::function<Vec2(const ZPoint&)>;

// Returns false if no step could reduce the residual; `trace` collects the history.
bool damped_newton(const Residual& F, ZPoint& z, double tol, int& iterations, std::ostringstream& trace) {
    constexpr double h = 1e-7;
    constexpr int max_iter = 100;
    constexpr int max_halvings = 100;
    Vec2 f = F(z);
    double r = sup_norm(f);
    for (int it = 0; it < max_iter; ++it) {
        if (r <= tol) {
            iterations += it;
            return true;
        }
        Mat2 J;
        for (int j = 0; j < 2; ++j) {
            Vec2 zp = z.vec(), zm = z.vec();
            zp[j] += h;
            zm[j] -= h;
            J.col(j) = (F(ZPoint::from(zp)) - F(ZPoint::from(zm))) / (2.0 * h);
        }
        if (!std::isfinite(J.determinant()) || std::abs(J.determinant()) < 1e-300) {
            trace << " iter " << it << ": singular Jacobian at residual " << r << ";";
            return false;
        }
        Vec2 step = -J.partialPivLu().solve(f);
        double lambda = 1.0;
        bool accepted = false;
        for (int k = 0; k < max_halvings; ++k, lambda *= 0.5) {
            ZPoint cand = ZPoint::from(z.vec() + lambda * step);
            Vec2 fc;
            try {
                fc = F(cand);
            } catch (const Error&) {
                continue;
            }
            double rc = sup_norm(fc);
            if (std::isfinite(rc) && rc < r) {
                z = cand;
                f = fc;
                r = rc;
                accepted = true;
                break;
            }
        }
        if (!accepted) {
            trace << " iter " << it << ": no descent step at residual " << r << ";";
            return false;
        }
    }
    iterations += max_iter;
    trace << " iteration limit at residual " << r << ";";
    return r <= tol;
}

void check_finite(const ZPoint& z) {
    if (!std::isfinite(z.z_b) || !std::isfinite(z.z_s)) throw InvalidArgument("z must be finite");
}

}  // namespace

const char* regime_name(Regime r) { return r == Regime::CNE ? "cne" : "ce"; }

Vec2 omega_vec(const ZPoint& z, double N) {
    return {1.0 / (std::exp(-z.z_b) + N), 1.0 / (std::exp(-z.z_s) + N)};
}

Mat2 h_matrix(const ZPoint& z, const MarketParams& params) {
    check_finite(z);
    const double N = params.N();
    const double phi_bs = params.phi(0, 1), phi_sb = params.phi(1, 0);
    Vec2 d, h, K;
    for (int k = 0; k < 2; ++k) {
        const double t = std::exp(z[k]), em = std::exp(-z[k]), b = params.beta[k];
        d[k] = b * (1.0 + N * t);
        h[k] = b * (1.0 + t) * (em + N);
        K[k] = params.phi(k, k) - b * (1.0 + N * t) * (em + N - 1.0);
    }
    const double J = K[0] * K[1] - phi_sb * phi_bs;
    const double scale = std::max(1.0, std::abs(K[0] * K[1]) + std::abs(phi_sb * phi_bs));
    if (!std::isfinite(J) || std::abs(J) < 1e-14 * scale)
        throw SolverError("FOC singularity (J_phi or K_k vanishes)");
    Vec2 L;
    for (int k = 0; k < 2; ++k) L[k] = (N - 1.0) * d[k] / J;

    // L_k d_k K_j + h_k is rearranged over the common denominator J; the direct
    // sum cancels two O(e^z) terms and loses all digits for large z.
    Vec2 diag;
    for (int k = 0; k < 2; ++k) {
        const double g1 = std::exp(-z[k]) + N;
        const double lead = h[k] * params.phi(k, k) - d[k] * params.beta[k] * g1 * g1;
        diag[k] = (lead * K[1 - k] - h[k] * phi_sb * phi_bs) / J;
    }

    Mat2 H;
    H(0, 0) = diag[0] - params.phi(0, 0);
    H(0, 1) = -phi_sb * (d[1] * L[0] + 1.0);
    H(1, 0) = -phi_bs * (d[0] * L[1] + 1.0);
    H(1, 1) = diag[1] - params.phi(1, 1);
    return H;
}

Vec2 cne_foc_residual(const ZPoint& z, const MarketParams& params) {
    const Vec2 om = omega_vec(z, params.N());
    return (params.phi - h_matrix(z, params)) * om - params.u0 - params.beta.cwiseProduct(z.vec());
}

Mat2 hc_matrix(const ZPoint& z, const MarketParams& params) {
    check_finite(z);
    const double N = params.N();
    Mat2 H;
    for (int k = 0; k < 2; ++k) {
        const double t = std::exp(z[k]);
        H(k, k) = params.beta[k] * (1.0 + N * t) * (1.0 + N * t) / t - params.phi(k, k);
    }
    H(0, 1) = -params.phi(1, 0);
    H(1, 0) = -params.phi(0, 1);
    return H;
}

Vec2 ce_foc_residual(const ZPoint& z, const MarketParams& params) {
    const Vec2 om = omega_vec(z, params.N());
    return (params.phi - hc_matrix(z, params)) * om - params.u0 - params.beta.cwiseProduct(z.vec());
}

double decoupled_m(double z, double b, double f, double N, double u0) {
    const double t = std::exp(z);
    const double q = 1.0 + N * t;
    const double num = -b * b * q * q * q + b * f * t * ((2.0 * N - 1.0) * t + 3.0) * q - 2.0 * t * t * f * f;
    const double den = q * (b * (1.0 + (N - 1.0) * t) * q - t * f);
    return num / den - b * z - u0;
}

double decoupled_dm(double z, double b, double f, double N) {
    const double t = std::exp(z);
    const double q = 1.0 + N * t;
    const double w = b * (1.0 + (N - 1.0) * t) * q - t * f;
    return -build_coeffs(CoeffFamily::A, b, f, N).evaluate(t) / (q * q * w * w);
}

double decoupled_mc(double z, double b, double f, double N, double u0) {
    const double t = std::exp(z);
    return 2.0 * f / (N + std::exp(-z)) - b * (1.0 + N * t) - u0 - b * z;
}

double decoupled_dmc(double z, double b, double f, double N) {
    const double t = std::exp(z);
    const double q = N * t + 1.0;
    return (2.0 * t * f - b * q * q * q) / (q * q);
}

double solve_decoupled(Regime regime, double b, double f, double N, double u0, const SolveOptions& opt) {
    auto M = [&](double z) {
        return regime == Regime::CNE ? decoupled_m(z, b, f, N, u0) : decoupled_mc(z, b, f, N, u0);
    };
    auto dM = [&](double z) { return regime == Regime::CNE ? decoupled_dm(z, b, f, N) : decoupled_dmc(z, b, f, N); };

    double lo = -opt.bracket, hi = opt.bracket;
    double flo = M(lo), fhi = M(hi);
    while (!(flo > 0.0 && fhi < 0.0)) {
        if (lo <= -kBracketCap && hi >= kBracketCap) throw SolverError("no root in range");
        lo = std::max(2.0 * lo, -kBracketCap);
        hi = std::min(2.0 * hi, kBracketCap);
        flo = M(lo);
        fhi = M(hi);
    }
    for (int it = 0; it < 400 && hi - lo > 1e-12; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = M(mid);
        if (std::isnan(fm)) throw SolverError("FOC is not finite inside the bracket");
        (fm > 0.0 ? lo : hi) = mid;
    }
    double z = 0.5 * (lo + hi);
    double fz = M(z);
    for (int it = 0; it < 5 && fz != 0.0; ++it) {
        const double d = dM(z);
        if (!std::isfinite(d) || d == 0.0) break;
        const double zn = z - fz / d;
        const double fn = M(zn);
        if (!(std::abs(fn) < std::abs(fz))) break;
        z = zn;
        fz = fn;
    }
    if (!(std::abs(fz) <= std::max(opt.tol, 1e-6)))
        throw SolverError("bisection converged to a singularity of the FOC", std::abs(fz));
    return z;
}

Vec2 consumer_surplus(const Vec2& prices, const Vec2& shares, const MarketParams& params) {
    const double variety = std::log(params.N() + 1.0) + kEulerGamma;
    Vec2 cs;
    for (int k = 0; k < 2; ++k)
        cs[k] = params.mu[k] + params.beta[k] * variety - prices[k] + params.phi.row(k).dot(shares);
    return cs;
}

SymmetricEquilibrium assemble(Regime regime, const ZPoint& z, const MarketParams& params) {
    SymmetricEquilibrium eq;
    eq.regime = regime;
    eq.z = z;
    const double N = params.N();
    const Vec2 om = omega_vec(z, N);
    const Mat2 H = regime == Regime::CNE ? h_matrix(z, params) : hc_matrix(z, params);
    eq.prices = H * om;
    eq.price_alt = params.phi * om - params.beta.cwiseProduct(z.vec()) - params.u0;
    eq.shares = om;
    eq.participation = N * om;
    eq.profit_per_side = eq.prices.cwiseProduct(om);
    eq.total_profit = eq.profit_per_side.sum();
    eq.consumer_surplus = consumer_surplus(eq.prices, om, params);
    eq.foc_residual = sup_norm(eq.price_alt - eq.prices);
    eq.existence_warning = regime == Regime::CNE
                               ? !(check_cne_existence(params)[0] && check_cne_existence(params)[1])
                               : !(check_ce_existence(params)[0] && check_ce_existence(params)[1]);

    if (regime == Regime::CE && params.phi.isZero(0.0)) {
        for (int k = 0; k < 2; ++k) {
            const double expect = params.beta[k] * (1.0 + N * std::exp(z[k]));
            if (std::abs(eq.prices[k] - expect) > 1e-10 * std::max(1.0, std::abs(expect)))
                throw Error("collusive price identity p = beta(1 + N e^z) violated");
        }
    }
    return eq;
}

SymmetricEquilibrium solve(Regime regime, const MarketParams& params, const SolveOptions& opt) {
    params.validate();
    if (!(opt.tol > 0.0)) throw InvalidArgument("tol must be positive");

    ZPoint seed;
    seed.z_b = solve_decoupled(regime, params.beta[0], params.phi(0, 0), params.N(), params.u0[0], opt);
    seed.z_s = solve_decoupled(regime, params.beta[1], params.phi(1, 1), params.N(), params.u0[1], opt);

    auto residual_for = [regime](const MarketParams& p) -> Residual {
        if (regime == Regime::CNE) return [p](const ZPoint& z) { return cne_foc_residual(z, p); };
        return [p](const ZPoint& z) { return ce_foc_residual(z, p); };
    };

    ZPoint z = seed;
    int iterations = 0;
    std::ostringstream trace;
    bool ok = damped_newton(residual_for(params), z, opt.tol, iterations, trace);

    if (!ok && !params.cross_free()) {
        // Continuation from the decoupled problem, where the seed is exact.
        for (int steps : {8, 32, 128}) {
            z = seed;
            ok = true;
            for (int s = 1; s <= steps && ok; ++s) {
                MarketParams p = params;
                const double lam = static_cast<double>(s) / steps;
                p.phi(0, 1) *= lam;
                p.phi(1, 0) *= lam;
                ok = damped_newton(residual_for(p), z, opt.tol, iterations, trace);
            }
            if (ok) break;
            trace << " continuation with " << steps << " steps failed;";
        }
    }
    if (!ok) throw SolverError(std::string(regime_name(regime)) + " Newton solve diverged:" + trace.str());

    SymmetricEquilibrium eq = assemble(regime, z, params);
    eq.iterations = iterations;
    if (eq.foc_residual > opt.tol)
        throw SolverError(std::string(regime_name(regime)) + " FOC residual above tolerance", eq.foc_residual);
    return eq;
}

SymmetricEquilibrium solve_cne(const MarketParams& params, const SolveOptions& opt) {
    return solve(Regime::CNE, params, opt);
}

SymmetricEquilibrium solve_ce(const MarketParams& params, const SolveOptions& opt) {
    return solve(Regime::CE, params, opt);
}

RegimeComparison compare_regimes(const MarketParams& params, const SolveOptions& opt) {
    RegimeComparison c;
    c.cne = solve_cne(params, opt);
    c.ce = solve_ce(params, opt);
    c.dz = c.cne.z.vec() - c.ce.z.vec();
    c.d_participation = c.cne.participation - c.ce.participation;
    c.d_price = c.cne.prices - c.ce.prices;
    c.externality_term = params.phi * (c.ce.shares - c.cne.shares);
    c.heterogeneity_term = params.beta.cwiseProduct(c.dz);
    return c;
}

}  // namespace peq
