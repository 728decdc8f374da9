// Acceptance runner: one PASS/FAIL line per criterion.
//   acceptance            run all criteria
//   acceptance --only N   run criterion N (ctest registers one test per criterion)
// Exit status: 0 when every selected criterion passes, 77 when the only failures
// are documented-unattainable clauses, 1 otherwise.

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "oracles.hpp"
#include "platform_eq/demand.hpp"
#include "platform_eq/equilibrium.hpp"
#include "platform_eq/limits.hpp"
#include "platform_eq/regions.hpp"
#include "platform_eq/statics.hpp"
#include "platform_eq/verify.hpp"

using namespace peq;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
    bool known_gap = false;  // failure comes from a clause recorded as unattainable
};

struct Criterion {
    int id;
    std::string name;
    double time_limit_s;
    std::function<Outcome()> run;
};

std::mt19937_64 rng_for(int criterion) { return std::mt19937_64(0x5eed0000ull + criterion); }

double uni(std::mt19937_64& g, double a, double b) { return std::uniform_real_distribution<double>(a, b)(g); }
int uni_int(std::mt19937_64& g, int a, int b) { return std::uniform_int_distribution<int>(a, b)(g); }

// Parameters that satisfy the competitive existence condition on both sides.
MarketParams random_valid(std::mt19937_64& g, double cross, bool integer_n = true, int n_max = 6) {
    for (;;) {
        MarketParams p;
        p.n_platforms = integer_n ? uni_int(g, 2, n_max) : uni(g, 2.0, n_max);
        p.beta = {uni(g, 0.2, 3.0), uni(g, 0.2, 3.0)};
        p.phi << uni(g, -1.0, 1.0), uni(g, -cross, cross), uni(g, -cross, cross), uni(g, -1.0, 1.0);
        if (cross == 0.0) p.phi(0, 1) = p.phi(1, 0) = 0.0;
        p.u0 = {uni(g, -2.0, 2.0), uni(g, -2.0, 2.0)};
        const auto ok = check_cne_existence(p);
        if (ok[0] && ok[1]) return p;
    }
}

// ---------------------------------------------------------------- 1
Outcome stage2() {
    auto g = rng_for(1);
    long bad_simplex = 0, bad_logit = 0, failures = 0;
    double worst_simplex = 0.0, worst_logit = 0.0;
    for (int c = 0; c < 1000; ++c) {
        const int n = uni_int(g, 2, 6);
        MarketParams p;
        p.n_platforms = n;
        p.beta = {uni(g, 0.2, 3.0), uni(g, 0.2, 3.0)};
        p.phi << uni(g, -0.5, 0.5), uni(g, -0.5, 0.5), uni(g, -0.5, 0.5), uni(g, -0.5, 0.5);
        p.u0 = {uni(g, -2.0, 2.0), uni(g, -2.0, 2.0)};
        PriceProfile prices;
        for (int k = 0; k < 2; ++k)
            for (int i = 0; i < n; ++i) prices.p[k].push_back(uni(g, -2.0, 2.0));
        try {
            const auto r = share_fixed_point(p, prices);
            for (int k = 0; k < 2; ++k) {
                double sum = 0.0, neg = 0.0;
                for (double x : r.state.x[k]) {
                    sum += x;
                    neg = std::max(neg, -x);
                }
                const double err = std::max(std::abs(sum - 1.0), neg);
                worst_simplex = std::max(worst_simplex, err);
                if (err > 1e-10) ++bad_simplex;
            }
            MarketParams free = p;
            free.phi.setZero();
            const auto f = share_fixed_point(free, prices);
            for (int k = 0; k < 2; ++k) {
                std::vector<double> v{p.u0[k]};
                for (double pr : prices.p[k]) v.push_back(-pr);
                const auto ref = oracle::logit(v, p.beta[k]);
                for (int i = 0; i <= n; ++i) {
                    const double err = std::abs(f.state.x[k][i] - ref[i]);
                    worst_logit = std::max(worst_logit, err);
                    if (err > 1e-12) ++bad_logit;
                }
            }
        } catch (const Error&) {
            ++failures;
        }
    }
    return {bad_simplex == 0 && bad_logit == 0 && failures == 0,
            fmt::format("1000 cases, simplex worst {:.2e} (tol 1e-10), logit worst {:.2e} (tol 1e-12), solver failures {}",
                        worst_simplex, worst_logit, failures)};
}

// ---------------------------------------------------------------- 2
Outcome contraction() {
    auto g = rng_for(2);
    int cases = 0, bad = 0;
    double worst = 0.0;
    while (cases < 200) {
        const int n = uni_int(g, 2, 6);
        MarketParams p;
        p.n_platforms = n;
        p.beta = {uni(g, 0.2, 3.0), uni(g, 0.2, 3.0)};
        p.phi << uni(g, -1.0, 1.0), uni(g, -1.0, 1.0), uni(g, -1.0, 1.0), uni(g, -1.0, 1.0);
        if (contraction_margin(p) <= 0.0) continue;
        PriceProfile prices;
        for (int k = 0; k < 2; ++k)
            for (int i = 0; i < n; ++i) prices.p[k].push_back(uni(g, -2.0, 2.0));
        ++cases;
        try {
            const auto ref = share_fixed_point(p, prices).state;
            double d = 0.0;
            for (int s = 0; s < 10; ++s) {
                const MarketState x0 = random_interior_state(n, 1000ull * cases + s);
                d = std::max(d, share_fixed_point(p, prices, {}, &x0).state.sup_distance(ref));
            }
            worst = std::max(worst, d);
            if (d > 1e-9) ++bad;
        } catch (const Error&) {
            ++bad;
        }
    }
    return {bad == 0, fmt::format("200 certified cases, 10 starts each, worst spread {:.2e} (tol 1e-9), failures {}",
                                  worst, bad)};
}

// ---------------------------------------------------------------- 3
Outcome solver_fidelity() {
    auto g = rng_for(3);
    int bad = 0, failures = 0;
    double worst_res = 0.0, worst_dual = 0.0;
    for (int c = 0; c < 500; ++c) {
        const MarketParams p = random_valid(g, 0.1);
        for (Regime r : {Regime::CNE, Regime::CE}) {
            try {
                const auto eq = solve(r, p, {1e-10});
                const Vec2 m = r == Regime::CNE ? cne_foc_residual(eq.z, p) : ce_foc_residual(eq.z, p);
                const double res = m.cwiseAbs().maxCoeff();
                const double dual = (eq.prices - eq.price_alt).cwiseAbs().maxCoeff();
                worst_res = std::max(worst_res, res);
                worst_dual = std::max(worst_dual, dual);
                if (res > 1e-10 || dual > 1e-10) ++bad;
            } catch (const Error&) {
                ++failures;
            }
        }
    }
    return {bad == 0 && failures == 0,
            fmt::format("500 points x 2 regimes, FOC residual worst {:.2e}, dual price gap worst {:.2e} (tol 1e-10), "
                        "solver failures {}",
                        worst_res, worst_dual, failures)};
}

// ---------------------------------------------------------------- 4
Outcome nash() {
    auto g = rng_for(4);
    std::vector<MarketParams> points{base_case()};
    while (points.size() < 21) points.push_back(random_valid(g, 0.05, true, 5));
    int bad = 0;
    double worst_ratio = 0.0;
    for (const auto& p : points) {
        try {
            const auto eq = solve_cne(p);
            const auto rep = verify_nash(p, eq, 0.5, 41);
            const double tol = 1e-6 * std::max(1.0, std::abs(eq.total_profit));
            worst_ratio = std::max(worst_ratio, rep.best_gain / tol);
            if (!(rep.best_gain <= tol)) ++bad;
        } catch (const Error&) {
            ++bad;
        }
    }
    return {bad == 0, fmt::format("base + 20 points, worst best_gain / tolerance {:.3g}, failures {}", worst_ratio, bad)};
}

// ---------------------------------------------------------------- 5
// A sign violation counts as a confirmed counterexample when the CNE passes the
// deviation check, the CE price is stationary for the oracle joint profit, and the
// signs hold once the cross externalities are switched off.
bool confirmed_counterexample(const MarketParams& p, const RegimeComparison& cmp) {
    if (!verify_nash(p, cmp.cne, 0.5, 41).certified()) return false;
    const int n = static_cast<int>(p.n_platforms);
    const double beta[2] = {p.beta[0], p.beta[1]};
    const double phi[2][2] = {{p.phi(0, 0), p.phi(0, 1)}, {p.phi(1, 0), p.phi(1, 1)}};
    const double u0[2] = {p.u0[0], p.u0[1]};
    auto joint = [&](double pb, double ps) {
        const std::vector<double> pr[2] = {std::vector<double>(n, pb), std::vector<double>(n, ps)};
        const auto sh = oracle::two_sided_shares(n, beta, phi, u0, pr);
        return n * (pb * sh.x[0][1] + ps * sh.x[1][1]);
    };
    const double h = 1e-5, pb = cmp.ce.prices[0], ps = cmp.ce.prices[1];
    const double gb = (joint(pb + h, ps) - joint(pb - h, ps)) / (2 * h);
    const double gs = (joint(pb, ps + h) - joint(pb, ps - h)) / (2 * h);
    if (std::max(std::abs(gb), std::abs(gs)) > 1e-6) return false;
    MarketParams free = p;
    free.phi(0, 1) = free.phi(1, 0) = 0.0;
    const auto c0 = compare_regimes(free);
    for (int k = 0; k < 2; ++k)
        if (!(c0.dz[k] > 0.0 && c0.d_participation[k] > 0.0 && c0.d_price[k] < 0.0)) return false;
    return true;
}

Outcome collusion() {
    auto g = rng_for(5);
    int bad_sign = 0, confirmed = 0, failures = 0;
    double worst_identity = 0.0;
    std::string cases;
    for (int c = 0; c < 200; ++c) {
        const MarketParams p = random_valid(g, 0.05);
        try {
            const auto cmp = compare_regimes(p);
            bool violated = false;
            for (int k = 0; k < 2; ++k) {
                if (!(cmp.dz[k] > 0.0 && cmp.d_participation[k] > 0.0 && cmp.d_price[k] < 0.0)) {
                    violated = true;
                    cases += fmt::format("\n    violation N={} beta=[{:.4g}, {:.4g}] phi=[[{:.4g}, {:.4g}], [{:.4g}, {:.4g}]] "
                                         "u0=[{:.4g}, {:.4g}] side {}: dz {:.3g}, dNx {:.3g}, dp {:.3g}",
                                         p.n_platforms, p.beta[0], p.beta[1], p.phi(0, 0), p.phi(0, 1), p.phi(1, 0),
                                         p.phi(1, 1), p.u0[0], p.u0[1], side_name(static_cast<Side>(k)), cmp.dz[k],
                                         cmp.d_participation[k], cmp.d_price[k]);
                }
                // p* - p^C = Phi (x* - x^C) - beta (z* - z^C)
                const double id = std::abs(cmp.d_price[k] + cmp.externality_term[k] + cmp.heterogeneity_term[k]);
                worst_identity = std::max(worst_identity, id);
            }
            if (violated) {
                ++bad_sign;
                if (confirmed_counterexample(p, cmp)) {
                    ++confirmed;
                    cases += " (confirmed: Nash-certified, CE stationary, signs hold at zero cross terms)";
                }
            }
        } catch (const Error&) {
            ++failures;
        }
    }
    Outcome o{bad_sign == 0 && failures == 0 && worst_identity <= 1e-9,
              fmt::format("200 sets, sign violations {} ({} confirmed counterexamples), decomposition worst {:.2e} "
                          "(tol 1e-9), failures {}{}",
                          bad_sign, confirmed, worst_identity, failures, cases)};
    o.known_gap = !o.pass && failures == 0 && worst_identity <= 1e-9 && confirmed == bad_sign;
    return o;
}

// ---------------------------------------------------------------- 6
// Central differences of the long-double oracle equilibrium, so the reference is not
// limited by double rounding when a derivative is small relative to the quantity.
Outcome analytic_statics() {
    auto g = rng_for(6);
    using Pick = long double (*)(const oracle::SymmetricPoint&);
    struct Op {
        const char* name;
        double (*analytic)(const MarketParams&, Side);
        Pick pick;
        bool wrt_n;
    };
    const std::vector<Op> ops = {
        {"dz/du0", dz_du0, [](const oracle::SymmetricPoint& s) { return s.z; }, false},
        {"dp/du0", dprice_du0, [](const oracle::SymmetricPoint& s) { return s.price; }, false},
        {"dpi/du0", dprofit_du0, [](const oracle::SymmetricPoint& s) { return s.profit; }, false},
        {"dcs/du0", dcs_du0, [](const oracle::SymmetricPoint& s) { return s.cs; }, false},
        {"dp/dN", dprice_dN, [](const oracle::SymmetricPoint& s) { return s.price; }, true},
        {"dNx/dN", dparticipation_dN, [](const oracle::SymmetricPoint& s) { return s.participation; }, true},
        {"dcs/dN", dcs_dN, [](const oracle::SymmetricPoint& s) { return s.cs; }, true},
        {"dpi/dN", dprofit_dN, [](const oracle::SymmetricPoint& s) { return s.profit; }, true},
    };
    std::vector<double> worst(ops.size(), 0.0);
    int failures = 0;
    for (int c = 0; c < 50; ++c) {
        const MarketParams p = random_valid(g, 0.0, false, 8);
        const long double N = p.n_platforms, b = p.beta[0], f = p.phi(0, 0), u0 = p.u0[0];
        for (std::size_t o = 0; o < ops.size(); ++o) {
            try {
                const double a = ops[o].analytic(p, Side::Buyer);
                const long double h = ops[o].wrt_n ? kFdStepN : kFdStepU0;
                const auto hi = ops[o].wrt_n ? oracle::symmetric_cne(N + h, b, f, u0) : oracle::symmetric_cne(N, b, f, u0 + h);
                const auto lo = ops[o].wrt_n ? oracle::symmetric_cne(N - h, b, f, u0) : oracle::symmetric_cne(N, b, f, u0 - h);
                const double fd = static_cast<double>((ops[o].pick(hi) - ops[o].pick(lo)) / (2.0L * h));
                worst[o] = std::max(worst[o], std::abs(a - fd) / std::max(std::abs(a), 1e-300));
            } catch (const std::exception&) {
                ++failures;
            }
        }
    }
    std::string detail = "50 points, worst relative error:";
    bool ok = failures == 0;
    for (std::size_t o = 0; o < ops.size(); ++o) {
        detail += fmt::format(" {} {:.1e}", ops[o].name, worst[o]);
        ok = ok && worst[o] < 1e-6;
    }
    return {ok, detail + fmt::format(" (tol 1e-6), failures {}", failures)};
}

// ---------------------------------------------------------------- 7
struct Clause {
    std::string name;
    Quantity q;
    Wrt w;
    int claim;  // +1 increasing, -1 decreasing
    bool needs_n3 = false;
    // Draws (N, beta, phi, u0) and reports whether the point lies in the hypothesis region.
    std::function<bool(double N, double b, double f, double u0, double z)> in_region;
};

Outcome sign_propositions() {
    auto g = rng_for(7);
    auto exists = [](double N, double b, double f) { return cne_exists(N, b, f); };
    auto coef = [](ThresholdKind k, double N, double f) { return beta_threshold(k, N, f); };
    const std::vector<Clause> clauses = {
        {"dp/du0 (i)", Quantity::Price, Wrt::OutsideUtility, -1, false,
         [&](double N, double b, double f, double, double) {
             return exists(N, b, f) && (f <= 0.0 || b > coef(ThresholdKind::GpU, N, f));
         }},
        {"dp/du0 (ii)", Quantity::Price, Wrt::OutsideUtility, +1, true,
         [&](double N, double b, double f, double, double) {
             return f > 0.0 && N >= 3.0 && exists(N, b, f) && b < coef(ThresholdKind::FpU, N, f);
         }},
        {"dpi/du0", Quantity::Profit, Wrt::OutsideUtility, -1, false,
         [&](double N, double b, double f, double, double) {
             return exists(N, b, f) && (f <= 0.0 || b > coef(ThresholdKind::GpiU, N, f));
         }},
        {"dCS/du0 (i)", Quantity::ConsumerSurplus, Wrt::OutsideUtility, +1, false,
         [&](double N, double b, double f, double, double) { return exists(N, b, f) && (f <= 0.0 || b > 2.0 * f); }},
        {"dCS/du0 (ii)", Quantity::ConsumerSurplus, Wrt::OutsideUtility, -1, false,
         [&](double N, double b, double f, double, double) {
             return f > 0.0 && exists(N, b, f) && b < eval_threshold(ThresholdKind::FcsU, N, f);
         }},
        {"dp/dN (i)", Quantity::Price, Wrt::NumPlatforms, -1, false,
         [&](double N, double b, double f, double, double) {
             if (!exists(N, b, f)) return false;
             return f <= 0.0 ? b > eval_threshold(ThresholdKind::Gp, N, f) : b > f;
         }},
        {"dp/dN (ii)", Quantity::Price, Wrt::NumPlatforms, +1, true,
         [&](double N, double b, double f, double, double) {
             return f > 0.0 && N >= 3.0 && exists(N, b, f) && b < eval_threshold(ThresholdKind::Fp, N, f);
         }},
        {"d(Nx)/dN", Quantity::Participation, Wrt::NumPlatforms, +1, false,
         [&](double N, double b, double f, double, double) {
             return exists(N, b, f) && (f <= 0.0 || b > coef(ThresholdKind::Gx, N, f));
         }},
        {"dCS/dN (i)", Quantity::ConsumerSurplus, Wrt::NumPlatforms, +1, false,
         [&](double N, double b, double f, double, double) {
             return exists(N, b, f) && (f <= 0.0 || b > coef(ThresholdKind::Gcs, N, f));
         }},
        {"dpi/dN (i)", Quantity::Profit, Wrt::NumPlatforms, -1, false,
         [&](double N, double b, double f, double u0, double z) {
             return exists(N, b, f) && z < g_piz(N, f, u0, b);
         }},
        {"dpi/dN (ii)", Quantity::Profit, Wrt::NumPlatforms, +1, false,
         [&](double N, double b, double f, double u0, double z) {
             return exists(N, b, f) && z > f_piz(N, f, u0, b) &&
                    (f <= 0.0 || b > eval_threshold(ThresholdKind::Gpi, N, f));
         }},
    };

    constexpr int kPoints = 50;
    constexpr long kMaxDraws = 400000;
    bool all_ok = true, gap_only = true;
    std::string detail;
    for (const auto& c : clauses) {
        int sampled = 0, checked = 0, mismatched = 0;
        long draws = 0;
        while (sampled < kPoints && draws < kMaxDraws) {
            ++draws;
            // Keeps N - h above 2 for the central difference in N.
            const double N = uni(g, c.needs_n3 ? 3.0 : 2.001, 12.0);
            const double f = uni(g, -2.0, 2.0), b = uni(g, 0.02, 3.0), u0 = uni(g, -3.0, 3.0);
            double z = 0.0;
            bool in = false;
            try {
                if (!cne_exists(N, b, f)) continue;
                z = solve_decoupled(Regime::CNE, b, f, N, u0);
                in = c.in_region(N, b, f, u0, z);
            } catch (const Error&) {
                continue;
            }
            if (!in) continue;
            ++sampled;
            MarketParams p;
            p.n_platforms = N;
            p.beta = {b, b};
            p.phi << f, 0.0, 0.0, f;
            p.u0 = {u0, u0};
            try {
                const double h = c.w == Wrt::OutsideUtility ? kFdStepU0 : kFdStepN;
                const double d = fd_derivative(c.q, c.w, p, Side::Buyer, h);
                if (std::abs(d) <= 1e-8) continue;
                ++checked;
                if ((d > 0.0 ? 1 : -1) != c.claim) ++mismatched;
            } catch (const Error&) {
                ++mismatched;
            }
        }
        const bool ok = sampled == kPoints && mismatched == 0;
        const bool empty = sampled == 0;
        if (!ok) {
            all_ok = false;
            if (!empty) gap_only = false;
        }
        detail += fmt::format("\n    {:<13} sampled {:>2}/{} checked {:>2} mismatches {}{}", c.name, sampled, kPoints,
                              checked, mismatched, empty ? " (hypothesis region empty after 400000 draws)" : "");
    }
    Outcome o{all_ok, "11 clauses, FD sign vs claimed sign where |d| > 1e-8:" + detail};
    o.known_gap = !all_ok && gap_only;
    return o;
}

// ---------------------------------------------------------------- 8
Outcome limits() {
    std::string detail;
    bool ok = true;
    struct Case {
        double N, b, f;
    };
    for (const Case c : {Case{2, 1.0, 0.0}, Case{3, 1.0, 0.5}, Case{4, 0.8, -0.6}}) {
        MarketParams p;
        p.n_platforms = c.N;
        p.beta = {c.b, c.b};
        p.phi << c.f, 0.0, 0.0, c.f;
        const double p_u = c.N * c.b / (c.N - 1) - c.f / (c.N - 1);
        const auto checks = outside_option_limit_check(p, 40.0);
        const double e_u = std::abs(checks[0].points[0].observed - p_u);
        const double e_E = std::abs(checks[1].points[0].observed - c.b);
        const double pi = checks[1].profit_at_large_u0;
        ok = ok && e_u < 1e-3 && e_E < 1e-3 && pi < 1e-3 && checks[0].points[0].failure.empty() &&
             checks[1].points[0].failure.empty();
        detail += fmt::format(" [N={} beta={} phi={}: |p-p_u| {:.1e}, |p-p_E| {:.1e}, pi(+40) {:.1e}]", c.N, c.b, c.f,
                              e_u, e_E, pi);
    }
    MarketParams big = base_case();
    big.n_platforms = 1e4;
    const auto eq = solve_cne(big);
    const double ep = std::abs(eq.prices[0] - 1.0), ex = std::abs(eq.participation[0] - 1.0);
    ok = ok && ep < 1e-2 && ex < 1e-2;
    detail += fmt::format(" [N=1e4: |p-beta| {:.1e}, |Nx-1| {:.1e}] (tol 1e-3 / 1e-2)", ep, ex);
    return {ok, detail};
}

// ---------------------------------------------------------------- 9
Outcome thresholds() {
    struct Exact {
        const char* name;
        double value, expect;
    };
    const std::vector<Exact> exact = {
        {"f(4)", eval_threshold(ThresholdKind::F_existence, 4), 0.375},
        {"g_x(2)", eval_threshold(ThresholdKind::Gx, 2), 5.0 / 6.0},
        {"g_CS(2)", eval_threshold(ThresholdKind::Gcs, 2), 15.0 / 16.0},
        {"h_pi(2)", eval_threshold(ThresholdKind::Hpi, 2), 0.75},
        {"g_pu(2)", eval_threshold(ThresholdKind::GpU, 2), (3.0 + std::sqrt(5.0)) / 4.0},
        {"f_pu(2)", eval_threshold(ThresholdKind::FpU, 2), 0.5},
        {"g_piu(2)", eval_threshold(ThresholdKind::GpiU, 2), std::sqrt(1.0 / 8.0) + 0.5},
        {"gamma(4,0,-1)", eval_threshold(ThresholdKind::Gamma, 4, 0.0, -1.0), 0.8},
        {"gammaC(4,0,-1)", eval_threshold(ThresholdKind::GammaC, 4, 0.0, -1.0), 0.2},
    };
    double worst_exact = 0.0;
    for (const auto& e : exact) worst_exact = std::max(worst_exact, std::abs(e.value - e.expect));

    double worst_res = 0.0, worst_iso = 0.0;
    int evaluated = 0, mismatched = 0;
    for (ThresholdKind k : {ThresholdKind::Gp, ThresholdKind::Fp, ThresholdKind::Fcs, ThresholdKind::Gpi,
                            ThresholdKind::Fpi, ThresholdKind::FcsU}) {
        for (double N : {2.0, 3.0, 4.0, 7.0, 10.0, 50.0}) {
            for (double f : {-2.0, -1.0, -0.3, 0.3, 1.0, 2.0}) {
                if (k == ThresholdKind::Fp && N == 3.0) continue;  // fixed at 2/3 phi, no cubic
                double v;
                try {
                    v = eval_threshold(k, N, f);
                } catch (const InvalidArgument&) {
                    continue;  // outside the threshold's domain (sign of phi or N range)
                }
                ++evaluated;
                const Cubic c = threshold_cubic(k, N, f);
                worst_res = std::max(worst_res, std::abs(c(v)) / c.scale());
                const double span = 20.0 * std::max(1.0, std::abs(f));
                const auto roots = oracle::all_roots([&](double b) { return c(b); }, -span, span, 400000);
                double best = INFINITY;
                for (double r : roots) best = std::min(best, std::abs(r - v));
                worst_iso = std::max(worst_iso, best);
                if (!(best < 1e-9)) ++mismatched;
            }
        }
    }
    return {worst_exact <= 1e-12 && worst_res < 1e-9 && mismatched == 0,
            fmt::format("9 closed forms worst error {:.1e} (tol 1e-12); {} cubic thresholds, residual worst {:.1e} "
                        "(tol 1e-9), bisection isolator gap worst {:.1e}",
                        worst_exact, evaluated, worst_res, worst_iso)};
}

// ---------------------------------------------------------------- 10
Outcome figures() {
    using K = ClassifierSpec::Kind;
    struct Panel {
        const char* name;
        ClassifierSpec c;
        double N, u0;
    };
    const std::vector<Panel> panels = {
        {"fig1", {K::Existence}, 4, 0.0},
        {"fig2 u0=-1", {K::SignZ}, 4, -1.0},
        {"fig2 u0=0.5", {K::SignZ}, 4, 0.5},
        {"fig3 u0=-1", {K::SignZ}, 200, -1.0},
        {"fig3 u0=1", {K::SignZ}, 200, 1.0},
        {"fig4", {K::Direction, Regime::CNE, Quantity::Price, Wrt::NumPlatforms}, 4, 0.0},
        {"fig5", {K::Direction, Regime::CNE, Quantity::Participation, Wrt::NumPlatforms}, 4, 0.0},
        {"fig6", {K::Direction, Regime::CNE, Quantity::ConsumerSurplus, Wrt::NumPlatforms}, 4, 0.0},
    };
    bool ok = true;
    std::string detail = "200x200 grids, agreement on cells with margin > 0.01:";
    for (const auto& p : panels) {
        GridSpec spec;
        spec.N = p.N;
        spec.u0 = p.u0;
        const auto grid = region_grid(p.c, spec, true);
        const auto a = grid_agreement(grid, 0.01);
        ok = ok && a.fraction() >= 0.99 && a.total > 0;
        detail += fmt::format(" {} {:.4f} ({}/{});", p.name, a.fraction(), a.agree, a.total);
    }
    return {ok, detail + " (need >= 0.99)"};
}

// ---------------------------------------------------------------- 11
Outcome monte_carlo() {
    MarketParams p;
    p.n_platforms = 3;
    p.beta = {1.0, 0.7};
    p.mu = {0.3, -0.2};
    p.phi << 0.2, 0.1, -0.1, 0.3;
    p.u0 = {0.1, -0.3};
    PriceProfile prices;
    prices.p[0] = {0.8, 1.0, 1.3};
    prices.p[1] = {0.2, 0.5, 0.1};
    const auto fp = share_fixed_point(p, prices);
    const long samples = 1000000;
    const auto mc = monte_carlo_shares(p, prices, fp.state, samples, 20240611);
    double worst_share = 0.0;
    for (int k = 0; k < 2; ++k)
        for (int i = 0; i <= 3; ++i)
            worst_share = std::max(worst_share, std::abs(mc.freq[k][i] - fp.state.x[k][i]) / mc.stderr_[k][i]);

    double worst_emax = 0.0;
    for (int k = 0; k < 2; ++k) {
        const auto m = monte_carlo_emax(4, p.mu[k], p.beta[k], samples, 20240612 + k);
        const double exact = p.mu[k] + p.beta[k] * (std::log(4.0) + kEulerGamma);
        worst_emax = std::max(worst_emax, std::abs(m.mean - exact) / m.stderr_);
    }
    return {worst_share <= 3.0 && worst_emax <= 3.0,
            fmt::format("1e6 draws: shares worst {:.2f} SE, E[max] worst {:.2f} SE (limit 3 SE)", worst_share,
                        worst_emax)};
}

// ---------------------------------------------------------------- 12
int run_cli(const std::string& args) {
    const std::string cmd = std::string(PLATFORM_EQ_CLI) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Outcome determinism() {
    const fs::path root = fs::temp_directory_path() / "platform_eq_acceptance_12";
    fs::remove_all(root);
    fs::create_directories(root);
    const fs::path cfg = root / "run.yaml";
    std::ofstream(cfg) << "market:\n  n_platforms: 3\n  beta: [1.0, 0.8]\n  phi: [[0.3, 0.03], [-0.02, -0.4]]\n"
                          "  u0: [0.5, -0.5]\nsweep:\n  axes:\n    - {param: u0_b, from: -1, to: 1, step: 0.25}\n"
                          "    - {param: N, values: [2, 3, 5]}\nfigure: {id: fig6, resolution: [60, 40]}\n"
                          "verify: {mc_samples: 50000, starts: 5}\nseed: 1234\n";
    const std::vector<std::pair<std::string, std::vector<std::string>>> commands = {
        {"solve", {"solve.csv"}},     {"compare", {"compare.csv"}}, {"classify", {"classify.csv"}},
        {"sweep", {"sweep.csv"}},     {"verify", {"verify.csv"}},   {"figures", {"fig6.csv"}},
    };
    int compared = 0, differing = 0, errors = 0;
    for (const auto& [cmd, files] : commands) {
        for (const char* run : {"a", "b"}) {
            const std::string jobs = std::string(run) == "a" ? "1" : "3";
            if (run_cli(fmt::format("{} --config {} --out {} --seed 1234 --jobs {}", cmd, cfg.string(),
                                    (root / run).string(), jobs)) != 0)
                ++errors;
        }
        for (const auto& f : files) {
            ++compared;
            const std::string a = slurp(root / "a" / f), b = slurp(root / "b" / f);
            if (a.empty() || a != b) ++differing;
        }
    }
    return {errors == 0 && differing == 0,
            fmt::format("6 commands run twice (1 and 3 threads), {} CSV files compared, {} differ, {} non-zero exits",
                        compared, differing, errors)};
}

}  // namespace

int main(int argc, char** argv) {
    int only = 0;
    for (int i = 1; i < argc; ++i) {
        const std::string a = argv[i];
        if (a == "--only" && i + 1 < argc) {
            only = std::atoi(argv[++i]);
        } else {
            fmt::print(stderr, "usage: acceptance [--only N]\n");
            return 2;
        }
    }
    const std::vector<Criterion> criteria = {
        {1, "stage-2 fixed point", 10, stage2},
        {2, "contraction uniqueness", 30, contraction},
        {3, "solver fidelity", 20, solver_fidelity},
        {4, "Nash certification", 120, nash},
        {5, "competition vs collusion", 30, collusion},
        {6, "analytic comparative statics", 60, analytic_statics},
        {7, "sign propositions", 180, sign_propositions},
        {8, "limits", 10, limits},
        {9, "threshold arithmetic", 5, thresholds},
        {10, "figure reproduction", 120, figures},
        {11, "Monte Carlo demand", 30, monte_carlo},
        {12, "determinism", 120, determinism},
    };
    bool any_fail = false, hard_fail = false;
    for (const auto& c : criteria) {
        if (only && c.id != only) continue;
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const bool in_time = secs < c.time_limit_s;
        const bool pass = o.pass && in_time;
        fmt::print("criterion {:>2} {}: {} | {} | {:.2f}s (limit {:.0f}s)\n", c.id, pass ? "PASS" : "FAIL", c.name,
                   o.detail, secs, c.time_limit_s);
        std::fflush(stdout);
        if (!pass) {
            any_fail = true;
            if (!(o.known_gap && in_time)) hard_fail = true;
        }
    }
    if (!any_fail) return 0;
    return hard_fail ? 1 : 77;
}
