#include "commands.hpp"

#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <sstream>

#include <fmt/format.h>

#include "csv.hpp"
#include "platform_eq/demand.hpp"
#include "platform_eq/equilibrium.hpp"
#include "platform_eq/regions.hpp"
#include "platform_eq/statics.hpp"
#include "platform_eq/verify.hpp"
#include "svg.hpp"

namespace peq::cli {

namespace {

std::vector<Regime> regimes_of(RegimeChoice c) {
    switch (c) {
        case RegimeChoice::Cne: return {Regime::CNE};
        case RegimeChoice::Ce: return {Regime::CE};
        case RegimeChoice::Both: break;
    }
    return {Regime::CNE, Regime::CE};
}

SolveOptions solve_options(const RunConfig& cfg) {
    SolveOptions o;
    o.tol = cfg.tol;
    return o;
}

const std::vector<std::string> kInputColumns = {"N",      "beta_b", "beta_s", "mu_b",   "mu_s",  "phi_bb",
                                                "phi_bs", "phi_sb", "phi_ss", "u0_b",   "u0_s"};

std::vector<std::string> input_cells(const MarketParams& p) {
    return {cell(p.n_platforms), cell(p.beta[0]),  cell(p.beta[1]),  cell(p.mu[0]),
            cell(p.mu[1]),       cell(p.phi(0, 0)), cell(p.phi(0, 1)), cell(p.phi(1, 0)),
            cell(p.phi(1, 1)),   cell(p.u0[0]),    cell(p.u0[1])};
}

std::vector<std::string> concat(std::vector<std::string> a, const std::vector<std::string>& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
}

void emit(const RunConfig& cfg, std::ostream& out, const std::string& file, const CsvTable& table,
          const std::vector<std::string>& extra = {}) {
    std::ostringstream ss;
    table.write(ss, cfg, extra);
    write_file(cfg.out_dir, file, ss.str());
    out << ss.str();
}

}  // namespace

int cmd_solve(const RunConfig& cfg, std::ostream& out) {
    CsvTable t(concat({"regime", "side"}, concat(kInputColumns, {"z", "p", "p_alt", "x", "Nx", "profit_side",
                                                                 "profit_platform", "profit_aggregate", "cs",
                                                                 "foc_residual", "existence_warning"})));
    for (Regime r : regimes_of(cfg.regime)) {
        const SymmetricEquilibrium eq = solve(r, cfg.market, solve_options(cfg));
        for (Side s : kSides) {
            const int k = idx(s);
            t.add_row(concat({regime_name(r), side_name(s)},
                             concat(input_cells(cfg.market),
                                    {cell(eq.z[k]), cell(eq.prices[k]), cell(eq.price_alt[k]), cell(eq.shares[k]),
                                     cell(eq.participation[k]), cell(eq.profit_per_side[k]), cell(eq.total_profit),
                                     cell(eq.aggregate_profit(cfg.market.N())), cell(eq.consumer_surplus[k]),
                                     cell(eq.foc_residual), cell(eq.existence_warning)})));
        }
    }
    emit(cfg, out, "solve.csv", t);
    return kExitOk;
}

int cmd_compare(const RunConfig& cfg, std::ostream& out) {
    const RegimeComparison c = compare_regimes(cfg.market, solve_options(cfg));
    CsvTable t({"side", "z_cne", "z_ce", "dz", "Nx_cne", "Nx_ce", "dNx", "p_cne", "p_ce", "dp", "externality_term",
                "heterogeneity_term", "decomposition_residual", "profit_cne", "profit_ce", "cs_cne", "cs_ce"});
    for (Side s : kSides) {
        const int k = idx(s);
        // p* - p^C = Phi (x* - x^C) - beta (z* - z^C), so the three terms sum to zero.
        const double resid = c.d_price[k] + c.externality_term[k] + c.heterogeneity_term[k];
        t.add_row({side_name(s), cell(c.cne.z[k]), cell(c.ce.z[k]), cell(c.dz[k]), cell(c.cne.participation[k]),
                   cell(c.ce.participation[k]), cell(c.d_participation[k]), cell(c.cne.prices[k]),
                   cell(c.ce.prices[k]), cell(c.d_price[k]), cell(c.externality_term[k]),
                   cell(c.heterogeneity_term[k]), cell(resid), cell(c.cne.total_profit), cell(c.ce.total_profit),
                   cell(c.cne.consumer_surplus[k]), cell(c.ce.consumer_surplus[k])});
    }
    emit(cfg, out, "compare.csv", t);
    return kExitOk;
}

int cmd_classify(const RunConfig& cfg, std::ostream& out) {
    const MarketParams& p = cfg.market;
    p.validate();
    std::optional<SymmetricEquilibrium> cne;
    try {
        cne = solve_cne(p, solve_options(cfg));
    } catch (const SolverError&) {
    }

    CsvTable t({"side", "classifier", "verdict", "margin", "thresholds", "reason", "derivative"});
    auto add = [&](Side s, const std::string& name, const std::function<RegionLabel()>& f,
                   std::optional<double> derivative) {
        RegionLabel l;
        try {
            l = f();
        } catch (const Error& e) {
            l.reason = e.what();
        }
        std::string th;
        for (const auto& [kind, value] : l.thresholds_used)
            th += (th.empty() ? "" : ";") + std::string(threshold_name(kind)) + "=" + cell(value);
        t.add_row({side_name(s), name, verdict_name(l.verdict), cell(l.margin), cell(th), cell(l.reason),
                   derivative ? cell(*derivative) : std::string()});
    };

    const std::pair<Quantity, Wrt> directions[] = {
        {Quantity::Price, Wrt::OutsideUtility},          {Quantity::Profit, Wrt::OutsideUtility},
        {Quantity::ConsumerSurplus, Wrt::OutsideUtility}, {Quantity::Price, Wrt::NumPlatforms},
        {Quantity::Participation, Wrt::NumPlatforms},     {Quantity::ConsumerSurplus, Wrt::NumPlatforms},
        {Quantity::Profit, Wrt::NumPlatforms},
    };
    for (Side s : kSides) {
        for (Regime r : {Regime::CNE, Regime::CE}) {
            add(s, fmt::format("existence_{}", regime_name(r)), [&] { return classify_existence(r, p, s); },
                std::nullopt);
            add(s, fmt::format("sign_z_{}", regime_name(r)), [&] { return classify_sign_z(r, p, s); }, std::nullopt);
        }
        const std::optional<double> z = cne ? std::optional<double>(cne->z[idx(s)]) : std::nullopt;
        for (const auto& [q, w] : directions) {
            std::optional<double> d;
            if (cne) {
                try {
                    if (p.cross_free()) d = analytic_derivative(q, w, p, s);
                    if (!d) d = fd_derivative(q, w, p, s, w == Wrt::OutsideUtility ? kFdStepU0 : kFdStepN);
                } catch (const Error&) {
                }
            }
            add(s, fmt::format("d{}_d{}", quantity_name(q), wrt_name(w)),
                [&] { return classify_direction(q, w, p, s, z); }, d);
        }
    }
    emit(cfg, out, "classify.csv", t);
    return kExitOk;
}

namespace {

struct SweepPoint {
    MarketParams params;
    std::vector<double> axis_values;
};

struct DerivSpec {
    const char* column;
    Quantity q;
    Wrt w;
};

const DerivSpec kSweepDerivs[] = {
    {"dp_du0", Quantity::Price, Wrt::OutsideUtility},
    {"dprofit_du0", Quantity::Profit, Wrt::OutsideUtility},
    {"dcs_du0", Quantity::ConsumerSurplus, Wrt::OutsideUtility},
    {"dp_dN", Quantity::Price, Wrt::NumPlatforms},
    {"dNx_dN", Quantity::Participation, Wrt::NumPlatforms},
    {"dcs_dN", Quantity::ConsumerSurplus, Wrt::NumPlatforms},
    {"dprofit_dN", Quantity::Profit, Wrt::NumPlatforms},
};

std::vector<std::string> sweep_row(const SweepPoint& pt, Regime r, Side s, const SolveOptions& opt) {
    const int k = idx(s);
    std::vector<std::string> row;
    for (double v : pt.axis_values) row.push_back(cell(v));
    row.push_back(regime_name(r));
    const std::size_t n_values = 9 + std::size(kSweepDerivs) + 3;
    try {
        pt.params.validate();
        const SymmetricEquilibrium eq = solve(r, pt.params, opt);
        row.insert(row.end(), {cell(eq.z[k]), cell(eq.prices[k]), cell(eq.shares[k]), cell(eq.participation[k]),
                               cell(eq.profit_per_side[k]), cell(eq.aggregate_profit(pt.params.N())),
                               cell(eq.consumer_surplus[k]), cell(eq.foc_residual), cell(eq.existence_warning)});
        const bool analytic = r == Regime::CNE && pt.params.cross_free();
        std::string errors;
        for (const auto& d : kSweepDerivs) {
            try {
                std::optional<double> v;
                if (analytic) v = analytic_derivative(d.q, d.w, pt.params, s);
                if (!v) v = fd_derivative(d.q, d.w, pt.params, s, d.w == Wrt::OutsideUtility ? kFdStepU0 : kFdStepN, r);
                row.push_back(cell(*v));
            } catch (const Error& e) {
                row.push_back("nan");
                errors += (errors.empty() ? "" : "; ") + std::string(d.column) + ": " + e.what();
            }
        }
        row.push_back(analytic ? "analytic" : "fd");
        std::string verdict;
        try {
            verdict = verdict_name(classify_sign_z(r, pt.params, s).verdict);
        } catch (const Error& e) {
            verdict = "indeterminate";
        }
        row.push_back(verdict);
        row.push_back(cell(errors));
    } catch (const Error& e) {
        for (std::size_t i = 0; i + 1 < n_values; ++i) row.push_back("nan");
        row.push_back(cell(std::string(e.what())));
    }
    return row;
}

}  // namespace

int cmd_sweep(const RunConfig& cfg, std::ostream& out) {
    if (cfg.sweep.empty() || cfg.sweep.size() > 2) throw ConfigError("sweep needs one or two axes");
    std::vector<SweepPoint> points;
    const auto& a0 = cfg.sweep[0];
    for (double v0 : a0.values) {
        if (cfg.sweep.size() == 1) {
            SweepPoint pt{cfg.market, {v0}};
            apply_param(pt.params, a0.param, v0);
            points.push_back(pt);
            continue;
        }
        for (double v1 : cfg.sweep[1].values) {
            SweepPoint pt{cfg.market, {v0, v1}};
            apply_param(pt.params, a0.param, v0);
            apply_param(pt.params, cfg.sweep[1].param, v1);
            points.push_back(pt);
        }
    }

    std::vector<std::string> cols;
    for (const auto& a : cfg.sweep) cols.push_back(a.param);
    cols.insert(cols.end(), {"regime", "z", "p", "x", "Nx", "profit_side", "profit_aggregate", "cs", "foc_residual",
                             "existence_warning"});
    for (const auto& d : kSweepDerivs) cols.push_back(d.column);
    cols.insert(cols.end(), {"derivative_source", "sign_z_verdict", "error"});

    const std::vector<Regime> regimes = regimes_of(cfg.regime);
    const long n_rows = static_cast<long>(points.size() * regimes.size());
    std::vector<std::vector<std::string>> rows(n_rows);
    const SolveOptions opt = solve_options(cfg);
#pragma omp parallel for schedule(dynamic, 1)
    for (long i = 0; i < n_rows; ++i) {
        const std::size_t pi = static_cast<std::size_t>(i) / regimes.size();
        rows[i] = sweep_row(points[pi], regimes[i % regimes.size()], cfg.side, opt);
    }

    CsvTable t(cols);
    for (auto& r : rows) t.add_row(std::move(r));
    std::string axes;
    for (const auto& a : cfg.sweep) axes += fmt::format(" {}[{}]", a.param, a.values.size());
    emit(cfg, out, "sweep.csv", t, {fmt::format("sweep side={} axes:{}", side_name(cfg.side), axes)});
    return kExitOk;
}

int cmd_verify(const RunConfig& cfg, std::ostream& out) {
    const MarketParams& p = cfg.market;
    p.validate();
    if (!p.integer_n()) throw ConfigError("verify needs an integer number of platforms");
    const VerifyConfig& v = cfg.verify;
    CsvTable t({"regime", "p_b", "p_s", "z_b", "z_s", "base_profit", "best_gain", "gain_tolerance",
                "best_deviation_p_b", "best_deviation_p_s", "deviation_certified", "soc_cne_diag_b",
                "soc_cne_diag_s", "ce_hessian_negative_definite", "numeric_hessian_negative_definite", "soc_passed",
                "contraction_margin", "multistart_distinct", "mc_max_share_z", "passed"});
    bool all_ok = true;
    for (Regime r : regimes_of(cfg.regime)) {
        SymmetricEquilibrium eq = solve(r, p, solve_options(cfg));
        if (v.perturb != 0.0) eq.prices += Vec2::Constant(v.perturb);

        std::string gain = "nan", tol_cell = "nan", dev_b = "nan", dev_s = "nan", certified = "";
        bool dev_ok = true;
        if (r == Regime::CNE) {
            const DeviationReport rep = verify_nash(p, eq, v.radius, v.grid);
            dev_ok = rep.certified(v.tolerance);
            gain = cell(rep.best_gain);
            tol_cell = cell(v.tolerance * std::max(1.0, std::abs(eq.total_profit)));
            dev_b = cell(rep.best_deviation_prices[0]);
            dev_s = cell(rep.best_deviation_prices[1]);
            certified = cell(dev_ok);
        }
        const SOCReport soc = soc_report(p, eq);
        const bool soc_ok = soc.passed(r, p.cross_free());

        // Stage-2 diagnostics at the (possibly perturbed) prices; reported, not gating.
        const int n = p.n_int();
        const PriceProfile prices = PriceProfile::symmetric(n, eq.prices);
        const MultiStartResult ms = share_fixed_point_multistart(p, prices, v.starts, cfg.seed);
        const FixedPointResult fp = share_fixed_point(p, prices);
        const MonteCarloShares mc = monte_carlo_shares(p, prices, fp.state, v.mc_samples, cfg.seed);
        double worst = 0.0;
        for (int k = 0; k < 2; ++k)
            for (int i = 0; i <= n; ++i) {
                const double se = std::max(mc.stderr_[k][i], 1e-300);
                worst = std::max(worst, std::abs(mc.freq[k][i] - fp.state.x[k][i]) / se);
            }

        const bool ok = dev_ok && soc_ok;
        all_ok = all_ok && ok;
        t.add_row({regime_name(r), cell(eq.prices[0]), cell(eq.prices[1]), cell(eq.z[0]), cell(eq.z[1]),
                   cell(eq.total_profit), gain, tol_cell, dev_b, dev_s, certified, cell(soc.cne_diag[0]),
                   cell(soc.cne_diag[1]), cell(soc.ce_negative_definite), cell(soc.numeric_negative_definite),
                   cell(soc_ok), cell(contraction_margin(p)), cell(ms.multiple), cell(worst), cell(ok)});
    }
    emit(cfg, out, "verify.csv", t,
         {fmt::format("verify radius={} grid={} tolerance={} perturb={} starts={} mc_samples={}", cell(v.radius),
                      v.grid, cell(v.tolerance), cell(v.perturb), v.starts, v.mc_samples)});
    return all_ok ? kExitOk : kExitVerify;
}

namespace {

struct FigureDef {
    ClassifierSpec classifier;
    double N;
    std::vector<double> u0;
    std::string title;
    std::vector<SvgLegendEntry> legend;
};

FigureDef figure_def(const std::string& id, Regime regime) {
    using K = ClassifierSpec::Kind;
    const std::string blue = verdict_color(Verdict::Positive), red = verdict_color(Verdict::Negative);
    const std::string grey = verdict_color(Verdict::Indeterminate);
    const std::string rn = regime == Regime::CE ? "collusive" : "competitive";
    FigureDef d;
    if (id == "fig1") {
        d = {{K::Existence, regime}, 4.0, {0.0}, "Existence of a unique symmetric " + rn + " equilibrium", {}};
        d.legend = {{blue, "existence condition holds: unique symmetric " + rn + " equilibrium"},
                    {red, "existence condition fails"}};
    } else if (id == "fig2" || id == "fig3") {
        d = {{K::SignZ, regime}, id == "fig2" ? 4.0 : 200.0, id == "fig2" ? std::vector<double>{-1.0, 0.5}
                                                                          : std::vector<double>{-1.0, 1.0},
             "Sign of z in the " + rn + " equilibrium", {}};
        d.legend = {{blue, "sign-of-z proposition: z > 0"},
                    {red, "sign-of-z proposition: z < 0"},
                    {grey, "outside the existence region"}};
    } else if (id == "fig4") {
        d = {{K::Direction, Regime::CNE, Quantity::Price, Wrt::NumPlatforms}, 4.0, {0.0}, "Sign of dp*/dN", {}};
        d.legend = {{blue, "entry-price proposition: prices increase with N"},
                    {red, "entry-price proposition: prices decrease with N"},
                    {grey, "not signed by the proposition"}};
    } else if (id == "fig5") {
        d = {{K::Direction, Regime::CNE, Quantity::Participation, Wrt::NumPlatforms}, 4.0, {0.0},
             "Region of positive d(Nx*)/dN", {}};
        d.legend = {{blue, "participation proposition: Nx* increases with N"},
                    {grey, "not signed by the proposition"}};
    } else if (id == "fig6") {
        d = {{K::Direction, Regime::CNE, Quantity::ConsumerSurplus, Wrt::NumPlatforms}, 4.0, {0.0},
             "Sign of dCS*/dN", {}};
        d.legend = {{blue, "surplus-entry proposition: CS* increases with N"},
                    {red, "surplus-entry proposition: CS* decreases with N"},
                    {grey, "not signed by the proposition"}};
    } else {
        throw ConfigError("unknown figure id '" + id + "' (expected fig1..fig6)");
    }
    return d;
}

}  // namespace

int cmd_figures(const RunConfig& cfg, std::ostream& out) {
    const FigureConfig& fc = cfg.figure;
    const Regime regime = cfg.regime == RegimeChoice::Ce ? Regime::CE : Regime::CNE;
    const FigureDef def = figure_def(fc.id, regime);
    const double N = fc.n_platforms.value_or(def.N);
    const std::vector<double> panels_u0 = fc.u0_panels.empty() ? def.u0 : fc.u0_panels;
    if (!(N >= 2.0)) throw ConfigError("figure.n_platforms must be >= 2");

    std::vector<SvgPanel> panels;
    for (std::size_t pi = 0; pi < panels_u0.size(); ++pi) {
        GridSpec spec;
        spec.phi_min = fc.phi_min;
        spec.phi_max = fc.phi_max;
        spec.beta_min = fc.beta_min;
        spec.beta_max = fc.beta_max;
        spec.n_phi = fc.n_phi;
        spec.n_beta = fc.n_beta;
        spec.N = N;
        spec.u0 = panels_u0[pi];
        RegionGrid grid = region_grid(def.classifier, spec, false);

        CsvTable t({"phi", "beta", "verdict", "margin"});
        for (int j = 0; j < spec.n_beta; ++j)
            for (int i = 0; i < spec.n_phi; ++i) {
                const RegionLabel& l = grid.at(i, j);
                t.add_row({cell(grid.phi_at(i)), cell(grid.beta_at(j)), verdict_name(l.verdict), cell(l.margin)});
            }
        const std::string name = panels_u0.size() == 1 ? fc.id : fmt::format("{}_panel{}", fc.id, pi + 1);
        std::ostringstream ss;
        t.write(ss, cfg,
                {fmt::format("figure {} regime={} N={} u0={} grid={}x{}", fc.id, regime_name(regime), cell(N),
                             cell(spec.u0), spec.n_phi, spec.n_beta)});
        write_file(cfg.out_dir, name + ".csv", ss.str());
        out << "wrote " << name << ".csv\n";

        panels.push_back({fmt::format("N = {:g}, u0 = {:g}", N, spec.u0), std::move(grid),
                          figure_curves(def.classifier, spec)});
    }
    write_file(cfg.out_dir, fc.id + ".svg", render_region_svg(def.title, panels, def.legend, fc.width, fc.height));
    out << "wrote " << fc.id << ".svg\n";
    return kExitOk;
}

int run_command(const std::string& name, const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    static const std::map<std::string, int (*)(const RunConfig&, std::ostream&)> table = {
        {"solve", cmd_solve},   {"compare", cmd_compare}, {"classify", cmd_classify},
        {"sweep", cmd_sweep},   {"verify", cmd_verify},   {"figures", cmd_figures},
    };
    const auto it = table.find(name);
    if (it == table.end()) {
        err << "error: unknown command '" << name << "'\n";
        return kExitConfig;
    }
    try {
        return it->second(cfg, out);
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const InvalidArgument& e) {
        err << "invalid parameters: " << e.what() << '\n';
        return kExitConfig;
    } catch (const Error& e) {
        err << "solver error: " << e.what() << '\n';
        return kExitSolver;
    }
}

}  // namespace peq::cli
