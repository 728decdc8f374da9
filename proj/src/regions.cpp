#include "platform_eq/regions.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>

#include "platform_eq/verify.hpp"

namespace peq {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

enum class PhiSign { NonPositive, Negative, Positive };
enum class Branch { Largest, Unique };

struct CubicKind {
    ThresholdKind kind;
    PhiSign sign;
    Branch branch;
};

constexpr std::array<CubicKind, 6> kCubicKinds{{
    {ThresholdKind::Gp, PhiSign::NonPositive, Branch::Largest},
    {ThresholdKind::Fp, PhiSign::Positive, Branch::Largest},
    {ThresholdKind::Fcs, PhiSign::Positive, Branch::Largest},
    {ThresholdKind::Gpi, PhiSign::Positive, Branch::Unique},
    {ThresholdKind::Fpi, PhiSign::Negative, Branch::Largest},
    {ThresholdKind::FcsU, PhiSign::Positive, Branch::Unique},
}};

const CubicKind* find_cubic(ThresholdKind k) {
    for (const auto& c : kCubicKinds)
        if (c.kind == k) return &c;
    return nullptr;
}

double need(std::optional<double> v, const char* what) {
    if (!v) throw InvalidArgument(std::string("threshold needs ") + what);
    return *v;
}

double cubic_threshold(const CubicKind& ck, double N, double phi) {
    if (phi == 0.0 && ck.sign != PhiSign::Negative) return 0.0;
    const bool ok = (ck.sign == PhiSign::NonPositive && phi <= 0.0) || (ck.sign == PhiSign::Negative && phi < 0.0) ||
                    (ck.sign == PhiSign::Positive && phi > 0.0);
    if (!ok) throw InvalidArgument("threshold undefined here");
    if (ck.kind == ThresholdKind::Fp) {
        if (N < 3.0) throw InvalidArgument("threshold undefined here");
        if (N == 3.0) return 2.0 / 3.0 * phi;
    }
    std::vector<double> roots = solve_cubic_real(threshold_cubic(ck.kind, N, phi));
    if (roots.empty()) throw InvalidArgument("threshold undefined here");
    if (ck.branch == Branch::Unique) {
        const double scale = std::max(1.0, std::abs(roots.back()));
        if (roots.back() - roots.front() > 1e-9 * scale) throw InvalidArgument("threshold undefined here");
    }
    return roots.back();
}

// Collects thresholds and the smallest distance to any of them.
struct LabelBuilder {
    double beta;
    RegionLabel label;
    double margin = kInf;

    void use(ThresholdKind k, double beta_value) {
        label.thresholds_used.emplace_back(k, beta_value);
        if (std::isfinite(beta_value)) margin = std::min(margin, std::abs(beta - beta_value));
    }
    // z-space thresholds only tighten the margin; they have no ThresholdKind.
    void use_z(double z_threshold, double z_star) {
        if (std::isfinite(z_threshold)) margin = std::min(margin, std::abs(z_star - z_threshold));
    }
    RegionLabel finish(Verdict v, std::string reason = {}) {
        label.margin = margin;
        label.reason = std::move(reason);
        label.verdict = margin < kBoundaryTol ? Verdict::Boundary : v;
        return label;
    }
};

struct SideParams {
    double N, beta, phi, u0;
};

SideParams side_params(const MarketParams& p, Side s) {
    const int k = idx(s);
    return {p.N(), p.beta[k], p.phi(k, k), p.u0[k]};
}

}  // namespace

const char* threshold_name(ThresholdKind k) {
    switch (k) {
        case ThresholdKind::F_existence: return "f";
        case ThresholdKind::CE_existence: return "f_C";
        case ThresholdKind::Gamma: return "gamma";
        case ThresholdKind::GammaC: return "gamma_C";
        case ThresholdKind::UTilde: return "u_tilde";
        case ThresholdKind::UTildeC: return "u_tilde_C";
        case ThresholdKind::GpU: return "g_pu";
        case ThresholdKind::FpU: return "f_pu";
        case ThresholdKind::GpiU: return "g_piu";
        case ThresholdKind::FcsU: return "f_csu";
        case ThresholdKind::Gp: return "g_p";
        case ThresholdKind::Fp: return "f_p";
        case ThresholdKind::Gx: return "g_x";
        case ThresholdKind::Gcs: return "g_cs";
        case ThresholdKind::Fcs: return "f_cs";
        case ThresholdKind::Gpi: return "g_pi";
        case ThresholdKind::Hpi: return "h_pi";
        case ThresholdKind::Fpi: return "f_pi";
        case ThresholdKind::TwoPhi: return "2phi";
        case ThresholdKind::Phi: return "phi";
    }
    return "?";
}

bool threshold_is_coefficient(ThresholdKind k) {
    switch (k) {
        case ThresholdKind::F_existence:
        case ThresholdKind::CE_existence:
        case ThresholdKind::GpU:
        case ThresholdKind::FpU:
        case ThresholdKind::GpiU:
        case ThresholdKind::Gx:
        case ThresholdKind::Gcs:
        case ThresholdKind::Hpi:
            return true;
        default:
            return false;
    }
}

bool threshold_is_cubic(ThresholdKind k) { return find_cubic(k) != nullptr; }

Cubic threshold_cubic(ThresholdKind kind, double N, double f) {
    const double N2 = N * N, N3 = N2 * N;
    switch (kind) {
        case ThresholdKind::Gp:
            return {4 * N3, N2 * (1 - 4 * N) * f, N * (2 * N - 3) * f * f, f * f * f};
        case ThresholdKind::Fp:
            return {-6 * N2, 2 * f * N * (3 * N - 1), f * f * (3 - 4 * N), f * f * f};
        case ThresholdKind::Fpi:
            return {4 * N3, (2 - 5 * N) * N * f, -2 * N * f * f, 2 * f * f * f};
        case ThresholdKind::Gpi:
            return {N3 * (N2 - 1), N * (-7 * N3 + 10 * N2 - 5 * N + 1) * f, N * (6 * N2 - 7 * N + 3) * f * f,
                    -(2 * N2 - 2 * N + 1) * f * f * f};
        case ThresholdKind::FcsU:
            return {6 * N2, (-12 * N2 + 5 * N - 1) * f, (8 * N - 3) * f * f, -2 * f * f * f};
        case ThresholdKind::Fcs: {
            const CoeffSeries y = build_coeffs(CoeffFamily::Y, 0.0, f, N);
            return {y.coef(3), y.coef(2), y.coef(1), y.coef(0)};
        }
        default:
            throw InvalidArgument(std::string("not a cubic threshold: ") + threshold_name(kind));
    }
}

double eval_threshold(ThresholdKind kind, double N, std::optional<double> phi_kk, std::optional<double> u0) {
    if (!std::isfinite(N) || N < 2.0) throw InvalidArgument("N must be >= 2");
    if (const CubicKind* ck = find_cubic(kind)) return cubic_threshold(*ck, N, need(phi_kk, "phi_kk"));

    switch (kind) {
        case ThresholdKind::F_existence: return existence_coef(N);
        case ThresholdKind::CE_existence: return ce_existence_coef(N);
        case ThresholdKind::GpU: return (N + std::sqrt((N - 1.0) * (N + 3.0)) + 1.0) / (2.0 * N);
        case ThresholdKind::FpU: return 0.5 * (std::sqrt((N - 2.0) / N) + 1.0);
        case ThresholdKind::GpiU: return std::sqrt((N - 1.0) / (N * N * N)) + 1.0 / N;
        case ThresholdKind::Gx: return (2 * N * N - 2 * N + 1) / (N * (N * N - N + 1));
        case ThresholdKind::Gcs: return (2 * N * N * N - N + 1) / (N * N * (N * N - N + 2));
        case ThresholdKind::Hpi: return (2 * N - 1) / (N * N);
        case ThresholdKind::TwoPhi: return 2.0 * need(phi_kk, "phi_kk");
        case ThresholdKind::Phi: return need(phi_kk, "phi_kk");
        case ThresholdKind::Gamma: {
            const double f = need(phi_kk, "phi_kk"), u = need(u0, "u0");
            const double a = 2.0 * f - N * u;
            const double disc = a * a + 4.0 * f * (u - 2.0 * f / (N + 1.0));
            // No real root: z* < 0 for every beta.
            if (disc < 0.0) return -kInf;
            return (a + std::sqrt(disc)) / (2.0 * (N + 1.0));
        }
        case ThresholdKind::GammaC: {
            const double f = need(phi_kk, "phi_kk"), u = need(u0, "u0");
            return (2.0 * f - u * (N + 1.0)) / ((N + 1.0) * (N + 1.0));
        }
        case ThresholdKind::UTilde: {
            const double f = need(phi_kk, "phi_kk");
            if (f <= 0.0) return 2.0 * f / (N + 1.0);
            const double N2 = N * N, N3 = N2 * N, N4 = N3 * N;
            return -2.0 * (N4 - 2 * N3 - 2 * N2 + 2 * N + 2) * f / (N3 * (2 * N3 + N2 - 3 * N - 2));
        }
        case ThresholdKind::UTildeC: {
            const double f = need(phi_kk, "phi_kk");
            if (f <= 0.0) return 2.0 * f / (N + 1.0);
            return -2.0 * (4 * N * N - 19 * N + 4) * f / (27.0 * N * (N + 1.0));
        }
        default:
            break;
    }
    throw InvalidArgument("unknown threshold kind");
}

double beta_threshold(ThresholdKind kind, double N, double phi_kk, std::optional<double> u0) {
    if (kind == ThresholdKind::UTilde || kind == ThresholdKind::UTildeC)
        throw InvalidArgument("outside-utility threshold has no beta value");
    const double v = eval_threshold(kind, N, phi_kk, u0);
    return threshold_is_coefficient(kind) ? v * phi_kk : v;
}

double r_piz1(double N, double f, double u, double b) {
    const double N2 = N * N, N3 = N2 * N, N4 = N3 * N;
    const std::array<double, 4> n{
        f * f * (-N * u + 2 * f),
        N * f * (2 * N2 * u - N * u - 2 * f),
        N * (-5 * N3 * u + 8 * N2 * u - 3 * N * u - 5 * N * f + 2 * f),
        4 * N3,
    };
    const double num = ((n[3] * b + n[2]) * b + n[1]) * b + n[0];
    const double den = b * b * (N2 - 2 * N3) * f + b * b * b * (5 * N4 - 8 * N3 + 3 * N2) + b * N * f * f;
    return num / den;
}

double r_piz2(double N, double f, double u, double b) {
    const double N2 = N * N, N3 = N2 * N;
    return (-N3 * u + b * N2 + 2 * N2 * u - N * u - 2 * N * f + f) / (b * (N3 - 2 * N2 + N));
}

double g_piz(double N, double f, double u, double b) {
    if (f < 0.0 && b < eval_threshold(ThresholdKind::Fpi, N, f)) return r_piz1(N, f, u, b);
    if (f > 0.0 && existence_coef(N) * f < b && b <= eval_threshold(ThresholdKind::Hpi, N) * f)
        return r_piz2(N, f, u, b);
    return -u / b;
}

double f_piz(double N, double f, double u, double b) { return r_piz2(N, f, u, b); }

const char* verdict_name(Verdict v) {
    switch (v) {
        case Verdict::Positive: return "positive";
        case Verdict::Negative: return "negative";
        case Verdict::Increasing: return "increasing";
        case Verdict::Decreasing: return "decreasing";
        case Verdict::Indeterminate: return "indeterminate";
        case Verdict::Boundary: return "boundary";
    }
    return "?";
}

int verdict_sign(Verdict v) {
    if (v == Verdict::Positive || v == Verdict::Increasing) return 1;
    if (v == Verdict::Negative || v == Verdict::Decreasing) return -1;
    return 0;
}

RegionLabel classify_existence(Regime regime, const MarketParams& params, Side side) {
    const SideParams s = side_params(params, side);
    LabelBuilder lb{s.beta, {}};
    const ThresholdKind kind = regime == Regime::CNE ? ThresholdKind::F_existence : ThresholdKind::CE_existence;
    if (s.phi > 0.0) lb.use(kind, beta_threshold(kind, s.N, s.phi));
    const bool exists = regime == Regime::CNE ? cne_exists(s.N, s.beta, s.phi) : ce_exists(s.N, s.beta, s.phi);
    return lb.finish(exists ? Verdict::Positive : Verdict::Negative);
}

RegionLabel classify_sign_z(Regime regime, const MarketParams& params, Side side) {
    const SideParams s = side_params(params, side);
    LabelBuilder lb{s.beta, {}};
    const ThresholdKind ex = regime == Regime::CNE ? ThresholdKind::F_existence : ThresholdKind::CE_existence;
    if (s.phi > 0.0) lb.use(ex, beta_threshold(ex, s.N, s.phi));
    const bool exists = regime == Regime::CNE ? cne_exists(s.N, s.beta, s.phi) : ce_exists(s.N, s.beta, s.phi);
    if (!exists) return lb.finish(Verdict::Indeterminate, "outside existence region");

    const ThresholdKind gk = regime == Regime::CNE ? ThresholdKind::Gamma : ThresholdKind::GammaC;
    const double g = eval_threshold(gk, s.N, s.phi, s.u0);
    lb.use(gk, g);
    return lb.finish(s.beta > g ? Verdict::Negative : Verdict::Positive);
}

RegionLabel classify_direction(Quantity q, Wrt w, const MarketParams& params, Side side,
                               std::optional<double> z_star) {
    const SideParams s = side_params(params, side);
    const double N = s.N, b = s.beta, f = s.phi;
    LabelBuilder lb{b, {}};
    const double f_ex = existence_coef(N) * f;
    if (f > 0.0) lb.use(ThresholdKind::F_existence, f_ex);
    if (!cne_exists(N, b, f)) return lb.finish(Verdict::Indeterminate, "outside existence region");
    const bool in_low_band = f > 0.0 && f_ex < b;  // existence already implies this for f > 0

    if (w == Wrt::OutsideUtility) {
        switch (q) {
            case Quantity::Price: {
                const double g = beta_threshold(ThresholdKind::GpU, N, f);
                const double fp = beta_threshold(ThresholdKind::FpU, N, f);
                lb.use(ThresholdKind::GpU, g);
                lb.use(ThresholdKind::FpU, fp);
                if (f <= 0.0 || b > g) return lb.finish(Verdict::Decreasing);
                if (f > 0.0 && N >= 3.0 && in_low_band && b < fp) return lb.finish(Verdict::Increasing);
                return lb.finish(Verdict::Indeterminate, "not classified");
            }
            case Quantity::Profit: {
                const double g = beta_threshold(ThresholdKind::GpiU, N, f);
                lb.use(ThresholdKind::GpiU, g);
                if (f <= 0.0 || b > g) return lb.finish(Verdict::Decreasing);
                return lb.finish(Verdict::Indeterminate, "not classified");
            }
            case Quantity::ConsumerSurplus: {
                lb.use(ThresholdKind::TwoPhi, 2.0 * f);
                if (f <= 0.0 || b > 2.0 * f) return lb.finish(Verdict::Increasing);
                const double fc = eval_threshold(ThresholdKind::FcsU, N, f);
                lb.use(ThresholdKind::FcsU, fc);
                if (in_low_band && b < fc) return lb.finish(Verdict::Decreasing);
                return lb.finish(Verdict::Indeterminate, "not classified");
            }
            case Quantity::Participation:
                return lb.finish(Verdict::Decreasing);
            case Quantity::Z:
                break;
        }
        throw InvalidArgument("no direction classifier for z");
    }

    switch (q) {
        case Quantity::Price: {
            if (f <= 0.0) {
                const double g = eval_threshold(ThresholdKind::Gp, N, f);
                lb.use(ThresholdKind::Gp, g);
                if (b > g) return lb.finish(Verdict::Decreasing);
                return lb.finish(Verdict::Indeterminate, "not classified");
            }
            lb.use(ThresholdKind::Phi, f);
            if (b > f) return lb.finish(Verdict::Decreasing);
            if (N >= 3.0) {
                const double fp = eval_threshold(ThresholdKind::Fp, N, f);
                lb.use(ThresholdKind::Fp, fp);
                if (in_low_band && b < fp) return lb.finish(Verdict::Increasing);
            }
            return lb.finish(Verdict::Indeterminate, "not classified");
        }
        case Quantity::Participation: {
            const double g = beta_threshold(ThresholdKind::Gx, N, f);
            lb.use(ThresholdKind::Gx, g);
            if (f <= 0.0 || b > g) return lb.finish(Verdict::Increasing);
            return lb.finish(Verdict::Indeterminate, "not classified");
        }
        case Quantity::ConsumerSurplus: {
            const double g = beta_threshold(ThresholdKind::Gcs, N, f);
            lb.use(ThresholdKind::Gcs, g);
            if (f <= 0.0 || b > g) return lb.finish(Verdict::Increasing);
            if (N >= 7.0 && in_low_band) {
                const double fc = eval_threshold(ThresholdKind::Fcs, N, f);
                const double gam = eval_threshold(ThresholdKind::Gamma, N, f, s.u0);
                lb.use(ThresholdKind::Fcs, fc);
                lb.use(ThresholdKind::Gamma, gam);
                if (b < std::min(fc, gam)) {
                    if (!z_star) throw InvalidArgument("z_star required for this classifier");
                    const double zc = std::log(2.0) / 5.0;
                    lb.margin = std::min(lb.margin, std::abs(*z_star - zc));
                    if (*z_star < zc) return lb.finish(Verdict::Decreasing);
                }
            }
            return lb.finish(Verdict::Indeterminate, "not classified");
        }
        case Quantity::Profit: {
            if (!z_star) throw InvalidArgument("z_star required for this classifier");
            if (f < 0.0) lb.use(ThresholdKind::Fpi, eval_threshold(ThresholdKind::Fpi, N, f));
            if (f > 0.0) lb.use(ThresholdKind::Hpi, beta_threshold(ThresholdKind::Hpi, N, f));
            const double gz = g_piz(N, f, s.u0, b);
            const double fz = f_piz(N, f, s.u0, b);
            lb.use_z(gz, *z_star);
            if (*z_star < gz) return lb.finish(Verdict::Decreasing);
            double gpi = 0.0;
            if (f > 0.0) {
                gpi = eval_threshold(ThresholdKind::Gpi, N, f);
                lb.use(ThresholdKind::Gpi, gpi);
            }
            lb.use_z(fz, *z_star);
            if (*z_star > fz && (f <= 0.0 || b > gpi)) return lb.finish(Verdict::Increasing);
            return lb.finish(Verdict::Indeterminate, "not classified");
        }
        case Quantity::Z:
            break;
    }
    throw InvalidArgument("no direction classifier for z");
}

double RegionGrid::phi_at(int i) const {
    return spec.phi_min + (i + 0.5) * (spec.phi_max - spec.phi_min) / spec.n_phi;
}

double RegionGrid::beta_at(int j) const {
    return spec.beta_min + (j + 0.5) * (spec.beta_max - spec.beta_min) / spec.n_beta;
}

MarketParams grid_params(const GridSpec& spec, double phi, double beta) {
    MarketParams p;
    p.n_platforms = spec.N;
    p.beta = Vec2(beta, beta);
    p.phi = Mat2::Zero();
    p.phi(0, 0) = p.phi(1, 1) = phi;
    p.u0 = Vec2(spec.u0, spec.u0);
    return p;
}

RegionLabel classify_cell(const ClassifierSpec& c, const MarketParams& params) {
    try {
        switch (c.kind) {
            case ClassifierSpec::Kind::Existence:
                return classify_existence(c.regime, params, Side::Buyer);
            case ClassifierSpec::Kind::SignZ:
                return classify_sign_z(c.regime, params, Side::Buyer);
            case ClassifierSpec::Kind::Direction: {
                std::optional<double> z;
                const bool needs_z = c.wrt == Wrt::NumPlatforms &&
                                     (c.quantity == Quantity::Profit || c.quantity == Quantity::ConsumerSurplus);
                if (needs_z && cne_exists(params.N(), params.beta[0], params.phi(0, 0)))
                    z = decoupled_z_star(params, Side::Buyer);
                return classify_direction(c.quantity, c.wrt, params, Side::Buyer, z);
            }
        }
    } catch (const Error& e) {
        RegionLabel l;
        l.reason = e.what();
        return l;
    }
    return {};
}

int solved_sign(const ClassifierSpec& c, const MarketParams& params) {
    const double N = params.N(), b = params.beta[0], f = params.phi(0, 0);
    try {
        switch (c.kind) {
            case ClassifierSpec::Kind::Existence: {
                if (c.regime == Regime::CNE) return cne_conditions_hold(b, f, N) ? 1 : -1;
                for (int i = 0; i <= 600; ++i)
                    if (!(decoupled_dmc(-30.0 + 0.1 * i, b, f, N) < 0.0)) return -1;
                return 1;
            }
            case ClassifierSpec::Kind::SignZ: {
                const double z = solve_decoupled(c.regime, b, f, N, params.u0[0]);
                if (std::abs(z) < 1e-12) return 0;
                return z > 0.0 ? 1 : -1;
            }
            case ClassifierSpec::Kind::Direction: {
                const double h = c.wrt == Wrt::OutsideUtility ? kFdStepU0 : kFdStepN;
                const double d = fd_derivative(c.quantity, c.wrt, params, Side::Buyer, h);
                if (std::abs(d) <= 1e-8) return 0;
                return d > 0.0 ? 1 : -1;
            }
        }
    } catch (const Error&) {
        return 0;
    }
    return 0;
}

RegionGrid region_grid(const ClassifierSpec& c, const GridSpec& spec, bool with_solved, Exec exec) {
    if (spec.n_phi < 1 || spec.n_beta < 1) throw InvalidArgument("grid resolution must be positive");
    if (!std::isfinite(spec.phi_min) || !std::isfinite(spec.phi_max) || !std::isfinite(spec.beta_min) ||
        !std::isfinite(spec.beta_max))
        throw InvalidArgument("grid ranges must be finite");
    RegionGrid g;
    g.classifier = c;
    g.spec = spec;
    const int cells = spec.n_phi * spec.n_beta;
    g.labels.resize(cells);
    if (with_solved) g.solved_sign.assign(cells, 0);

    auto eval_cell = [&](int idx_cell) {
        const int i = idx_cell % spec.n_phi, j = idx_cell / spec.n_phi;
        const MarketParams p = grid_params(spec, g.phi_at(i), g.beta_at(j));
        g.labels[idx_cell] = classify_cell(c, p);
        if (with_solved) g.solved_sign[idx_cell] = solved_sign(c, p);
    };
    if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(dynamic, 16)
        for (int k = 0; k < cells; ++k) eval_cell(k);
    } else {
        for (int k = 0; k < cells; ++k) eval_cell(k);
    }
    return g;
}

Agreement grid_agreement(const RegionGrid& grid, double min_margin) {
    Agreement a;
    for (std::size_t k = 0; k < grid.labels.size(); ++k) {
        const int v = verdict_sign(grid.labels[k].verdict);
        if (v == 0 || !(grid.labels[k].margin > min_margin)) continue;
        if (grid.solved_sign.empty() || grid.solved_sign[k] == 0) continue;
        ++a.total;
        if (v == grid.solved_sign[k]) ++a.agree;
    }
    return a;
}

std::vector<ThresholdCurve> figure_curves(const ClassifierSpec& c, const GridSpec& spec, int samples) {
    std::vector<ThresholdCurve> out;
    auto trace = [&](const std::string& label, const std::function<double(double)>& beta_of_phi) {
        ThresholdCurve cur{label, {}};
        auto flush = [&] {
            if (cur.points.size() > 1) out.push_back(cur);
            cur.points.clear();
        };
        for (int i = 0; i <= samples; ++i) {
            const double phi = spec.phi_min + (spec.phi_max - spec.phi_min) * i / samples;
            double b = std::numeric_limits<double>::quiet_NaN();
            try {
                b = beta_of_phi(phi);
            } catch (const Error&) {
            }
            if (std::isfinite(b) && b >= spec.beta_min && b <= spec.beta_max)
                cur.points.emplace_back(phi, b);
            else
                flush();
        }
        flush();
    };
    const double N = spec.N, u = spec.u0;
    auto positive_only = [](double phi, double v) { return phi > 0.0 ? v : std::numeric_limits<double>::quiet_NaN(); };

    const ThresholdKind ex = c.regime == Regime::CE ? ThresholdKind::CE_existence : ThresholdKind::F_existence;
    trace(c.regime == Regime::CE ? "beta = 8 phi/(27N): collusive existence" : "beta = f(N) phi: existence",
          [&](double f) { return positive_only(f, beta_threshold(ex, N, f)); });
    if (c.kind == ClassifierSpec::Kind::Existence) return out;

    if (c.kind == ClassifierSpec::Kind::SignZ) {
        if (c.regime == Regime::CNE)
            trace("beta = gamma(N, phi, u0): sign of z*", [&](double f) { return eval_threshold(ThresholdKind::Gamma, N, f, u); });
        else
            trace("beta = gamma_C(N, phi, u0): sign of z^C",
                  [&](double f) { return eval_threshold(ThresholdKind::GammaC, N, f, u); });
        return out;
    }

    auto coef_line = [&](ThresholdKind k, const std::string& label) {
        trace(label, [&, k](double f) { return positive_only(f, beta_threshold(k, N, f)); });
    };
    auto cubic_line = [&](ThresholdKind k, const std::string& label) {
        trace(label, [&, k](double f) { return eval_threshold(k, N, f); });
    };
    if (c.wrt == Wrt::NumPlatforms) {
        switch (c.quantity) {
            case Quantity::Price:
                cubic_line(ThresholdKind::Gp, "beta = g_p(N, phi): prices fall with N above");
                trace("beta = phi: prices fall with N above", [&](double f) { return positive_only(f, f); });
                if (N >= 3.0) cubic_line(ThresholdKind::Fp, "beta = f_p(N, phi): prices rise with N below");
                break;
            case Quantity::Participation:
                coef_line(ThresholdKind::Gx, "beta = g_x(N) phi: participation rises with N above");
                break;
            case Quantity::ConsumerSurplus:
                coef_line(ThresholdKind::Gcs, "beta = g_CS(N) phi: surplus rises with N above");
                if (N >= 7.0) cubic_line(ThresholdKind::Fcs, "beta = f_CS(N, phi): surplus may fall with N below");
                break;
            case Quantity::Profit:
                cubic_line(ThresholdKind::Fpi, "beta = f_pi(N, phi)");
                coef_line(ThresholdKind::Hpi, "beta = h_pi(N) phi");
                cubic_line(ThresholdKind::Gpi, "beta = g_pi(N, phi)");
                break;
            case Quantity::Z:
                break;
        }
    } else {
        switch (c.quantity) {
            case Quantity::Price:
                coef_line(ThresholdKind::GpU, "beta = g_pu(N) phi: prices fall with u0 above");
                coef_line(ThresholdKind::FpU, "beta = f_pu(N) phi: prices rise with u0 below");
                break;
            case Quantity::Profit:
                coef_line(ThresholdKind::GpiU, "beta = g_piu(N) phi: profit falls with u0 above");
                break;
            case Quantity::ConsumerSurplus:
                trace("beta = 2 phi: surplus rises with u0 above", [&](double f) { return positive_only(f, 2.0 * f); });
                cubic_line(ThresholdKind::FcsU, "beta = f_CSu(N, phi): surplus falls with u0 below");
                break;
            default:
                break;
        }
    }
    return out;
}

}  // namespace peq
