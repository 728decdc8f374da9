#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "platform_eq/equilibrium.hpp"
#include "platform_eq/model.hpp"
#include "platform_eq/parallel.hpp"
#include "platform_eq/statics.hpp"

namespace peq {

// Argument signatures:
//   N only, returns a coefficient c(N) (beta threshold is c(N) * phi):
//     F_existence, CE_existence, GpU, FpU, GpiU, Gx, Gcs, Hpi
//   (N, phi), returns a beta value: Gp, Fp, Fcs, Gpi, Fpi, FcsU, TwoPhi, Phi
//   (N, phi), returns an outside-utility value: UTilde, UTildeC
//   (N, phi, u0), returns a beta value: Gamma, GammaC
enum class ThresholdKind {
    F_existence,
    CE_existence,
    Gamma,
    GammaC,
    UTilde,
    UTildeC,
    GpU,
    FpU,
    GpiU,
    FcsU,
    Gp,
    Fp,
    Gx,
    Gcs,
    Fcs,
    Gpi,
    Hpi,
    Fpi,
    TwoPhi,
    Phi,
};

const char* threshold_name(ThresholdKind k);
bool threshold_is_coefficient(ThresholdKind k);
bool threshold_is_cubic(ThresholdKind k);

double eval_threshold(ThresholdKind kind, double N, std::optional<double> phi_kk = std::nullopt,
                      std::optional<double> u0 = std::nullopt);
// eval_threshold scaled to beta units for the coefficient kinds.
double beta_threshold(ThresholdKind kind, double N, double phi_kk, std::optional<double> u0 = std::nullopt);
// The cubic in beta whose root defines a cubic kind.
Cubic threshold_cubic(ThresholdKind kind, double N, double phi_kk);

// Profit-versus-N z thresholds.
double r_piz1(double N, double phi, double u0, double beta);
double r_piz2(double N, double phi, double u0, double beta);
double g_piz(double N, double phi, double u0, double beta);
double f_piz(double N, double phi, double u0, double beta);

enum class Verdict { Positive, Negative, Increasing, Decreasing, Indeterminate, Boundary };
const char* verdict_name(Verdict v);
// +1 for Positive/Increasing, -1 for Negative/Decreasing, 0 otherwise.
int verdict_sign(Verdict v);

inline constexpr double kBoundaryTol = 1e-9;

struct RegionLabel {
    Verdict verdict = Verdict::Indeterminate;
    std::vector<std::pair<ThresholdKind, double>> thresholds_used;
    double margin = 0.0;
    std::string reason;
};

RegionLabel classify_existence(Regime regime, const MarketParams& params, Side side);
RegionLabel classify_sign_z(Regime regime, const MarketParams& params, Side side);

// Profit versus N needs z*; consumer surplus versus N needs it once the
// beta hypotheses of its decreasing clause hold.
RegionLabel classify_direction(Quantity q, Wrt w, const MarketParams& params, Side side,
                               std::optional<double> z_star = std::nullopt);

struct ClassifierSpec {
    enum class Kind { Existence, SignZ, Direction };
    Kind kind = Kind::Existence;
    Regime regime = Regime::CNE;
    Quantity quantity = Quantity::Price;
    Wrt wrt = Wrt::NumPlatforms;
};

struct GridSpec {
    double phi_min = -2.0, phi_max = 2.0;
    double beta_min = 0.0, beta_max = 2.0;
    int n_phi = 200, n_beta = 200;
    double N = 4.0;
    double u0 = 0.0;
};

struct RegionGrid {
    ClassifierSpec classifier;
    GridSpec spec;
    std::vector<RegionLabel> labels;  // row-major, row = beta index
    std::vector<int> solved_sign;     // empty unless requested; 0 when unknown

    double phi_at(int i) const;
    double beta_at(int j) const;
    const RegionLabel& at(int i, int j) const { return labels[static_cast<std::size_t>(j) * spec.n_phi + i]; }
};

struct Agreement {
    long agree = 0;
    long total = 0;
    double fraction() const { return total == 0 ? 1.0 : static_cast<double>(agree) / static_cast<double>(total); }
};

MarketParams grid_params(const GridSpec& spec, double phi, double beta);
RegionLabel classify_cell(const ClassifierSpec& c, const MarketParams& params);
// Sign of the quantity the classifier predicts, from solving the model; 0 when unavailable.
int solved_sign(const ClassifierSpec& c, const MarketParams& params);

RegionGrid region_grid(const ClassifierSpec& c, const GridSpec& spec, bool with_solved, Exec exec = Exec::Parallel);
Agreement grid_agreement(const RegionGrid& grid, double min_margin = 0.01);

struct ThresholdCurve {
    std::string label;
    std::vector<std::pair<double, double>> points;  // (phi, beta); gaps are separate curves
};

std::vector<ThresholdCurve> figure_curves(const ClassifierSpec& c, const GridSpec& spec, int samples = 400);

}  // namespace peq
