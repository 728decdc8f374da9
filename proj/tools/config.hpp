#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "platform_eq/equilibrium.hpp"
#include "platform_eq/model.hpp"

namespace peq::cli {

// Raised for anything wrong with the config file or flags; maps to exit code 1.
class ConfigError : public Error {
public:
    using Error::Error;
};

enum class RegimeChoice { Cne, Ce, Both };

struct SweepAxis {
    std::string param;  // u0, u0_b, u0_s, N, beta, beta_b, beta_s, phi_kk, phi_bb, phi_bs, phi_sb, phi_ss, mu_b, mu_s
    std::vector<double> values;
};

struct FigureConfig {
    std::string id = "fig1";
    std::optional<double> n_platforms;
    std::vector<double> u0_panels;  // empty means caption defaults
    double phi_min = -2.0, phi_max = 2.0;
    double beta_min = 0.0, beta_max = 2.0;
    int n_phi = 200, n_beta = 200;
    int width = 640, height = 560;
};

struct VerifyConfig {
    double radius = 0.5;
    int grid = 41;
    double tolerance = 1e-6;
    double perturb = 0.0;  // added to both equilibrium prices before certification
    int starts = 10;
    long mc_samples = 100000;
};

struct RunConfig {
    MarketParams market;
    double tol = 1e-10;
    RegimeChoice regime = RegimeChoice::Both;
    std::vector<SweepAxis> sweep;
    Side side = Side::Buyer;
    FigureConfig figure;
    VerifyConfig verify;
    std::string out_dir = ".";
    std::uint64_t seed = 42;
    std::optional<int> jobs;

    std::string source_text;  // raw config text, hashed into every CSV
};

RunConfig load_config(const std::string& path);
RunConfig parse_config(const std::string& text);

void apply_param(MarketParams& p, const std::string& name, double value);
RegimeChoice parse_regime(const std::string& s);

std::uint64_t fnv1a64(const std::string& data);

}  // namespace peq::cli
