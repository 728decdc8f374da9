#include "config.hpp"

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

namespace peq::cli {

namespace {

void check_keys(const YAML::Node& node, std::initializer_list<const char*> allowed, const std::string& where) {
    if (!node.IsMap()) throw ConfigError(where + ": expected a mapping");
    std::set<std::string> ok(allowed.begin(), allowed.end());
    for (const auto& kv : node) {
        const auto key = kv.first.as<std::string>();
        if (!ok.count(key)) throw ConfigError(where + ": unknown key '" + key + "'");
    }
}

template <typename T>
T get(const YAML::Node& node, const std::string& where) {
    try {
        return node.as<T>();
    } catch (const YAML::Exception&) {
        throw ConfigError(where + ": invalid value");
    }
}

double get_double(const YAML::Node& node, const std::string& where) {
    const double v = get<double>(node, where);
    if (!std::isfinite(v)) throw ConfigError(where + ": must be finite");
    return v;
}

Vec2 get_pair(const YAML::Node& node, const std::string& where) {
    if (node.IsScalar()) {
        const double v = get_double(node, where);
        return {v, v};
    }
    if (!node.IsSequence() || node.size() != 2) throw ConfigError(where + ": expected a number or [buyer, seller]");
    return {get_double(node[0], where), get_double(node[1], where)};
}

Side parse_side(const std::string& s) {
    if (s == "b" || s == "buyer") return Side::Buyer;
    if (s == "s" || s == "seller") return Side::Seller;
    throw ConfigError("side must be b or s");
}

void parse_market(const YAML::Node& m, MarketParams& p) {
    check_keys(m, {"n_platforms", "beta", "mu", "phi", "u0"}, "market");
    if (m["n_platforms"]) p.n_platforms = get_double(m["n_platforms"], "market.n_platforms");
    if (m["beta"]) p.beta = get_pair(m["beta"], "market.beta");
    if (m["mu"]) p.mu = get_pair(m["mu"], "market.mu");
    if (m["u0"]) p.u0 = get_pair(m["u0"], "market.u0");
    if (const auto phi = m["phi"]) {
        if (phi.IsMap()) {
            check_keys(phi, {"bb", "bs", "sb", "ss"}, "market.phi");
            if (phi["bb"]) p.phi(0, 0) = get_double(phi["bb"], "market.phi.bb");
            if (phi["bs"]) p.phi(0, 1) = get_double(phi["bs"], "market.phi.bs");
            if (phi["sb"]) p.phi(1, 0) = get_double(phi["sb"], "market.phi.sb");
            if (phi["ss"]) p.phi(1, 1) = get_double(phi["ss"], "market.phi.ss");
        } else if (phi.IsSequence() && phi.size() == 2) {
            for (int r = 0; r < 2; ++r) {
                const Vec2 row = get_pair(phi[r], "market.phi");
                p.phi(r, 0) = row[0];
                p.phi(r, 1) = row[1];
            }
        } else {
            throw ConfigError("market.phi: expected {bb, bs, sb, ss} or [[bb, bs], [sb, ss]]");
        }
    }
}

SweepAxis parse_axis(const YAML::Node& a, int i) {
    const std::string where = "sweep.axes[" + std::to_string(i) + "]";
    check_keys(a, {"param", "from", "to", "step", "values"}, where);
    SweepAxis axis;
    if (!a["param"]) throw ConfigError(where + ": param is required");
    axis.param = get<std::string>(a["param"], where + ".param");
    MarketParams probe;
    try {
        apply_param(probe, axis.param, 1.0);
    } catch (const ConfigError&) {
        throw ConfigError(where + ": unknown parameter '" + axis.param + "'");
    }
    if (a["values"]) {
        if (a["from"] || a["to"] || a["step"]) throw ConfigError(where + ": give either values or from/to/step");
        for (const auto& v : a["values"]) axis.values.push_back(get_double(v, where + ".values"));
    } else {
        if (!a["from"] || !a["to"] || !a["step"]) throw ConfigError(where + ": from, to and step are required");
        const double from = get_double(a["from"], where + ".from"), to = get_double(a["to"], where + ".to");
        const double step = get_double(a["step"], where + ".step");
        if (!(step > 0.0) || to < from) throw ConfigError(where + ": need step > 0 and to >= from");
        const long n = std::lround(std::floor((to - from) / step + 1e-9)) + 1;
        if (n > 1000000) throw ConfigError(where + ": too many points");
        for (long k = 0; k < n; ++k) axis.values.push_back(from + static_cast<double>(k) * step);
    }
    if (axis.values.empty()) throw ConfigError(where + ": no values");
    return axis;
}

void parse_figure(const YAML::Node& f, FigureConfig& fig) {
    check_keys(f, {"id", "n_platforms", "u0", "phi_range", "beta_range", "resolution", "width", "height"}, "figure");
    if (f["id"]) fig.id = get<std::string>(f["id"], "figure.id");
    if (f["n_platforms"]) fig.n_platforms = get_double(f["n_platforms"], "figure.n_platforms");
    if (const auto u = f["u0"]) {
        if (u.IsScalar())
            fig.u0_panels = {get_double(u, "figure.u0")};
        else
            for (const auto& v : u) fig.u0_panels.push_back(get_double(v, "figure.u0"));
    }
    if (f["phi_range"]) {
        const Vec2 r = get_pair(f["phi_range"], "figure.phi_range");
        fig.phi_min = r[0];
        fig.phi_max = r[1];
    }
    if (f["beta_range"]) {
        const Vec2 r = get_pair(f["beta_range"], "figure.beta_range");
        fig.beta_min = r[0];
        fig.beta_max = r[1];
    }
    if (f["resolution"]) {
        const Vec2 r = get_pair(f["resolution"], "figure.resolution");
        fig.n_phi = static_cast<int>(r[0]);
        fig.n_beta = static_cast<int>(r[1]);
    }
    if (f["width"]) fig.width = get<int>(f["width"], "figure.width");
    if (f["height"]) fig.height = get<int>(f["height"], "figure.height");
    if (fig.phi_max <= fig.phi_min || fig.beta_max <= fig.beta_min) throw ConfigError("figure: empty range");
    if (fig.n_phi < 1 || fig.n_beta < 1 || fig.n_phi > 4000 || fig.n_beta > 4000)
        throw ConfigError("figure.resolution must lie in [1, 4000]");
    if (fig.width < 100 || fig.height < 100) throw ConfigError("figure width and height must be >= 100");
}

void parse_verify(const YAML::Node& v, VerifyConfig& c) {
    check_keys(v, {"radius", "grid", "tolerance", "perturb", "starts", "mc_samples"}, "verify");
    if (v["radius"]) c.radius = get_double(v["radius"], "verify.radius");
    if (v["grid"]) c.grid = get<int>(v["grid"], "verify.grid");
    if (v["tolerance"]) c.tolerance = get_double(v["tolerance"], "verify.tolerance");
    if (v["perturb"]) c.perturb = get_double(v["perturb"], "verify.perturb");
    if (v["starts"]) c.starts = get<int>(v["starts"], "verify.starts");
    if (v["mc_samples"]) c.mc_samples = get<long>(v["mc_samples"], "verify.mc_samples");
    if (!(c.radius > 0.0) || c.grid < 3 || !(c.tolerance > 0.0) || c.starts < 1 || c.mc_samples < 2)
        throw ConfigError("verify: radius > 0, grid >= 3, tolerance > 0, starts >= 1, mc_samples >= 2 required");
}

}  // namespace

std::uint64_t fnv1a64(const std::string& data) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

RegimeChoice parse_regime(const std::string& s) {
    if (s == "cne") return RegimeChoice::Cne;
    if (s == "ce") return RegimeChoice::Ce;
    if (s == "both") return RegimeChoice::Both;
    throw ConfigError("regime must be cne, ce or both");
}

void apply_param(MarketParams& p, const std::string& name, double v) {
    if (name == "N" || name == "n_platforms") p.n_platforms = v;
    else if (name == "u0") p.u0 = Vec2(v, v);
    else if (name == "u0_b") p.u0[0] = v;
    else if (name == "u0_s") p.u0[1] = v;
    else if (name == "beta") p.beta = Vec2(v, v);
    else if (name == "beta_b") p.beta[0] = v;
    else if (name == "beta_s") p.beta[1] = v;
    else if (name == "mu_b") p.mu[0] = v;
    else if (name == "mu_s") p.mu[1] = v;
    else if (name == "phi_kk") p.phi(0, 0) = p.phi(1, 1) = v;
    else if (name == "phi_bb") p.phi(0, 0) = v;
    else if (name == "phi_bs") p.phi(0, 1) = v;
    else if (name == "phi_sb") p.phi(1, 0) = v;
    else if (name == "phi_ss") p.phi(1, 1) = v;
    else throw ConfigError("unknown parameter '" + name + "'");
}

RunConfig parse_config(const std::string& text) {
    RunConfig cfg;
    cfg.source_text = text;
    YAML::Node root;
    try {
        root = YAML::Load(text);
    } catch (const YAML::Exception& e) {
        throw ConfigError(std::string("config is not valid YAML: ") + e.what());
    }
    if (root.IsNull()) return cfg;
    check_keys(root, {"market", "solver", "sweep", "figure", "verify", "output", "seed"}, "config");

    if (root["market"]) parse_market(root["market"], cfg.market);
    if (const auto s = root["solver"]) {
        check_keys(s, {"tol", "regime", "jobs"}, "solver");
        if (s["tol"]) cfg.tol = get_double(s["tol"], "solver.tol");
        if (s["regime"]) cfg.regime = parse_regime(get<std::string>(s["regime"], "solver.regime"));
        if (s["jobs"]) cfg.jobs = get<int>(s["jobs"], "solver.jobs");
        if (!(cfg.tol > 0.0)) throw ConfigError("solver.tol must be positive");
    }
    if (const auto s = root["sweep"]) {
        check_keys(s, {"axes", "side"}, "sweep");
        if (s["side"]) cfg.side = parse_side(get<std::string>(s["side"], "sweep.side"));
        if (const auto axes = s["axes"]) {
            if (!axes.IsSequence()) throw ConfigError("sweep.axes must be a list");
            for (std::size_t i = 0; i < axes.size(); ++i) cfg.sweep.push_back(parse_axis(axes[i], static_cast<int>(i)));
            if (cfg.sweep.size() > 2) throw ConfigError("sweep supports one or two axes");
        }
    }
    if (root["figure"]) parse_figure(root["figure"], cfg.figure);
    if (root["verify"]) parse_verify(root["verify"], cfg.verify);
    if (const auto o = root["output"]) {
        check_keys(o, {"dir"}, "output");
        if (o["dir"]) cfg.out_dir = get<std::string>(o["dir"], "output.dir");
    }
    if (root["seed"]) cfg.seed = get<std::uint64_t>(root["seed"], "seed");

    try {
        cfg.market.validate();
    } catch (const InvalidArgument& e) {
        throw ConfigError(std::string("market: ") + e.what());
    }
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot read config file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

}  // namespace peq::cli
