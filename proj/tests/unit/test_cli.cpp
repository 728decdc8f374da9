#include <doctest.h>

#include <sys/wait.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "config.hpp"
#include "csv.hpp"

using namespace peq;
using namespace peq::cli;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const fs::path d = fs::temp_directory_path() / ("platform_eq_cli_test_" + name);
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
}

int run(const std::string& args) {
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

void write(const fs::path& p, const std::string& s) { std::ofstream(p, std::ios::binary) << s; }

}  // namespace

TEST_CASE("config parsing") {
    const auto cfg = parse_config(R"(
market:
  n_platforms: 3
  beta: [1.0, 0.5]
  phi: {bb: 0.2, bs: 0.03}
  u0: -1
solver: {tol: 1.0e-11, regime: ce}
sweep:
  axes:
    - {param: u0, from: -1, to: 1, step: 0.5}
    - {param: N, values: [2, 3]}
seed: 9
)");
    CHECK(cfg.market.n_platforms == 3);
    CHECK(cfg.market.beta[1] == 0.5);
    CHECK(cfg.market.phi(0, 1) == 0.03);
    CHECK(cfg.market.phi(1, 0) == 0.0);
    CHECK(cfg.market.u0[1] == -1.0);
    CHECK(cfg.regime == RegimeChoice::Ce);
    REQUIRE(cfg.sweep.size() == 2);
    CHECK(cfg.sweep[0].values.size() == 5);
    CHECK(cfg.sweep[1].values == std::vector<double>{2, 3});
    CHECK(cfg.seed == 9);

    CHECK_THROWS_AS(parse_config("market: {n_platfroms: 3}"), ConfigError);
    CHECK_THROWS_AS(parse_config("solver: {regime: cartel}"), ConfigError);
    CHECK_THROWS_AS(parse_config("market: {beta: -1}"), ConfigError);
    CHECK_THROWS_AS(parse_config("sweep: {axes: [{param: gamma, values: [1]}]}"), ConfigError);
    CHECK_THROWS_AS(parse_config("market: [1, 2"), ConfigError);
    CHECK_THROWS_AS(parse_config("extra: 1"), ConfigError);
}

TEST_CASE("sweep parameters") {
    MarketParams p;
    apply_param(p, "phi_sb", 0.4);
    CHECK(p.phi(1, 0) == 0.4);
    apply_param(p, "beta", 2.0);
    CHECK(p.beta == Vec2(2.0, 2.0));
    CHECK_THROWS_AS(apply_param(p, "phi", 1.0), ConfigError);
}

TEST_CASE("CSV cells") {
    CHECK(cell(0.1) == "0.10000000000000001");
    CHECK(cell(-1.5) == "-1.5");
    CHECK(cell(std::string("a,b")) == "\"a,b\"");
    CHECK(cell(true) == "1");
    CHECK(fnv1a64("") == 0xcbf29ce484222325ull);
    CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cull);
}

TEST_CASE("solve command writes the equilibrium row") {
    const auto dir = scratch("solve");
    write(dir / "c.yaml", "market: {n_platforms: 2, beta: 1}\n");
    REQUIRE(run("solve --config " + (dir / "c.yaml").string() + " --out " + (dir / "o").string()) == 0);
    const std::string csv = slurp(dir / "o" / "solve.csv");
    CHECK(csv.rfind("# platform_eq ", 0) == 0);
    CHECK(csv.find("# config_hash fnv1a64:") != std::string::npos);
    CHECK(csv.find("cne,b,2,1,1,0,0,0,0,0,0,0,0,-1.226750644834") != std::string::npos);
    CHECK(csv.find("ce,b,2,1,1,0,0,0,0,0,0,0,0,-1.46305551336") != std::string::npos);
    CHECK(csv.find('\r') == std::string::npos);

    REQUIRE(run("solve --regime ce --config " + (dir / "c.yaml").string() + " --out " + (dir / "ce").string()) == 0);
    const std::string ce = slurp(dir / "ce" / "solve.csv");
    CHECK(ce.find("\ncne,") == std::string::npos);
    CHECK(ce.find("\nce,b,") != std::string::npos);
}

TEST_CASE("malformed config exits 1 and writes nothing") {
    const auto dir = scratch("bad");
    write(dir / "bad.yaml", "market:\n  n_platfroms: 3\n");
    CHECK(run("solve --config " + (dir / "bad.yaml").string() + " --out " + (dir / "o").string()) == 1);
    CHECK_FALSE(fs::exists(dir / "o"));
    CHECK(run("solve --config " + (dir / "missing.yaml").string()) == 1);
    CHECK(run("solve --regime cartel") == 1);
}

TEST_CASE("solver failure exits 2") {
    const auto dir = scratch("solver");
    write(dir / "c.yaml", "market: {n_platforms: 2, beta: 1, u0: 1.0e6}\n");
    CHECK(run("solve --config " + (dir / "c.yaml").string() + " --out " + (dir / "o").string()) == 2);
    CHECK_FALSE(fs::exists(dir / "o" / "solve.csv"));
}

TEST_CASE("verify exit codes") {
    const auto dir = scratch("verify");
    write(dir / "c.yaml", "market: {n_platforms: 2}\nverify: {mc_samples: 20000}\n");
    const std::string base = "verify --config " + (dir / "c.yaml").string() + " --out " + (dir / "o").string();
    CHECK(run(base) == 0);
    CHECK(slurp(dir / "o" / "verify.csv").find(",1\n") != std::string::npos);
    CHECK(run(base + " --perturb 0.1") == 3);
}

TEST_CASE("figures command") {
    const auto dir = scratch("fig");
    write(dir / "c.yaml", "figure: {id: fig5, resolution: [30, 20]}\n");
    REQUIRE(run("figures --config " + (dir / "c.yaml").string() + " --out " + dir.string()) == 0);
    const std::string csv = slurp(dir / "fig5.csv");
    CHECK(csv.find("\nphi,beta,verdict,margin\n") != std::string::npos);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 6 + 600);
    const std::string svg = slurp(dir / "fig5.svg");
    CHECK(svg.find("<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\"") != std::string::npos);
    CHECK(svg.find("href") == std::string::npos);
    CHECK(svg.find("participation proposition") != std::string::npos);
    CHECK(run("figures --figure fig9 --out " + dir.string()) == 1);
}

TEST_CASE("sweep rows and determinism") {
    const auto dir = scratch("sweep");
    write(dir / "c.yaml", "market: {n_platforms: 2}\nsweep: {axes: [{param: N, from: 2, to: 12, step: 1}]}\n");
    const std::string cfg = (dir / "c.yaml").string();
    REQUIRE(run("sweep --config " + cfg + " --out " + (dir / "a").string() + " --jobs 1") == 0);
    REQUIRE(run("sweep --config " + cfg + " --out " + (dir / "b").string() + " --jobs 4") == 0);
    const std::string a = slurp(dir / "a" / "sweep.csv");
    CHECK(a == slurp(dir / "b" / "sweep.csv"));
    CHECK(std::count(a.begin(), a.end(), '\n') == 6 + 22);
}
