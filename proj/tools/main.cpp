#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "commands.hpp"
#include "platform_eq/parallel.hpp"

int main(int argc, char** argv) {
    using namespace peq::cli;

    CLI::App app{"Symmetric equilibria of competing two-sided platforms"};
    app.set_version_flag("--version", std::string(PLATFORM_EQ_VERSION));

    std::string command;
    std::string config_path;
    std::optional<std::string> regime, out_dir, figure;
    std::optional<std::uint64_t> seed;
    std::optional<double> tol, perturb;
    std::optional<int> jobs;

    app.add_option("command", command, "solve | compare | classify | sweep | verify | figures")
        ->required()
        ->check(CLI::IsMember({"solve", "compare", "classify", "sweep", "verify", "figures"}));
    app.add_option("--config", config_path, "YAML config file");
    app.add_option("--regime", regime, "cne, ce or both")->check(CLI::IsMember({"cne", "ce", "both"}));
    app.add_option("--out", out_dir, "output directory");
    app.add_option("--figure", figure, "figure id")
        ->check(CLI::IsMember({"fig1", "fig2", "fig3", "fig4", "fig5", "fig6"}));
    app.add_option("--seed", seed, "RNG seed");
    app.add_option("--tol", tol, "solver tolerance")->check(CLI::PositiveNumber);
    app.add_option("--jobs", jobs, "worker threads (PLATFORM_EQ_JOBS overrides)")->check(CLI::NonNegativeNumber);
    app.add_option("--perturb", perturb, "shift equilibrium prices before verification");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitConfig;
    }

    RunConfig cfg;
    try {
        cfg = config_path.empty() ? parse_config("") : load_config(config_path);
        if (regime) cfg.regime = parse_regime(*regime);
        if (out_dir) cfg.out_dir = *out_dir;
        if (figure) cfg.figure.id = *figure;
        if (seed) cfg.seed = *seed;
        if (tol) cfg.tol = *tol;
        if (jobs) cfg.jobs = *jobs;
        if (perturb) cfg.verify.perturb = *perturb;
        peq::set_jobs(peq::resolve_jobs(cfg.jobs));
    } catch (const peq::Error& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    }
    return run_command(command, cfg, std::cout, std::cerr);
}
