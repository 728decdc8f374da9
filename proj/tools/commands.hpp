#pragma once

#include <ostream>
#include <string>

#include "config.hpp"

namespace peq::cli {

// Exit codes shared by every command.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 1;
inline constexpr int kExitSolver = 2;
inline constexpr int kExitVerify = 3;

// Each command writes <out_dir>/<command>.csv (figures: <id>.csv and <id>.svg),
// echoes the CSV to `out` and returns the exit code. ConfigError and solver
// errors propagate; main maps them to exit codes.
int cmd_solve(const RunConfig& cfg, std::ostream& out);
int cmd_compare(const RunConfig& cfg, std::ostream& out);
int cmd_classify(const RunConfig& cfg, std::ostream& out);
int cmd_sweep(const RunConfig& cfg, std::ostream& out);
int cmd_verify(const RunConfig& cfg, std::ostream& out);
int cmd_figures(const RunConfig& cfg, std::ostream& out);

int run_command(const std::string& name, const RunConfig& cfg, std::ostream& out, std::ostream& err);

}  // namespace peq::cli
