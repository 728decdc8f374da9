#include "csv.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

namespace peq::cli {

namespace fs = std::filesystem;

std::string cell(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return fmt::format("{:.17g}", v);
}
std::string cell(int v) { return fmt::format("{}", v); }
std::string cell(long v) { return fmt::format("{}", v); }
std::string cell(bool v) { return v ? "1" : "0"; }

std::string cell(const std::string& v) {
    if (v.find_first_of(",\"\n\r") == std::string::npos) return v;
    std::string out = "\"";
    for (char c : v) {
        if (c == '"') out += '"';
        out += (c == '\n' || c == '\r') ? ' ' : c;
    }
    return out + '"';
}

CsvTable::CsvTable(std::vector<std::string> columns) : columns_(std::move(columns)) {}

void CsvTable::add_row(std::vector<std::string> row) {
    if (row.size() != columns_.size())
        throw Error(fmt::format("csv row has {} cells, expected {}", row.size(), columns_.size()));
    rows_.push_back(std::move(row));
}

std::string params_echo(const MarketParams& p) {
    return fmt::format("N={} beta=[{},{}] mu=[{},{}] phi=[[{},{}],[{},{}]] u0=[{},{}]", cell(p.n_platforms),
                       cell(p.beta[0]), cell(p.beta[1]), cell(p.mu[0]), cell(p.mu[1]), cell(p.phi(0, 0)),
                       cell(p.phi(0, 1)), cell(p.phi(1, 0)), cell(p.phi(1, 1)), cell(p.u0[0]), cell(p.u0[1]));
}

void CsvTable::write(std::ostream& out, const RunConfig& cfg, const std::vector<std::string>& extra) const {
    out << "# platform_eq " << PLATFORM_EQ_VERSION << '\n';
    out << fmt::format("# config_hash fnv1a64:{:016x}\n", fnv1a64(cfg.source_text));
    out << "# params " << params_echo(cfg.market) << '\n';
    out << fmt::format("# tol={} seed={}\n", cell(cfg.tol), cfg.seed);
    for (const auto& line : extra) out << "# " << line << '\n';
    for (std::size_t i = 0; i < columns_.size(); ++i) out << (i ? "," : "") << columns_[i];
    out << '\n';
    for (const auto& row : rows_) {
        for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
        out << '\n';
    }
}

void write_file(const std::string& dir, const std::string& name, const std::string& content) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw ConfigError("cannot create output directory " + dir + ": " + ec.message());
    const fs::path target = fs::path(dir) / name;
    const fs::path tmp = fs::path(dir) / (name + ".tmp");
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw ConfigError("cannot write " + tmp.string());
        f << content;
        if (!f) throw ConfigError("write failed for " + tmp.string());
    }
    fs::rename(tmp, target, ec);
    if (ec) throw ConfigError("cannot move output into place: " + target.string());
}

}  // namespace peq::cli
