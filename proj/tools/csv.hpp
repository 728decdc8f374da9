#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "config.hpp"

namespace peq::cli {

// A CSV cell, already formatted. Doubles use 17 significant digits.
std::string cell(double v);
std::string cell(int v);
std::string cell(long v);
std::string cell(bool v);
std::string cell(const std::string& v);
inline std::string cell(const char* v) { return cell(std::string(v)); }

class CsvTable {
public:
    explicit CsvTable(std::vector<std::string> columns);

    void add_row(std::vector<std::string> row);
    std::size_t size() const { return rows_.size(); }
    const std::vector<std::string>& columns() const { return columns_; }

    // Header comments (version, config hash, parameter echo, extras), header row, rows; LF only.
    void write(std::ostream& out, const RunConfig& cfg, const std::vector<std::string>& extra_comments = {}) const;

private:
    std::vector<std::string> columns_;
    std::vector<std::vector<std::string>> rows_;
};

std::string params_echo(const MarketParams& p);

// Writes the table to `dir/name` through a temporary file so a failed run leaves nothing behind.
void write_file(const std::string& dir, const std::string& name, const std::string& content);

}  // namespace peq::cli
