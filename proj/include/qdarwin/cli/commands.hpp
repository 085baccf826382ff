#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "qdarwin/cli/config.hpp"

namespace qdarwin::cli {

/// Empty cells print as blank in CSV and null in JSON.
using Cell = std::variant<std::monostate, std::int64_t, double, std::string>;

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
};

struct CommandResult {
    Table table;
    int exit_code = 0;
    std::vector<std::string> warnings;
};

/// "%.12g" formatting shared by both writers.
std::string format_number(double x);

/// Metadata comment line, header, then one line per row.
std::string render_csv(const Table& table, const std::string& command, const SweepConfig& cfg);
/// {"meta": {...}, "columns": {name: [values...]}}.
std::string render_json(const Table& table, const std::string& command, const SweepConfig& cfg);

CommandResult cmd_info_curve(const SweepConfig& cfg);
CommandResult cmd_redundancy(const SweepConfig& cfg);
CommandResult cmd_oracle_check(const SweepConfig& cfg);
CommandResult cmd_fit_exponent(const SweepConfig& cfg);

/// Full entry point used by the executable; returns the process exit code.
int run(int argc, char** argv);

}  // namespace qdarwin::cli
