#pragma once

#include <json.hpp>

#include <string>
#include <variant>
#include <vector>

namespace lab {

// monostate is an empty CSV field and a JSON null.
using Cell = std::variant<std::monostate, double, long long, std::string>;

/// 17 significant digits via std::to_chars, so the text re-parses to the same double.
std::string format_number(double x);

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  /// Extra top-level members for the JSON form (verdicts, checks).
  nlohmann::json extra = nlohmann::json::object();
};

struct OutputOptions {
  std::string path;  // empty: standard output
  std::string format = "csv";
  bool meta = true;
  std::string command;
};

/// Writes CSV (LF line endings, optional leading '#' meta line) or a JSON object
/// {"meta", "columns", "rows", ...extra}.
void write_table(const Table& table, const OutputOptions& opts);

}  // namespace lab
