#include "lab_output.hpp"

#include <charconv>
#include <chrono>
#include <ctime>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

namespace lab {

namespace {

constexpr const char* kVersion = "1.0.0";

std::string timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string csv_cell(const Cell& c) {
  if (std::holds_alternative<std::monostate>(c)) return "";
  if (const auto* d = std::get_if<double>(&c)) return format_number(*d);
  if (const auto* i = std::get_if<long long>(&c)) return std::to_string(*i);
  const auto& s = std::get<std::string>(c);
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char ch : s) {
    if (ch == '"') q += '"';
    q += ch;
  }
  return q + "\"";
}

nlohmann::json json_cell(const Cell& c) {
  if (std::holds_alternative<std::monostate>(c)) return nullptr;
  if (const auto* d = std::get_if<double>(&c)) return *d;
  if (const auto* i = std::get_if<long long>(&c)) return *i;
  return std::get<std::string>(c);
}

}  // namespace

std::string format_number(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

void write_table(const Table& table, const OutputOptions& opts) {
  std::ostringstream out;
  if (opts.format == "csv") {
    if (opts.meta) out << "# farey-lab " << kVersion << " " << opts.command << " " << timestamp() << '\n';
    for (std::size_t i = 0; i < table.columns.size(); ++i) out << (i ? "," : "") << table.columns[i];
    out << '\n';
    for (const auto& row : table.rows) {
      for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << csv_cell(row[i]);
      out << '\n';
    }
  } else if (opts.format == "json") {
    nlohmann::json doc = nlohmann::json::object();
    if (opts.meta) doc["meta"] = {{"tool", "farey-lab"}, {"version", kVersion}, {"command", opts.command}, {"generated", timestamp()}};
    doc["columns"] = table.columns;
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : table.rows) {
      nlohmann::json r = nlohmann::json::object();
      for (std::size_t i = 0; i < row.size() && i < table.columns.size(); ++i) r[table.columns[i]] = json_cell(row[i]);
      rows.push_back(std::move(r));
    }
    doc["rows"] = std::move(rows);
    for (const auto& [k, v] : table.extra.items()) doc[k] = v;
    out << doc.dump(2) << '\n';
  } else {
    throw std::invalid_argument("unknown output format '" + opts.format + "'");
  }

  if (opts.path.empty()) {
    std::cout << out.str();
    std::cout.flush();
    if (!std::cout) throw std::runtime_error("failed writing to standard output");
    return;
  }
  std::ofstream file(opts.path, std::ios::binary | std::ios::trunc);
  if (!file) throw std::runtime_error("cannot open '" + opts.path + "' for writing");
  file << out.str();
  if (!file.flush()) throw std::runtime_error("failed writing '" + opts.path + "'");
}

}  // namespace lab
