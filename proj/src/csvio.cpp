#include "schrodlab/csvio.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "schrodlab/common.hpp"

namespace schrodlab {

std::string hex16(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(v));
  return buf;
}

void Table::add_row(std::vector<Cell> cells) {
  if (cells.size() != header.size())
    throw std::invalid_argument("row width does not match the table header");
  rows.push_back(std::move(cells));
}

std::string format_cell(const Cell& c) {
  if (std::holds_alternative<double>(c)) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.16e", std::get<double>(c));
    return buf;
  }
  if (std::holds_alternative<std::int64_t>(c))
    return std::to_string(std::get<std::int64_t>(c));
  if (std::holds_alternative<bool>(c))
    return std::get<bool>(c) ? "true" : "false";
  return std::get<std::string>(c);
}

std::string to_csv(const Table& t) {
  std::string out;
  for (std::size_t i = 0; i < t.header.size(); ++i) {
    if (i) out += ',';
    out += t.header[i];
  }
  out += '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += format_cell(row[i]);
    }
    out += '\n';
  }
  return out;
}

std::string to_json(const Table& t) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& row : t.rows) {
    nlohmann::ordered_json obj;
    for (std::size_t i = 0; i < row.size(); ++i) {
      const Cell& c = row[i];
      // Doubles go through the same fixed rendering as the CSV so that the
      // two mirrors agree byte-for-byte on every value.
      if (std::holds_alternative<double>(c))
        obj[t.header[i]] = format_cell(c);
      else if (std::holds_alternative<std::int64_t>(c))
        obj[t.header[i]] = std::get<std::int64_t>(c);
      else if (std::holds_alternative<bool>(c))
        obj[t.header[i]] = std::get<bool>(c);
      else
        obj[t.header[i]] = std::get<std::string>(c);
    }
    arr.push_back(std::move(obj));
  }
  return arr.dump(2) + "\n";
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << contents;
  if (!out) throw std::runtime_error("write failed: " + path);
}

void write_table(const std::string& stem, const Table& t) {
  write_file(stem + ".csv", to_csv(t));
  write_file(stem + ".json", to_json(t));
}

void write_plot_columns(const std::string& path,
                        const std::vector<std::string>& column_names,
                        const std::vector<std::vector<double>>& columns) {
  if (columns.empty())
    throw std::invalid_argument("plot output needs at least one column");
  const std::size_t n = columns.front().size();
  for (const auto& c : columns)
    if (c.size() != n)
      throw std::invalid_argument("plot columns differ in length");
  std::string out = "#";
  for (const auto& name : column_names) out += " " + name;
  out += '\n';
  char buf[40];
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t c = 0; c < columns.size(); ++c) {
      std::snprintf(buf, sizeof buf, "%.16e", columns[c][i]);
      if (c) out += ' ';
      out += buf;
    }
    out += '\n';
  }
  write_file(path, out);
}

void write_meta(const std::string& path, const std::string& scenario,
                std::uint64_t config_hash, double wall_seconds) {
  nlohmann::ordered_json meta;
  meta["scenario"] = scenario;
  meta["config_hash"] = hex16(config_hash);
  meta["version"] = kVersionTag;
  meta["wall_seconds"] = wall_seconds;
  write_file(path, meta.dump(2) + "\n");
}

}  // namespace schrodlab
