#pragma once
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

namespace schrodlab {

// Output table with a fixed documented header. Doubles are rendered with 17
// significant digits (%.16e) so that values round-trip exactly and reruns
// are byte-identical. Wall-clock time never enters the table; it lives in
// the sidecar metadata file only.
using Cell = std::variant<double, std::int64_t, bool, std::string>;

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<Cell>> rows;

  void add_row(std::vector<Cell> cells);
};

std::string format_cell(const Cell& c);
std::string to_csv(const Table& t);
std::string to_json(const Table& t);  // array of objects mirroring the rows

void write_file(const std::string& path, const std::string& contents);
// Writes <stem>.csv and <stem>.json.
void write_table(const std::string& stem, const Table& t);

// Two/three-column whitespace-separated text for direct plotting.
void write_plot_columns(const std::string& path,
                        const std::vector<std::string>& column_names,
                        const std::vector<std::vector<double>>& columns);

// Sidecar metadata: scenario name, config hash, version tag, wall time.
void write_meta(const std::string& path, const std::string& scenario,
                std::uint64_t config_hash, double wall_seconds);

}  // namespace schrodlab
