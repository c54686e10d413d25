#pragma once
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace schrodlab {

// Sectioned key = value config format:
//   [section]
//   key = value          # '#' or ';' start a comment
// Values are scalars, "true"/"false", or comma-separated lists. Line numbers
// are kept so validation can point at the offending input.
struct ConfigEntry {
  std::string key;
  std::string value;
  int line = 0;
};

struct ConfigFile {
  std::string path;
  std::string raw;  // exact bytes, hashed for provenance
  std::map<std::string, std::vector<ConfigEntry>> sections;

  bool has_section(const std::string& s) const {
    return sections.count(s) > 0;
  }
  const ConfigEntry* find(const std::string& section,
                          const std::string& key) const;
};

// Collects every problem instead of stopping at the first one.
struct ValidationError : std::runtime_error {
  explicit ValidationError(std::vector<std::string> items);
  std::vector<std::string> issues;
};

ConfigFile parse_config_text(const std::string& text, const std::string& path);
ConfigFile parse_config_file(const std::string& path);

// Typed getters; a violation appends to `issues` (with the line number when
// the key exists) and returns the fallback.
class ConfigReader {
 public:
  ConfigReader(const ConfigFile& f, std::vector<std::string>& issues)
      : file_(f), issues_(issues) {}

  double number(const std::string& section, const std::string& key,
                std::optional<double> fallback = std::nullopt);
  int integer(const std::string& section, const std::string& key,
              std::optional<int> fallback = std::nullopt);
  bool flag(const std::string& section, const std::string& key, bool fallback);
  std::string text(const std::string& section, const std::string& key,
                   const std::string& fallback);
  std::vector<double> number_list(const std::string& section,
                                  const std::string& key,
                                  bool required = false);
  void complain(const std::string& msg) { issues_.push_back(msg); }

 private:
  const ConfigFile& file_;
  std::vector<std::string>& issues_;
};

}  // namespace schrodlab
