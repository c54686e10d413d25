#include "schrodlab/config.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

namespace schrodlab {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

std::string strip_comment(const std::string& s) {
  for (std::size_t i = 0; i < s.size(); ++i)
    if (s[i] == '#' || s[i] == ';') return s.substr(0, i);
  return s;
}

std::string join(const std::vector<std::string>& items) {
  std::ostringstream os;
  os << "configuration invalid (" << items.size()
     << (items.size() == 1 ? " issue)" : " issues)");
  for (const auto& it : items) os << "\n  - " << it;
  return os.str();
}

bool parse_double(const std::string& s, double& out) {
  const std::string t = trim(s);
  if (t.empty()) return false;
  char* end = nullptr;
  out = std::strtod(t.c_str(), &end);
  return end == t.c_str() + t.size();
}

}  // namespace

ValidationError::ValidationError(std::vector<std::string> items)
    : std::runtime_error(join(items)), issues(std::move(items)) {}

const ConfigEntry* ConfigFile::find(const std::string& section,
                                    const std::string& key) const {
  auto it = sections.find(section);
  if (it == sections.end()) return nullptr;
  for (const auto& e : it->second)
    if (e.key == key) return &e;
  return nullptr;
}

ConfigFile parse_config_text(const std::string& text,
                             const std::string& path) {
  ConfigFile f;
  f.path = path;
  f.raw = text;
  std::vector<std::string> issues;
  std::istringstream in(text);
  std::string line;
  std::string section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string body = trim(strip_comment(line));
    if (body.empty()) continue;
    if (body.front() == '[') {
      if (body.back() != ']' || body.size() < 3) {
        issues.push_back(path + ":" + std::to_string(lineno) +
                         ": malformed section header '" + body + "'");
        continue;
      }
      section = trim(body.substr(1, body.size() - 2));
      f.sections[section];  // record even if empty
      continue;
    }
    const auto eq = body.find('=');
    if (eq == std::string::npos) {
      issues.push_back(path + ":" + std::to_string(lineno) +
                       ": expected 'key = value', got '" + body + "'");
      continue;
    }
    ConfigEntry e;
    e.key = trim(body.substr(0, eq));
    e.value = trim(body.substr(eq + 1));
    e.line = lineno;
    if (e.key.empty()) {
      issues.push_back(path + ":" + std::to_string(lineno) +
                       ": empty key before '='");
      continue;
    }
    if (section.empty()) {
      issues.push_back(path + ":" + std::to_string(lineno) + ": key '" +
                       e.key + "' appears before any [section]");
      continue;
    }
    for (const auto& prev : f.sections[section])
      if (prev.key == e.key)
        issues.push_back(path + ":" + std::to_string(lineno) +
                         ": duplicate key '" + e.key + "' in [" + section +
                         "] (first set on line " + std::to_string(prev.line) +
                         ")");
    f.sections[section].push_back(std::move(e));
  }
  if (!issues.empty()) throw ValidationError(std::move(issues));
  return f;
}

ConfigFile parse_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str(), path);
}

double ConfigReader::number(const std::string& section, const std::string& key,
                            std::optional<double> fallback) {
  const ConfigEntry* e = file_.find(section, key);
  if (!e) {
    if (fallback) return *fallback;
    issues_.push_back("[" + section + "] is missing required key '" + key +
                      "'");
    return 0;
  }
  double v = 0;
  if (!parse_double(e->value, v)) {
    issues_.push_back(file_.path + ":" + std::to_string(e->line) + ": [" +
                      section + "] " + key + " = '" + e->value +
                      "' is not a number");
    return fallback.value_or(0);
  }
  return v;
}

int ConfigReader::integer(const std::string& section, const std::string& key,
                          std::optional<int> fallback) {
  const ConfigEntry* e = file_.find(section, key);
  if (!e) {
    if (fallback) return *fallback;
    issues_.push_back("[" + section + "] is missing required key '" + key +
                      "'");
    return 0;
  }
  double v = 0;
  if (!parse_double(e->value, v) || v != static_cast<double>(
                                             static_cast<long long>(v))) {
    issues_.push_back(file_.path + ":" + std::to_string(e->line) + ": [" +
                      section + "] " + key + " = '" + e->value +
                      "' is not an integer");
    return fallback.value_or(0);
  }
  return static_cast<int>(v);
}

bool ConfigReader::flag(const std::string& section, const std::string& key,
                        bool fallback) {
  const ConfigEntry* e = file_.find(section, key);
  if (!e) return fallback;
  if (e->value == "true" || e->value == "1" || e->value == "yes") return true;
  if (e->value == "false" || e->value == "0" || e->value == "no") return false;
  issues_.push_back(file_.path + ":" + std::to_string(e->line) + ": [" +
                    section + "] " + key + " = '" + e->value +
                    "' is not a boolean (true/false)");
  return fallback;
}

std::string ConfigReader::text(const std::string& section,
                               const std::string& key,
                               const std::string& fallback) {
  const ConfigEntry* e = file_.find(section, key);
  return e ? e->value : fallback;
}

std::vector<double> ConfigReader::number_list(const std::string& section,
                                              const std::string& key,
                                              bool required) {
  const ConfigEntry* e = file_.find(section, key);
  if (!e) {
    if (required)
      issues_.push_back("[" + section + "] is missing required key '" + key +
                        "'");
    return {};
  }
  std::vector<double> out;
  std::stringstream ss(e->value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    double v = 0;
    if (!parse_double(item, v)) {
      issues_.push_back(file_.path + ":" + std::to_string(e->line) + ": [" +
                        section + "] " + key + " contains a non-numeric "
                        "entry '" + trim(item) + "'");
      return {};
    }
    out.push_back(v);
  }
  if (out.empty())
    issues_.push_back(file_.path + ":" + std::to_string(e->line) + ": [" +
                      section + "] " + key + " is an empty list");
  return out;
}

}  // namespace schrodlab
