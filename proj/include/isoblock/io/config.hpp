#pragma once

#include <cstdlib>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "isoblock/core/common.hpp"

namespace isoblock {
namespace io {

namespace detail {

inline std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

}  // namespace detail

/// Flat `key = value` configuration file.  `#` starts a comment (full line or
/// trailing), blank lines are skipped, keys keep their first occurrence order
/// and must be unique.  Anything else is a config_error.
class ConfigMap {
 public:
  static ConfigMap parse(const std::string& text) {
    ConfigMap cfg;
    std::size_t line_start = 0;
    int line_no = 0;
    while (line_start <= text.size()) {
      std::size_t line_end = text.find('\n', line_start);
      if (line_end == std::string::npos) line_end = text.size();
      std::string line = text.substr(line_start, line_end - line_start);
      line_start = line_end + 1;
      ++line_no;

      const auto hash = line.find('#');
      if (hash != std::string::npos) line = line.substr(0, hash);
      line = detail::trim(line);
      if (line.empty()) continue;

      const auto eq = line.find('=');
      if (eq == std::string::npos)
        throw config_error("config line " + std::to_string(line_no) + ": expected key = value, got \"" + line + "\"");
      const std::string key = detail::trim(line.substr(0, eq));
      const std::string value = detail::trim(line.substr(eq + 1));
      if (key.empty()) throw config_error("config line " + std::to_string(line_no) + ": empty key");
      if (cfg.has(key)) throw config_error("config line " + std::to_string(line_no) + ": duplicate key \"" + key + "\"");
      cfg.entries_.emplace_back(key, value);
    }
    return cfg;
  }

  bool has(const std::string& key) const {
    for (const auto& [k, v] : entries_)
      if (k == key) return true;
    return false;
  }

  std::string get_string(const std::string& key) const {
    for (const auto& [k, v] : entries_)
      if (k == key) return v;
    throw config_error("missing required config key \"" + key + "\"");
  }
  std::string get_string(const std::string& key, const std::string& fallback) const {
    return has(key) ? get_string(key) : fallback;
  }

  double get_double(const std::string& key) const { return parse_double(key, get_string(key)); }
  double get_double(const std::string& key, double fallback) const {
    return has(key) ? get_double(key) : fallback;
  }

  long long get_int(const std::string& key) const {
    const std::string raw = get_string(key);
    char* end = nullptr;
    const long long v = std::strtoll(raw.c_str(), &end, 10);
    if (end == raw.c_str() || *end != '\0')
      throw config_error("config key \"" + key + "\": expected integer, got \"" + raw + "\"");
    return v;
  }
  long long get_int(const std::string& key, long long fallback) const {
    return has(key) ? get_int(key) : fallback;
  }

  bool get_bool(const std::string& key) const {
    const std::string raw = get_string(key);
    if (raw == "true" || raw == "1" || raw == "yes") return true;
    if (raw == "false" || raw == "0" || raw == "no") return false;
    throw config_error("config key \"" + key + "\": expected boolean, got \"" + raw + "\"");
  }
  bool get_bool(const std::string& key, bool fallback) const {
    return has(key) ? get_bool(key) : fallback;
  }

  /// Rejects any key outside `allowed` so typos fail loudly instead of being
  /// silently ignored.
  void check_allowed(const std::set<std::string>& allowed) const {
    for (const auto& [k, v] : entries_)
      if (allowed.find(k) == allowed.end()) throw config_error("unknown config key \"" + k + "\"");
  }

  const std::vector<std::pair<std::string, std::string>>& entries() const { return entries_; }

 private:
  static double parse_double(const std::string& key, const std::string& raw) {
    char* end = nullptr;
    const double v = std::strtod(raw.c_str(), &end);
    if (end == raw.c_str() || *end != '\0')
      throw config_error("config key \"" + key + "\": expected number, got \"" + raw + "\"");
    return v;
  }

  std::vector<std::pair<std::string, std::string>> entries_;
};

}  // namespace io
}  // namespace isoblock
