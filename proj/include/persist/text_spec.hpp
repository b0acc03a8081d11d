#pragma once

// Parsing of compact "key=value; key=value" specifications, e.g.
//   "kind=ffm; beta=0.6; n=65536; seed=7"
//   "ar=0.8,-0.12; ma=0.6; sigma=1; variant=standard"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "persist/error.hpp"

namespace persist {

inline std::string trim(std::string_view s) {
  auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

inline std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos == std::string_view::npos ? pos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

inline double parse_double(std::string_view text, std::string_view field) {
  const std::string t = trim(text);
  double v = 0.0;
  const char* end = t.data() + t.size();
  auto [ptr, ec] = std::from_chars(t.data(), end, v);
  if (t.empty() || ec != std::errc{} || ptr != end) {
    throw usage_error("invalid number '" + t + "' for " + std::string(field));
  }
  return v;
}

inline std::int64_t parse_int(std::string_view text, std::string_view field) {
  const std::string t = trim(text);
  std::int64_t v = 0;
  const char* end = t.data() + t.size();
  auto [ptr, ec] = std::from_chars(t.data(), end, v);
  if (t.empty() || ec != std::errc{} || ptr != end) {
    throw usage_error("invalid integer '" + t + "' for " + std::string(field));
  }
  return v;
}

inline std::vector<double> parse_double_list(std::string_view text, std::string_view field) {
  std::vector<double> out;
  if (trim(text).empty()) return out;
  for (const auto& item : split(text, ',')) out.push_back(parse_double(item, field));
  return out;
}

/// Key/value pairs of a textual spec. Keys are case-sensitive; duplicates
/// and empty keys are rejected.
class TextSpec {
public:
  static TextSpec parse(std::string_view text) {
    TextSpec spec;
    for (const auto& part : split(text, ';')) {
      if (part.empty()) continue;
      auto eq = part.find('=');
      if (eq == std::string::npos) throw usage_error("expected key=value, got '" + part + "'");
      std::string key = trim(std::string_view(part).substr(0, eq));
      std::string value = trim(std::string_view(part).substr(eq + 1));
      if (key.empty()) throw usage_error("empty key in '" + part + "'");
      if (!spec.values_.emplace(key, value).second) throw usage_error("duplicate key '" + key + "'");
    }
    return spec;
  }

  bool has(const std::string& key) const { return values_.count(key) != 0; }

  const std::string& get(const std::string& key) const {
    auto it = values_.find(key);
    if (it == values_.end()) throw usage_error("missing key '" + key + "'");
    return it->second;
  }

  double number(const std::string& key, double fallback) const {
    return has(key) ? parse_double(get(key), key) : fallback;
  }
  double number(const std::string& key) const { return parse_double(get(key), key); }

  std::int64_t integer(const std::string& key, std::int64_t fallback) const {
    return has(key) ? parse_int(get(key), key) : fallback;
  }
  std::int64_t integer(const std::string& key) const { return parse_int(get(key), key); }

  std::vector<double> numbers(const std::string& key) const {
    return has(key) ? parse_double_list(get(key), key) : std::vector<double>{};
  }

  /// Throws if the spec contains a key outside `allowed`.
  void restrict_to(const std::set<std::string>& allowed) const {
    for (const auto& [k, v] : values_) {
      if (!allowed.count(k)) throw usage_error("unknown key '" + k + "'");
    }
  }

  const std::map<std::string, std::string>& entries() const { return values_; }

private:
  std::map<std::string, std::string> values_;
};

}  // namespace persist
