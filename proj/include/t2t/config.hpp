#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "t2t/errors.hpp"

namespace t2t {

/// Sectioned key-value text:
///
///   # comment
///   [section]
///   key = value
///
/// Keys are addressed as "section.key". Reads are tracked so that misspelled
/// keys can be reported.
class KeyValueDoc {
 public:
  static KeyValueDoc parse(std::string_view text, const std::string& source = "config");
  static KeyValueDoc load(const std::string& path);

  /// Sets or replaces "section.key".
  void set(const std::string& key, const std::string& value);
  /// Applies "section.key=value".
  void apply_override(const std::string& assignment);

  bool has(const std::string& key) const;
  bool has_section(const std::string& section) const;

  std::string text(const std::string& key, const std::string& fallback) const;
  double number(const std::string& key, double fallback) const;
  long long integer(const std::string& key, long long fallback) const;
  std::optional<std::string> raw(const std::string& key) const;

  /// Keys present in the document that were never read.
  std::vector<std::string> unread() const;
  /// Throws ConfigError if any key was never read.
  void reject_unread() const;

 private:
  std::map<std::string, std::string> values_;
  mutable std::set<std::string> read_;
  std::string source_;
};

double parse_number(const std::string& field, const std::string& text);
long long parse_integer(const std::string& field, const std::string& text);

/// "a,b,c" or "lo:hi:step" (inclusive of hi within rounding).
std::vector<double> parse_value_list(const std::string& field, const std::string& text);

}  // namespace t2t
