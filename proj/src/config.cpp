#include "t2t/config.hpp"

#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace t2t {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

}  // namespace

KeyValueDoc KeyValueDoc::parse(std::string_view text, const std::string& source) {
  KeyValueDoc doc;
  doc.source_ = source;
  std::string section;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t nl = text.find('\n', pos);
    const std::string_view raw = text.substr(pos, nl == std::string_view::npos ? text.npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    std::string line = trim(raw.substr(0, raw.find('#')));
    if (line.empty()) continue;
    auto where = [&] { return source + ":" + std::to_string(line_no) + ": "; };
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError(where() + "unterminated section header");
      section = trim(std::string_view(line).substr(1, line.size() - 2));
      if (section.empty()) throw ConfigError(where() + "empty section name");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(where() + "expected key = value");
    if (section.empty()) throw ConfigError(where() + "key outside any section");
    const std::string key = trim(std::string_view(line).substr(0, eq));
    if (key.empty()) throw ConfigError(where() + "empty key");
    const std::string full = section + "." + key;
    if (!doc.values_.emplace(full, trim(std::string_view(line).substr(eq + 1))).second)
      throw ConfigError(where() + "duplicate key '" + full + "'");
  }
  return doc;
}

KeyValueDoc KeyValueDoc::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str(), path);
}

void KeyValueDoc::set(const std::string& key, const std::string& value) {
  if (key.find('.') == std::string::npos) throw ConfigError("override key '" + key + "' needs a section");
  values_[key] = value;
}

void KeyValueDoc::apply_override(const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) throw ConfigError("override '" + assignment + "' is not key=value");
  set(trim(std::string_view(assignment).substr(0, eq)), trim(std::string_view(assignment).substr(eq + 1)));
}

bool KeyValueDoc::has(const std::string& key) const { return values_.count(key) != 0; }

bool KeyValueDoc::has_section(const std::string& section) const {
  const auto it = values_.lower_bound(section + ".");
  return it != values_.end() && it->first.compare(0, section.size() + 1, section + ".") == 0;
}

std::optional<std::string> KeyValueDoc::raw(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return std::nullopt;
  read_.insert(key);
  return it->second;
}

std::string KeyValueDoc::text(const std::string& key, const std::string& fallback) const {
  return raw(key).value_or(fallback);
}

double KeyValueDoc::number(const std::string& key, double fallback) const {
  const auto v = raw(key);
  return v ? parse_number(key, *v) : fallback;
}

long long KeyValueDoc::integer(const std::string& key, long long fallback) const {
  const auto v = raw(key);
  return v ? parse_integer(key, *v) : fallback;
}

std::vector<std::string> KeyValueDoc::unread() const {
  std::vector<std::string> out;
  for (const auto& [k, v] : values_)
    if (!read_.count(k)) out.push_back(k);
  return out;
}

void KeyValueDoc::reject_unread() const {
  const auto left = unread();
  if (!left.empty()) throw ConfigError(source_ + ": unknown key '" + left.front() + "'");
}

double parse_number(const std::string& field, const std::string& text) {
  const std::string t = trim(text);
  if (t.empty()) throw ConfigError(field + ": expected a number, got nothing");
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(t.c_str(), &end);
  if (end != t.c_str() + t.size() || errno == ERANGE || !std::isfinite(v))
    throw ConfigError(field + ": '" + t + "' is not a finite number");
  return v;
}

long long parse_integer(const std::string& field, const std::string& text) {
  const std::string t = trim(text);
  char* end = nullptr;
  errno = 0;
  const long long v = std::strtoll(t.c_str(), &end, 10);
  if (t.empty() || end != t.c_str() + t.size() || errno == ERANGE)
    throw ConfigError(field + ": '" + t + "' is not an integer");
  return v;
}

std::vector<double> parse_value_list(const std::string& field, const std::string& text) {
  const std::string t = trim(text);
  std::vector<double> out;
  if (t.empty()) throw ConfigError(field + ": no values given");
  if (t.find(':') != std::string::npos) {
    std::vector<double> parts;
    std::stringstream ss(t);
    std::string item;
    while (std::getline(ss, item, ':')) parts.push_back(parse_number(field, item));
    if (parts.size() != 3) throw ConfigError(field + ": range must be lo:hi:step");
    const double lo = parts[0], hi = parts[1], step = parts[2];
    if (!(step > 0.0) || hi < lo) throw ConfigError(field + ": range needs lo <= hi and step > 0");
    const auto n = static_cast<long long>(std::floor((hi - lo) / step + 1e-9));
    if (n > 100000) throw ConfigError(field + ": range has too many values");
    for (long long i = 0; i <= n; ++i) out.push_back(lo + static_cast<double>(i) * step);
    return out;
  }
  std::stringstream ss(t);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_number(field, item));
  return out;
}

}  // namespace t2t
