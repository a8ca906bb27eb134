#include "lack/keyvalue.hpp"

#include <charconv>
#include <fstream>
#include <istream>

#include "lack/error.hpp"

namespace lack {
namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::string strip_comment(const std::string& line) {
  const auto pos = line.find_first_of("#;");
  return pos == std::string::npos ? line : line.substr(0, pos);
}

}  // namespace

KeyValueConfig KeyValueConfig::parse(std::istream& in, const std::string& source) {
  KeyValueConfig cfg;
  std::string section;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string text = trim(strip_comment(line));
    if (text.empty()) continue;
    const std::string where = source + ":" + std::to_string(line_no);
    if (text.front() == '[') {
      if (text.back() != ']') throw ConfigError("", where + ": unterminated section header");
      section = trim(std::string_view(text).substr(1, text.size() - 2));
      continue;
    }
    const auto eq = text.find('=');
    if (eq == std::string::npos) throw ConfigError("", where + ": expected `key = value`");
    const std::string key = trim(std::string_view(text).substr(0, eq));
    if (key.empty()) throw ConfigError("", where + ": empty key");
    const std::string full = section.empty() ? key : section + "." + key;
    if (cfg.values_.count(full)) throw ConfigError(full, where + ": duplicate key");
    cfg.values_[full] = trim(std::string_view(text).substr(eq + 1));
  }
  return cfg;
}

KeyValueConfig KeyValueConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", "cannot open " + path.string());
  KeyValueConfig cfg = parse(in, path.string());
  cfg.base_dir_ = path.parent_path();
  return cfg;
}

bool KeyValueConfig::has(const std::string& key) const { return values_.count(key) != 0; }

void KeyValueConfig::set(const std::string& key, std::string value) {
  values_[key] = std::move(value);
}

const std::string* KeyValueConfig::find(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return nullptr;
  used_.insert(key);
  return &it->second;
}

const std::string& KeyValueConfig::get_string(const std::string& key) const {
  const std::string* v = find(key);
  if (!v) throw ConfigError(key, "missing required key");
  return *v;
}

std::string KeyValueConfig::get_string(const std::string& key, const std::string& fallback) const {
  const std::string* v = find(key);
  return v ? *v : fallback;
}

std::optional<double> KeyValueConfig::find_double(const std::string& key) const {
  const std::string* v = find(key);
  if (!v) return std::nullopt;
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(v->data(), v->data() + v->size(), out);
  if (ec != std::errc() || ptr != v->data() + v->size()) {
    throw ConfigError(key, "expected a number, got `" + *v + "`");
  }
  return out;
}

double KeyValueConfig::get_double(const std::string& key) const {
  const auto v = find_double(key);
  if (!v) throw ConfigError(key, "missing required key");
  return *v;
}

double KeyValueConfig::get_double(const std::string& key, double fallback) const {
  return find_double(key).value_or(fallback);
}

std::uint64_t KeyValueConfig::get_uint(const std::string& key) const {
  const std::string& v = get_string(key);
  std::uint64_t out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) {
    throw ConfigError(key, "expected a non-negative integer, got `" + v + "`");
  }
  return out;
}

std::uint64_t KeyValueConfig::get_uint(const std::string& key, std::uint64_t fallback) const {
  return has(key) ? get_uint(key) : fallback;
}

bool KeyValueConfig::get_bool(const std::string& key, bool fallback) const {
  const std::string* v = find(key);
  if (!v) return fallback;
  if (*v == "true" || *v == "yes" || *v == "on" || *v == "1") return true;
  if (*v == "false" || *v == "no" || *v == "off" || *v == "0") return false;
  throw ConfigError(key, "expected a boolean, got `" + *v + "`");
}

std::vector<std::string> KeyValueConfig::get_list(const std::string& key) const {
  const std::string& v = get_string(key);
  std::vector<std::string> items;
  std::size_t start = 0;
  while (start <= v.size()) {
    const auto comma = v.find(',', start);
    const auto end = comma == std::string::npos ? v.size() : comma;
    std::string item = trim(std::string_view(v).substr(start, end - start));
    if (item.empty()) throw ConfigError(key, "empty list element");
    items.push_back(std::move(item));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return items;
}

std::vector<std::string> KeyValueConfig::keys_with_prefix(const std::string& prefix) const {
  std::vector<std::string> keys;
  for (auto it = values_.lower_bound(prefix); it != values_.end(); ++it) {
    if (it->first.compare(0, prefix.size(), prefix) != 0) break;
    keys.push_back(it->first);
  }
  return keys;
}

void KeyValueConfig::reject_unused(const std::set<std::string>& also_allowed_prefixes) const {
  for (const auto& [key, value] : values_) {
    if (used_.count(key)) continue;
    bool allowed = false;
    for (const auto& prefix : also_allowed_prefixes) {
      if (key.compare(0, prefix.size(), prefix) == 0) allowed = true;
    }
    if (!allowed) throw ConfigError(key, "unknown key");
  }
}

}  // namespace lack
