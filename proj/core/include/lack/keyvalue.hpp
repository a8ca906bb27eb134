#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace lack {

// Flat `key = value` configuration with INI-style `[section]` headers that
// prefix the keys that follow them (`[network]` + `loss` -> `network.loss`).
// `#` and `;` start comments. Every error is a ConfigError naming the key path.
class KeyValueConfig {
 public:
  KeyValueConfig() = default;

  static KeyValueConfig parse(std::istream& in, const std::string& source = "<input>");
  static KeyValueConfig load(const std::filesystem::path& path);

  bool has(const std::string& key) const;
  void set(const std::string& key, std::string value);

  const std::string& get_string(const std::string& key) const;
  std::string get_string(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key) const;
  double get_double(const std::string& key, double fallback) const;
  std::optional<double> find_double(const std::string& key) const;
  std::uint64_t get_uint(const std::string& key) const;
  std::uint64_t get_uint(const std::string& key, std::uint64_t fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;

  // Comma-separated list of raw values.
  std::vector<std::string> get_list(const std::string& key) const;

  // Keys starting with `prefix`, in lexicographic order.
  std::vector<std::string> keys_with_prefix(const std::string& prefix) const;
  const std::map<std::string, std::string>& entries() const noexcept { return values_; }

  // Throws ConfigError for the first key never read by any getter (typo guard).
  void reject_unused(const std::set<std::string>& also_allowed_prefixes = {}) const;

  // Base directory for relative paths mentioned in the file.
  const std::filesystem::path& base_dir() const noexcept { return base_dir_; }

 private:
  const std::string* find(const std::string& key) const;

  std::map<std::string, std::string> values_;
  mutable std::set<std::string> used_;
  std::filesystem::path base_dir_;
};

}  // namespace lack
