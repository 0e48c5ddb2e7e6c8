#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace segi {

/// Flat key-value configuration document.
///
/// One `key = value` pair per line; keys are dotted (`ga.population`,
/// `scene.phase.1.kind`). `#` starts a comment. Later assignments override
/// earlier ones. Typed getters throw InvalidInput on malformed values, and
/// `require_all_used()` rejects keys nobody asked for so typos surface.
class ConfigMap {
 public:
  static ConfigMap parse(const std::string& text);
  static ConfigMap load(const std::filesystem::path& path);

  void set(const std::string& key, const std::string& value);
  /// Applies a `key=value` override as given on the command line.
  void set_assignment(const std::string& assignment);

  bool contains(const std::string& key) const;

  std::optional<std::string> get_string(const std::string& key) const;
  std::optional<long long> get_int(const std::string& key) const;
  std::optional<std::uint64_t> get_u64(const std::string& key) const;
  std::optional<double> get_double(const std::string& key) const;
  std::optional<bool> get_bool(const std::string& key) const;

  std::string get_string(const std::string& key, const std::string& fallback) const;
  long long get_int(const std::string& key, long long fallback) const;
  double get_double(const std::string& key, double fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;

  /// Keys with the given prefix, in lexicographic order.
  std::vector<std::string> keys_with_prefix(const std::string& prefix) const;

  void require_all_used() const;

  /// Canonical `key = value` listing, sorted by key.
  std::string dump() const;

  const std::map<std::string, std::string>& entries() const { return entries_; }

 private:
  const std::string* find(const std::string& key) const;

  std::map<std::string, std::string> entries_;
  mutable std::set<std::string> used_;
};

}  // namespace segi
