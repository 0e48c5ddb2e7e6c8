#include "segi/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

#include "segi/error.hpp"

namespace segi {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

bool valid_key(const std::string& key) {
  return !key.empty() && std::all_of(key.begin(), key.end(), [](unsigned char c) {
    return std::isalnum(c) || c == '.' || c == '_' || c == '-';
  });
}

[[noreturn]] void bad_value(const std::string& key, const std::string& value, const char* type) {
  throw InvalidInput("config: '" + key + "' expects " + type + ", got '" + value + "'");
}

template <class T>
T parse_number(const std::string& key, const std::string& value, const char* type) {
  T out{};
  const char* begin = value.data();
  const char* end = begin + value.size();
  auto [ptr, ec] = std::from_chars(begin, end, out);
  if (ec != std::errc() || ptr != end) bad_value(key, value, type);
  return out;
}

}  // namespace

ConfigMap ConfigMap::parse(const std::string& text) {
  ConfigMap config;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw InvalidInput("config line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    const std::string key = trim(line.substr(0, eq));
    if (!valid_key(key)) {
      throw InvalidInput("config line " + std::to_string(line_no) + ": bad key '" + key + "'");
    }
    config.entries_[key] = trim(line.substr(eq + 1));
  }
  return config;
}

ConfigMap ConfigMap::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("config: cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse(buffer.str());
}

void ConfigMap::set(const std::string& key, const std::string& value) {
  if (!valid_key(key)) throw InvalidInput("config: bad key '" + key + "'");
  entries_[key] = value;
}

void ConfigMap::set_assignment(const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) throw InvalidInput("expected key=value, got '" + assignment + "'");
  set(trim(assignment.substr(0, eq)), trim(assignment.substr(eq + 1)));
}

bool ConfigMap::contains(const std::string& key) const { return entries_.count(key) != 0; }

const std::string* ConfigMap::find(const std::string& key) const {
  const auto it = entries_.find(key);
  if (it == entries_.end()) return nullptr;
  used_.insert(key);
  return &it->second;
}

std::optional<std::string> ConfigMap::get_string(const std::string& key) const {
  if (const auto* v = find(key)) return *v;
  return std::nullopt;
}

std::optional<long long> ConfigMap::get_int(const std::string& key) const {
  if (const auto* v = find(key)) return parse_number<long long>(key, *v, "an integer");
  return std::nullopt;
}

std::optional<std::uint64_t> ConfigMap::get_u64(const std::string& key) const {
  if (const auto* v = find(key)) return parse_number<std::uint64_t>(key, *v, "an unsigned integer");
  return std::nullopt;
}

std::optional<double> ConfigMap::get_double(const std::string& key) const {
  if (const auto* v = find(key)) return parse_number<double>(key, *v, "a number");
  return std::nullopt;
}

std::optional<bool> ConfigMap::get_bool(const std::string& key) const {
  const auto* v = find(key);
  if (!v) return std::nullopt;
  if (*v == "true" || *v == "1" || *v == "yes") return true;
  if (*v == "false" || *v == "0" || *v == "no") return false;
  bad_value(key, *v, "a boolean");
}

std::string ConfigMap::get_string(const std::string& key, const std::string& fallback) const {
  return get_string(key).value_or(fallback);
}
long long ConfigMap::get_int(const std::string& key, long long fallback) const {
  return get_int(key).value_or(fallback);
}
double ConfigMap::get_double(const std::string& key, double fallback) const {
  return get_double(key).value_or(fallback);
}
bool ConfigMap::get_bool(const std::string& key, bool fallback) const {
  return get_bool(key).value_or(fallback);
}

std::vector<std::string> ConfigMap::keys_with_prefix(const std::string& prefix) const {
  std::vector<std::string> keys;
  for (auto it = entries_.lower_bound(prefix); it != entries_.end(); ++it) {
    if (it->first.compare(0, prefix.size(), prefix) != 0) break;
    keys.push_back(it->first);
  }
  return keys;
}

void ConfigMap::require_all_used() const {
  std::string unknown;
  for (const auto& [key, value] : entries_) {
    if (!used_.count(key)) unknown += (unknown.empty() ? "" : ", ") + key;
  }
  if (!unknown.empty()) throw InvalidInput("config: unknown keys: " + unknown);
}

std::string ConfigMap::dump() const {
  std::string out;
  for (const auto& [key, value] : entries_) out += key + " = " + value + "\n";
  return out;
}

}  // namespace segi
