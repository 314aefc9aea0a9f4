#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>

#include "sbpairs/decimal.hpp"

namespace sbpairs {

// Flat `key = value` text. `#` starts a comment, blank lines are ignored and
// values may be wrapped in double quotes. Later assignments win.
class Config {
 public:
  static Config parse(std::istream& in);
  static Config load(const std::string& path);

  void set(std::string key, std::string value);
  // `key=value` as given on a command line.
  void set_assignment(std::string_view assignment);
  void merge(const Config& other);

  bool has(std::string_view key) const;
  std::optional<std::string> get(std::string_view key) const;

  std::string get_string(std::string_view key, std::string fallback) const;
  std::int64_t get_int(std::string_view key, std::int64_t fallback) const;
  double get_double(std::string_view key, double fallback) const;
  Decimal get_decimal(std::string_view key, Decimal fallback) const;
  bool get_bool(std::string_view key, bool fallback) const;

  // Throws InvalidConfig naming the first key not in `known`.
  void require_known(const std::set<std::string, std::less<>>& known) const;

  const std::map<std::string, std::string, std::less<>>& entries() const { return values_; }
  void write(std::ostream& out) const;

 private:
  std::map<std::string, std::string, std::less<>> values_;
};

// "HH:MM" or "HH:MM:SS" to nanoseconds after midnight. Throws InvalidConfig.
std::int64_t parse_time_of_day(std::string_view text);
std::string format_time_of_day(std::int64_t ns);

}  // namespace sbpairs
