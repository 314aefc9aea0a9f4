#include "sbpairs/config.hpp"

#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>

#include "sbpairs/csv.hpp"
#include "sbpairs/error.hpp"

namespace sbpairs {
namespace {

[[noreturn]] void bad_value(std::string_view key, std::string_view value, std::string_view want) {
  throw Error(Errc::invalid_config,
              "config key '" + std::string(key) + "': expected " + std::string(want) + ", got '" +
                  std::string(value) + "'");
}

std::string unquote(std::string_view v) {
  if (v.size() >= 2 && v.front() == '"' && v.back() == '"') v = v.substr(1, v.size() - 2);
  return std::string(v);
}

}  // namespace

Config Config::parse(std::istream& in) {
  Config cfg;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view = line;
    // Comments only outside quotes; none of our values contain '#'.
    if (const auto hash = view.find('#'); hash != std::string_view::npos) view = view.substr(0, hash);
    view = csv::trim(view);
    if (view.empty()) continue;
    const auto eq = view.find('=');
    if (eq == std::string_view::npos)
      throw Error(Errc::invalid_config, "config line " + std::to_string(line_no) + ": missing '='");
    const auto key = csv::trim(view.substr(0, eq));
    if (key.empty()) throw Error(Errc::invalid_config, "config line " + std::to_string(line_no) + ": empty key");
    cfg.set(std::string(key), unquote(csv::trim(view.substr(eq + 1))));
  }
  return cfg;
}

Config Config::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::io, "cannot open config " + path);
  return parse(in);
}

void Config::set(std::string key, std::string value) { values_[std::move(key)] = std::move(value); }

void Config::set_assignment(std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos || eq == 0)
    throw Error(Errc::invalid_config, "expected key=value, got '" + std::string(assignment) + "'");
  set(std::string(csv::trim(assignment.substr(0, eq))), unquote(csv::trim(assignment.substr(eq + 1))));
}

void Config::merge(const Config& other) {
  for (const auto& [k, v] : other.values_) values_[k] = v;
}

bool Config::has(std::string_view key) const { return values_.find(key) != values_.end(); }

std::optional<std::string> Config::get(std::string_view key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return std::nullopt;
  return it->second;
}

std::string Config::get_string(std::string_view key, std::string fallback) const {
  auto v = get(key);
  return v ? *v : std::move(fallback);
}

std::int64_t Config::get_int(std::string_view key, std::int64_t fallback) const {
  const auto v = get(key);
  if (!v) return fallback;
  std::string digits;
  for (char c : *v)
    if (c != '_') digits += c;
  const auto parsed = csv::to_int<std::int64_t>(digits);
  if (!parsed) bad_value(key, *v, "an integer");
  return *parsed;
}

double Config::get_double(std::string_view key, double fallback) const {
  const auto v = get(key);
  if (!v) return fallback;
  const auto parsed = csv::to_double(*v);
  if (!parsed) bad_value(key, *v, "a number");
  return *parsed;
}

Decimal Config::get_decimal(std::string_view key, Decimal fallback) const {
  const auto v = get(key);
  if (!v) return fallback;
  std::string digits;
  for (char c : *v)
    if (c != '_') digits += c;
  const auto parsed = Decimal::parse(digits);
  if (!parsed) bad_value(key, *v, "a decimal with at most 6 fractional digits");
  return *parsed;
}

bool Config::get_bool(std::string_view key, bool fallback) const {
  const auto v = get(key);
  if (!v) return fallback;
  if (*v == "true" || *v == "1" || *v == "yes" || *v == "on") return true;
  if (*v == "false" || *v == "0" || *v == "no" || *v == "off") return false;
  bad_value(key, *v, "a boolean");
}

void Config::require_known(const std::set<std::string, std::less<>>& known) const {
  for (const auto& [k, v] : values_)
    if (!known.contains(k)) throw Error(Errc::invalid_config, "unknown config key '" + k + "'");
}

void Config::write(std::ostream& out) const {
  for (const auto& [k, v] : values_) out << k << " = " << v << '\n';
}

std::int64_t parse_time_of_day(std::string_view text) {
  const auto parts = csv::split(text, ':');
  if (parts.size() < 2 || parts.size() > 3)
    throw Error(Errc::invalid_config, "expected HH:MM[:SS], got '" + std::string(text) + "'");
  std::int64_t fields[3] = {0, 0, 0};
  for (std::size_t k = 0; k < parts.size(); ++k) {
    const auto v = csv::to_int<std::int64_t>(parts[k]);
    if (!v || *v < 0) throw Error(Errc::invalid_config, "bad time of day '" + std::string(text) + "'");
    fields[k] = *v;
  }
  if (fields[0] > 24 || fields[1] > 59 || fields[2] > 59)
    throw Error(Errc::invalid_config, "time of day out of range '" + std::string(text) + "'");
  return ((fields[0] * 60 + fields[1]) * 60 + fields[2]) * 1'000'000'000;
}

std::string format_time_of_day(std::int64_t ns) {
  const std::int64_t s = ns / 1'000'000'000;
  char buf[48];
  std::snprintf(buf, sizeof buf, "%02lld:%02lld:%02lld", static_cast<long long>(s / 3600),
                static_cast<long long>(s / 60 % 60), static_cast<long long>(s % 60));
  return buf;
}

}  // namespace sbpairs
