#include "sbpairs/decimal.hpp"

#include <cmath>
#include <cstdlib>
#include <limits>

namespace sbpairs {

std::optional<Decimal> Decimal::parse(std::string_view text) {
  if (text.empty()) return std::nullopt;
  bool negative = false;
  std::size_t pos = 0;
  if (text[0] == '-' || text[0] == '+') {
    negative = text[0] == '-';
    pos = 1;
  }
  constexpr std::int64_t kMax = std::numeric_limits<std::int64_t>::max() / 10;
  std::int64_t whole = 0;
  int whole_digits = 0;
  for (; pos < text.size() && text[pos] != '.'; ++pos) {
    const char c = text[pos];
    if (c < '0' || c > '9') return std::nullopt;
    if (whole > kMax / kScale) return std::nullopt;
    whole = whole * 10 + (c - '0');
    ++whole_digits;
  }
  std::int64_t frac = 0;
  int frac_digits = 0;
  if (pos < text.size()) {
    ++pos;  // '.'
    for (; pos < text.size(); ++pos) {
      const char c = text[pos];
      if (c < '0' || c > '9') return std::nullopt;
      if (frac_digits == kDigits) {
        if (c != '0') return std::nullopt;
        continue;
      }
      frac = frac * 10 + (c - '0');
      ++frac_digits;
    }
  }
  if (whole_digits == 0 && frac_digits == 0) return std::nullopt;
  for (int i = frac_digits; i < kDigits; ++i) frac *= 10;
  const std::int64_t raw = whole * kScale + frac;
  return from_raw(negative ? -raw : raw);
}

Decimal Decimal::from_double(double value) {
  return from_raw(static_cast<std::int64_t>(std::llround(value * static_cast<double>(kScale))));
}

std::string Decimal::str() const {
  const bool negative = raw_ < 0;
  const std::uint64_t mag = negative ? static_cast<std::uint64_t>(-(raw_ + 1)) + 1u
                                     : static_cast<std::uint64_t>(raw_);
  std::string out = negative ? "-" : "";
  out += std::to_string(mag / kScale);
  std::uint64_t frac = mag % kScale;
  if (frac != 0) {
    std::string digits = std::to_string(frac);
    digits.insert(0, kDigits - digits.size(), '0');
    while (!digits.empty() && digits.back() == '0') digits.pop_back();
    out += '.';
    out += digits;
  }
  return out;
}

Decimal Decimal::mul(Decimal other) const {
  const __int128 prod = static_cast<__int128>(raw_) * other.raw_;
  const __int128 half = kScale / 2;
  const __int128 q = prod >= 0 ? (prod + half) / kScale : (prod - half) / kScale;
  return from_raw(static_cast<std::int64_t>(q));
}

}  // namespace sbpairs
