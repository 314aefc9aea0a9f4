#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace sbpairs {

// Signed fixed-point decimal with six fractional digits. Used for every
// price and currency amount so that P&L accounting is exact and reproducible.
class Decimal {
 public:
  static constexpr int kDigits = 6;
  static constexpr std::int64_t kScale = 1'000'000;

  constexpr Decimal() = default;

  static constexpr Decimal from_raw(std::int64_t raw) {
    Decimal d;
    d.raw_ = raw;
    return d;
  }
  static constexpr Decimal from_int(std::int64_t units) { return from_raw(units * kScale); }

  // Exact parse of "[-]digits[.digits]". More than six fractional digits is
  // rejected rather than rounded.
  static std::optional<Decimal> parse(std::string_view text);

  // Nearest representable value, ties away from zero.
  static Decimal from_double(double value);

  constexpr std::int64_t raw() const { return raw_; }
  double to_double() const { return static_cast<double>(raw_) / static_cast<double>(kScale); }

  // Shortest fixed notation: "735", "735.5", "-0.016".
  std::string str() const;

  constexpr Decimal operator-() const { return from_raw(-raw_); }
  constexpr Decimal& operator+=(Decimal o) {
    raw_ += o.raw_;
    return *this;
  }
  constexpr Decimal& operator-=(Decimal o) {
    raw_ -= o.raw_;
    return *this;
  }
  friend constexpr Decimal operator+(Decimal a, Decimal b) { return a += b; }
  friend constexpr Decimal operator-(Decimal a, Decimal b) { return a -= b; }
  friend constexpr Decimal operator*(Decimal a, std::int64_t n) { return from_raw(a.raw_ * n); }
  friend constexpr Decimal operator*(std::int64_t n, Decimal a) { return from_raw(a.raw_ * n); }

  // Product rounded half away from zero at the sixth fractional digit.
  Decimal mul(Decimal other) const;

  constexpr auto operator<=>(const Decimal&) const = default;

  constexpr bool is_zero() const { return raw_ == 0; }

 private:
  std::int64_t raw_ = 0;
};

}  // namespace sbpairs
