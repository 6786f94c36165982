#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

#include "alift/errors.hpp"

namespace alift {

/// Exact rational arithmetic for privacy-budget grids. Grid levels are
/// built exactly (decimal inputs, interpolation by small integers) and
/// converted to double once, so grids are identical across platforms.
class Rational {
 public:
  Rational() : num_(0), den_(1) {}
  Rational(std::int64_t n) : num_(n), den_(1) {}  // NOLINT: implicit by design
  Rational(std::int64_t n, std::int64_t d);

  /// Parses a plain decimal like "0.005", "1", or "-2.5e-3" is NOT
  /// accepted (no exponents); throws ValidationError on bad input.
  static Rational from_decimal(std::string_view text);

  /// Nearest small-denominator rational via continued fractions
  /// (denominator capped at 10^9); used when configs carry numbers
  /// rather than decimal strings.
  static Rational from_double(double x);

  double to_double() const {
    return static_cast<double>(num_) / static_cast<double>(den_);
  }
  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }
  std::string str() const;

  Rational operator+(const Rational& o) const;
  Rational operator-(const Rational& o) const;
  Rational operator*(const Rational& o) const;
  Rational operator/(const Rational& o) const;

  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend std::strong_ordering operator<=>(const Rational& a,
                                          const Rational& b);

 private:
  void normalize();
  std::int64_t num_, den_;
};

}  // namespace alift
