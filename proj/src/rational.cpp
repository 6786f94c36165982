#include "alift/rational.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace alift {

namespace {

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t out = 0;
  if (__builtin_mul_overflow(a, b, &out)) {
    throw ValidationError("rational arithmetic overflow");
  }
  return out;
}

std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t out = 0;
  if (__builtin_add_overflow(a, b, &out)) {
    throw ValidationError("rational arithmetic overflow");
  }
  return out;
}

}  // namespace

Rational::Rational(std::int64_t n, std::int64_t d) : num_(n), den_(d) {
  if (d == 0) throw ValidationError("rational with zero denominator");
  normalize();
}

void Rational::normalize() {
  if (den_ < 0) {
    num_ = -num_;
    den_ = -den_;
  }
  const std::int64_t g = std::gcd(num_ < 0 ? -num_ : num_, den_);
  if (g > 1) {
    num_ /= g;
    den_ /= g;
  }
}

Rational Rational::from_decimal(std::string_view text) {
  if (text.empty()) throw ValidationError("empty decimal");
  bool negative = false;
  size_t i = 0;
  if (text[0] == '+' || text[0] == '-') {
    negative = text[0] == '-';
    i = 1;
  }
  std::int64_t num = 0;
  std::int64_t den = 1;
  bool seen_digit = false, seen_dot = false;
  for (; i < text.size(); ++i) {
    const char ch = text[i];
    if (ch == '.') {
      if (seen_dot) throw ValidationError("bad decimal: " + std::string(text));
      seen_dot = true;
    } else if (ch >= '0' && ch <= '9') {
      num = checked_add(checked_mul(num, 10), ch - '0');
      if (seen_dot) den = checked_mul(den, 10);
      seen_digit = true;
    } else {
      throw ValidationError("bad decimal: " + std::string(text));
    }
  }
  if (!seen_digit) throw ValidationError("bad decimal: " + std::string(text));
  return Rational(negative ? -num : num, den);
}

Rational Rational::from_double(double x) {
  if (!std::isfinite(x)) throw ValidationError("non-finite value");
  constexpr std::int64_t kMaxDen = 1'000'000'000;
  const bool negative = x < 0;
  double v = std::abs(x);
  // Continued-fraction convergents.
  std::int64_t p0 = 0, q0 = 1, p1 = 1, q1 = 0;
  double frac = v;
  for (int it = 0; it < 64; ++it) {
    const double fl = std::floor(frac);
    if (fl > 1e17) break;
    const auto a = static_cast<std::int64_t>(fl);
    const std::int64_t p2 = checked_add(checked_mul(a, p1), p0);
    const std::int64_t q2 = checked_add(checked_mul(a, q1), q0);
    if (q2 > kMaxDen) break;
    p0 = p1;
    q0 = q1;
    p1 = p2;
    q1 = q2;
    const double rem = frac - fl;
    if (rem < 1e-15) break;
    frac = 1.0 / rem;
  }
  if (q1 == 0) throw ValidationError("cannot approximate value as rational");
  return Rational(negative ? -p1 : p1, q1);
}

std::string Rational::str() const {
  if (den_ == 1) return std::to_string(num_);
  return std::to_string(num_) + "/" + std::to_string(den_);
}

Rational Rational::operator+(const Rational& o) const {
  return Rational(checked_add(checked_mul(num_, o.den_),
                              checked_mul(o.num_, den_)),
                  checked_mul(den_, o.den_));
}

Rational Rational::operator-(const Rational& o) const {
  return *this + Rational(-o.num_, o.den_);
}

Rational Rational::operator*(const Rational& o) const {
  return Rational(checked_mul(num_, o.num_), checked_mul(den_, o.den_));
}

Rational Rational::operator/(const Rational& o) const {
  if (o.num_ == 0) throw ValidationError("rational division by zero");
  return Rational(checked_mul(num_, o.den_), checked_mul(den_, o.num_));
}

std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
  const auto lhs = static_cast<__int128>(a.num_) * b.den_;
  const auto rhs = static_cast<__int128>(b.num_) * a.den_;
  if (lhs < rhs) return std::strong_ordering::less;
  if (lhs > rhs) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

}  // namespace alift
