#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

namespace uniprice {

/// Exact arbitrary-precision rational number. Always stored in lowest terms
/// with a positive denominator, so equal values have equal representations.
class Rational {
 public:
  using Integer = boost::multiprecision::cpp_int;

  Rational() = default;
  Rational(std::int64_t value) : value_(value) {}  // NOLINT: implicit by design of the arithmetic API
  Rational(Integer numerator, Integer denominator);

  /// Accepts "7", "-3", "0.75", ".5", "3/4", "-10/4". No exponents, no
  /// whitespace. Throws Error(kParse) on anything else.
  static Rational parse(std::string_view text);

  Integer numerator() const;
  Integer denominator() const;

  bool is_integer() const { return denominator() == 1; }
  int sign() const { return value_.sign(); }

  /// "p/q", or "p" when the denominator is 1.
  std::string str() const;

  /// Lossy; for display and benchmarks only.
  double to_double() const { return value_.convert_to<double>(); }

  Rational& operator+=(const Rational& rhs) { value_ += rhs.value_; return *this; }
  Rational& operator-=(const Rational& rhs) { value_ -= rhs.value_; return *this; }
  Rational& operator*=(const Rational& rhs) { value_ *= rhs.value_; return *this; }
  Rational& operator/=(const Rational& rhs);

  friend Rational operator+(Rational lhs, const Rational& rhs) { return lhs += rhs; }
  friend Rational operator-(Rational lhs, const Rational& rhs) { return lhs -= rhs; }
  friend Rational operator*(Rational lhs, const Rational& rhs) { return lhs *= rhs; }
  friend Rational operator/(Rational lhs, const Rational& rhs) { return lhs /= rhs; }
  friend Rational operator-(const Rational& x) { Rational r; r.value_ = -x.value_; return r; }

  friend bool operator==(const Rational& a, const Rational& b) { return a.value_ == b.value_; }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    const int c = a.value_.compare(b.value_);
    if (c < 0) return std::strong_ordering::less;
    if (c > 0) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

  std::size_t hash() const;

 private:
  boost::multiprecision::cpp_rational value_;
};

std::ostream& operator<<(std::ostream& os, const Rational& x);

inline const Rational& min(const Rational& a, const Rational& b) { return b < a ? b : a; }
inline const Rational& max(const Rational& a, const Rational& b) { return a < b ? b : a; }

/// Largest integer k with k <= x.
Rational::Integer floor_integer(const Rational& x);
/// Smallest integer k with k >= x.
Rational::Integer ceil_integer(const Rational& x);

}  // namespace uniprice

template <>
struct std::hash<uniprice::Rational> {
  std::size_t operator()(const uniprice::Rational& x) const noexcept { return x.hash(); }
};
