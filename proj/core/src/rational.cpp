#include "uniprice/rational.hpp"

#include <cctype>
#include <ostream>

#include <boost/functional/hash.hpp>

#include "uniprice/error.hpp"

namespace uniprice {

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

// cpp_int reads a leading zero as an octal prefix.
Rational::Integer decimal_integer(std::string_view digits) {
  const auto first = digits.find_first_not_of('0');
  if (first == std::string_view::npos) return 0;
  return Rational::Integer(std::string(digits.substr(first)));
}

[[noreturn]] void bad_number(std::string_view text) {
  throw Error(ErrorCode::kParse, "not an exact number: '" + std::string(text) + "'");
}

}  // namespace

Rational::Rational(Integer numerator, Integer denominator) {
  if (denominator == 0) throw Error(ErrorCode::kParse, "zero denominator");
  if (denominator < 0) {
    numerator = -numerator;
    denominator = -denominator;
  }
  value_ = boost::multiprecision::cpp_rational(std::move(numerator), std::move(denominator));
}

Rational Rational::parse(std::string_view text) {
  std::string_view body = text;
  bool negative = false;
  if (!body.empty() && (body.front() == '-' || body.front() == '+')) {
    negative = body.front() == '-';
    body.remove_prefix(1);
  }
  if (body.empty()) bad_number(text);

  Integer num;
  Integer den = 1;
  if (const auto slash = body.find('/'); slash != std::string_view::npos) {
    const auto n = body.substr(0, slash);
    const auto d = body.substr(slash + 1);
    if (!all_digits(n) || !all_digits(d)) bad_number(text);
    num = decimal_integer(n);
    den = decimal_integer(d);
    if (den == 0) bad_number(text);
  } else if (const auto dot = body.find('.'); dot != std::string_view::npos) {
    const auto whole = body.substr(0, dot);
    const auto frac = body.substr(dot + 1);
    if (whole.empty() && frac.empty()) bad_number(text);
    if ((!whole.empty() && !all_digits(whole)) || (!frac.empty() && !all_digits(frac))) {
      bad_number(text);
    }
    num = decimal_integer(std::string(whole) + std::string(frac));
    den = boost::multiprecision::pow(Integer(10), static_cast<unsigned>(frac.size()));
  } else {
    if (!all_digits(body)) bad_number(text);
    num = decimal_integer(body);
  }
  if (negative) num = -num;
  return Rational(std::move(num), std::move(den));
}

Rational::Integer Rational::numerator() const { return boost::multiprecision::numerator(value_); }
Rational::Integer Rational::denominator() const { return boost::multiprecision::denominator(value_); }

Rational& Rational::operator/=(const Rational& rhs) {
  if (rhs.sign() == 0) throw std::domain_error("Rational division by zero");
  value_ /= rhs.value_;
  return *this;
}

std::string Rational::str() const {
  const Integer den = denominator();
  if (den == 1) return numerator().str();
  return numerator().str() + "/" + den.str();
}

std::size_t Rational::hash() const {
  std::size_t seed = 0;
  boost::hash_combine(seed, boost::multiprecision::hash_value(numerator()));
  boost::hash_combine(seed, boost::multiprecision::hash_value(denominator()));
  return seed;
}

std::ostream& operator<<(std::ostream& os, const Rational& x) { return os << x.str(); }

Rational::Integer floor_integer(const Rational& x) {
  const Rational::Integer num = x.numerator();
  const Rational::Integer den = x.denominator();
  Rational::Integer q = num / den;  // truncates toward zero
  if (num.sign() < 0 && q * den != num) q -= 1;
  return q;
}

Rational::Integer ceil_integer(const Rational& x) {
  return -floor_integer(-x);
}

}  // namespace uniprice
