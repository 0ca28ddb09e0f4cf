#pragma once

#include <compare>
#include <cstdint>
#include <numeric>
#include <string>
#include <string_view>

#include "rootops/errors.hpp"

namespace rootops {

// Exact arithmetic for roots, multiplicities and coupling constants.
// Values stay tiny (table entries, half-integer exponents), so 64-bit
// numerator/denominator with eager gcd reduction is ample.
class Rational {
 public:
  Rational() = default;
  Rational(long long value) : num_(value) {}  // NOLINT: implicit by design
  Rational(long long num, long long den) : num_(num), den_(den) { reduce(); }

  long long numerator() const { return num_; }
  long long denominator() const { return den_; }

  Rational operator-() const {
    Rational r;
    r.num_ = -num_;
    r.den_ = den_;
    return r;
  }

  Rational& operator+=(const Rational& o) {
    num_ = num_ * o.den_ + o.num_ * den_;
    den_ *= o.den_;
    reduce();
    return *this;
  }
  Rational& operator-=(const Rational& o) { return *this += -o; }
  Rational& operator*=(const Rational& o) {
    num_ *= o.num_;
    den_ *= o.den_;
    reduce();
    return *this;
  }
  Rational& operator/=(const Rational& o) {
    if (o.num_ == 0) throw InvalidArgument("rational division by zero");
    num_ *= o.den_;
    den_ *= o.num_;
    reduce();
    return *this;
  }

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    // denominators are positive after reduction
    return a.num_ * b.den_ <=> b.num_ * a.den_;
  }

 private:
  void reduce() {
    if (den_ == 0) throw InvalidArgument("zero denominator");
    if (num_ == 0) {
      den_ = 1;
      return;
    }
    if (den_ < 0) {
      num_ = -num_;
      den_ = -den_;
    }
    long long g = std::gcd(num_ < 0 ? -num_ : num_, den_);
    num_ /= g;
    den_ /= g;
  }

  long long num_ = 0;
  long long den_ = 1;
};

inline double to_double(const Rational& r) {
  return static_cast<double>(r.numerator()) / static_cast<double>(r.denominator());
}

inline bool is_integer(const Rational& r) { return r.denominator() == 1; }

inline Rational rational_pow(Rational base, long long e) {
  if (e < 0) {
    if (base.numerator() == 0)
      throw InvalidArgument("rational_pow: zero base, negative exponent");
    base = Rational(base.denominator(), base.numerator());
    e = -e;
  }
  Rational acc(1);
  while (e > 0) {
    if (e & 1) acc *= base;
    e >>= 1;
    if (e) base *= base;
  }
  return acc;
}

inline std::string to_string(const Rational& r) {
  std::string s = std::to_string(r.numerator());
  if (r.denominator() != 1) s += "/" + std::to_string(r.denominator());
  return s;
}

/// Parses "p", "p/q" or a plain decimal like "0.5" into an exact rational.
inline Rational parse_rational(std::string_view text) {
  std::string s(text);
  if (s.empty()) throw FormatError("empty rational literal");
  auto slash = s.find('/');
  try {
    if (slash != std::string::npos) {
      long long num = std::stoll(s.substr(0, slash));
      long long den = std::stoll(s.substr(slash + 1));
      if (den == 0) throw FormatError("zero denominator in '" + s + "'");
      return Rational(num, den);
    }
    auto dot = s.find('.');
    if (dot == std::string::npos) return Rational(std::stoll(s));
    std::string digits = s.substr(0, dot) + s.substr(dot + 1);
    long long den = 1;
    for (std::size_t i = dot + 1; i < s.size(); ++i) den *= 10;
    return Rational(std::stoll(digits), den);
  } catch (const std::invalid_argument&) {
    throw FormatError("bad rational literal '" + s + "'");
  } catch (const std::out_of_range&) {
    throw FormatError("rational literal out of range '" + s + "'");
  }
}

}  // namespace rootops
