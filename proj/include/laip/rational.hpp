#pragma once

// Exact rational arithmetic and directed (upward) rational approximations of
// irrational constants. Every bound in the library is carried as a rational
// that is guaranteed to be >= the real value it stands for.

#include <gmpxx.h>

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <stdexcept>
#include <string>

namespace laip {

using Rational = mpq_class;
using Integer = mpz_class;

/// num/den in lowest terms. GMP's two-argument constructor leaves the
/// fraction as given, and its arithmetic assumes canonical operands.
inline Rational make_rational(long num, long den) {
  if (den == 0) throw std::invalid_argument("zero denominator");
  Rational q(num, den);
  q.canonicalize();
  return q;
}

/// Upper rational approximation of Euler's number.
inline const Rational& e_upper() {
  static const Rational value = [] {
    Rational q("27182818285/10000000000");
    q.canonicalize();
    return q;
  }();
  return value;
}

inline Rational pow_int(const Rational& base, std::size_t exponent) {
  Rational result = 1;
  for (std::size_t i = 0; i < exponent; ++i) result *= base;
  return result;
}

inline Integer pow10(long exponent) {
  Integer p;
  mpz_ui_pow_ui(p.get_mpz_t(), 10, static_cast<unsigned long>(exponent));
  return p;
}

namespace detail {

// Smallest value of the form m * 10^(exp10 - digits + 1) with m an integer that
// is >= v (v > 0, finite), i.e. v rounded up to `digits` significant digits.
inline Rational round_up_significant(double v, int digits) {
  const long exp10 = static_cast<long>(std::floor(std::log10(v)));
  const long shift = digits - 1 - exp10;
  Rational scaled = Rational(v);
  if (shift >= 0) {
    scaled *= Rational(pow10(shift));
  } else {
    scaled /= Rational(pow10(-shift));
  }
  Integer m;
  mpz_cdiv_q(m.get_mpz_t(), scaled.get_num_mpz_t(), scaled.get_den_mpz_t());
  Rational r(m);
  if (shift >= 0) {
    r /= Rational(pow10(shift));
  } else {
    r *= Rational(pow10(-shift));
  }
  r.canonicalize();
  return r;
}

inline Rational ulp_at_significant(const Rational& r, int digits) {
  const long exp10 = static_cast<long>(std::floor(std::log10(r.get_d())));
  const long shift = digits - 1 - exp10;
  if (shift >= 0) return Rational(1) / Rational(pow10(shift));
  return Rational(pow10(-shift));
}

}  // namespace detail

/// Number of significant decimal digits kept by the directed approximations.
inline constexpr int kSignificantDigits = 12;

/// Smallest 12-significant-digit decimal r with r*r >= q (exact when q is a
/// perfect square of such a decimal).
inline Rational sqrt_upper(const Rational& q) {
  if (sgn(q) < 0) throw std::invalid_argument("sqrt_upper: negative argument");
  if (sgn(q) == 0) return Rational(0);
  const double s = std::sqrt(q.get_d());
  Rational r = detail::round_up_significant(s, kSignificantDigits);
  const Rational step = detail::ulp_at_significant(r, kSignificantDigits);
  while (r * r < q) r += step;
  // Tighten downwards while still a valid upper bound (double sqrt may be high).
  while (sgn(r - step) > 0 && (r - step) * (r - step) >= q) r -= step;
  return r;
}

/// Upper rational approximation of ln(x) for x >= 1.
inline Rational ln_upper(const Rational& x) {
  if (x < 1) throw std::invalid_argument("ln_upper: argument below 1");
  if (x == 1) return Rational(0);
  const double v = std::log(x.get_d());
  // Inflate by a few ulps of relative error before rounding so the result
  // stays above the true logarithm despite libm rounding.
  return detail::round_up_significant(v * (1.0 + 1e-14), kSignificantDigits);
}

inline double to_double(const Rational& q) { return q.get_d(); }

/// Exact text form "num/den" (den omitted when 1).
inline std::string to_string(const Rational& q) { return q.get_str(); }

/// Decimal rendering with `digits` significant digits.
inline std::string to_decimal(const Rational& q, int digits = 15) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, q.get_d());
  return buf;
}

inline std::string to_decimal(double v, int digits = 15) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

/// Parses "num", "num/den", or a plain decimal like "-2.5".
inline Rational parse_rational(const std::string& text) {
  if (text.empty()) throw std::invalid_argument("empty rational literal");
  const auto dot = text.find('.');
  if (dot == std::string::npos) {
    Rational q;
    if (q.set_str(text, 10) != 0 || q.get_den() == 0) {
      throw std::invalid_argument("malformed rational literal: " + text);
    }
    q.canonicalize();
    return q;
  }
  std::string digits = text.substr(0, dot) + text.substr(dot + 1);
  if (digits.empty() || digits == "-" || digits == "+") {
    throw std::invalid_argument("malformed decimal literal: " + text);
  }
  if (digits[0] == '+') digits.erase(0, 1);
  Integer num;
  if (num.set_str(digits, 10) != 0) {
    throw std::invalid_argument("malformed decimal literal: " + text);
  }
  Rational q(num, pow10(static_cast<long>(text.size() - dot - 1)));
  q.canonicalize();
  return q;
}

}  // namespace laip
