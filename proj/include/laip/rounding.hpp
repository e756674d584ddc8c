#pragma once

// Rounding of fractional LP solutions to Boolean assignments.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "laip/poly.hpp"

namespace laip {

enum class RoundingStrategy { greedy, randomized };

inline const char* to_string(RoundingStrategy s) {
  return s == RoundingStrategy::greedy ? "greedy" : "randomized";
}

struct RoundingOutcome {
  Assignment z;
  Rational value;  // p(z), exact
  RoundingStrategy strategy = RoundingStrategy::greedy;
  std::optional<std::uint64_t> seed;
};

/// SplitMix64 finalizer; used as a counter-based generator keyed by (seed, i).
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t mix64(std::uint64_t a, std::uint64_t b) { return mix64(a ^ mix64(b)); }

/// Uniform double in [0, 1) determined only by (seed, index).
inline double uniform_at(std::uint64_t seed, std::uint64_t index) {
  return static_cast<double>(mix64(seed, index) >> 11) * 0x1.0p-53;
}

/// z_i = 1 with probability y_i, one draw per coordinate indexed by (seed, i).
inline Assignment randomized_round(std::span<const double> y, std::uint64_t seed) {
  Assignment z(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (!(y[i] >= 0.0 && y[i] <= 1.0)) {
      throw std::out_of_range("randomized_round: component outside [0, 1]");
    }
    z[i] = uniform_at(seed, i) < y[i] ? 1 : 0;
  }
  return z;
}

inline std::vector<Rational> to_rationals(std::span<const double> y) {
  std::vector<Rational> out;
  out.reserve(y.size());
  for (double v : y) out.emplace_back(v);
  return out;
}

/// Greedy deterministic rounding of a multilinear polynomial. Coordinates are
/// fixed in ascending order; each is set to the endpoint maximizing p with
/// earlier coordinates already integral and later ones still fractional. Ties
/// go to the endpoint nearest y_i, then to 0. Since p is affine in each
/// coordinate, p never decreases, so p(z) >= p(y).
///
/// When `step_values` is given it receives p after each coordinate is fixed.
inline Assignment greedy_round(const Polynomial& p, std::span<const Rational> y,
                               std::vector<Rational>* step_values = nullptr) {
  if (!p.is_multilinear()) {
    throw std::invalid_argument("greedy_round: polynomial must be multilinear");
  }
  const std::size_t n = p.num_vars();
  check_dimension(n, y.size());
  for (const Rational& v : y) {
    if (sgn(v) < 0 || v > 1) throw std::out_of_range("greedy_round: component outside [0, 1]");
  }

  using Term = Polynomial::TermMap::value_type;
  std::vector<std::vector<const Term*>> touching(n);
  for (const Term& term : p.terms()) {
    for (VarIndex v : term.first) touching[v].push_back(&term);
  }

  std::vector<Rational> w(y.begin(), y.end());
  Rational current;
  if (step_values) {
    step_values->clear();
    current = p.evaluate(std::span<const Rational>(w));
  }
  const Rational half(1, 2);
  Assignment z(n);
  Rational slope, prod;
  for (std::size_t i = 0; i < n; ++i) {
    // g_i(1) - g_i(0) = sum over terms containing x_i of coeff * prod_{j != i} w_j
    slope = 0;
    for (const Term* term : touching[i]) {
      prod = term->second;
      for (VarIndex v : term->first) {
        if (v == i) continue;
        prod *= w[v];
        if (sgn(prod) == 0) break;
      }
      slope += prod;
    }
    std::uint8_t t;
    if (sgn(slope) > 0) {
      t = 1;
    } else if (sgn(slope) < 0) {
      t = 0;
    } else {
      t = y[i] > half ? 1 : 0;
    }
    if (step_values) {
      // p moves by slope * (t - w_i)
      current += slope * (Rational(t) - w[i]);
      step_values->push_back(current);
    }
    z[i] = t;
    w[i] = t;
  }
  return z;
}

inline Assignment greedy_round(const Polynomial& p, std::span<const double> y) {
  const std::vector<Rational> exact = to_rationals(y);
  return greedy_round(p, std::span<const Rational>(exact));
}

namespace detail {

// sqrt((k + 1) / 2) * sqrt(n ln n), rounded upwards.
inline Rational rounding_radius_factor(std::size_t n, const Rational& k) {
  const Rational nn(static_cast<unsigned long>(n));
  return sqrt_upper((k + 1) / 2) * sqrt_upper(nn * ln_upper(nn));
}

inline void check_rounding_args(std::size_t n, std::size_t d, const Rational& k) {
  if (n < 2) throw std::invalid_argument("rounding bound requires n >= 2");
  if (d < 2) throw std::invalid_argument("rounding bound requires d >= 2");
  if (sgn(k) <= 0) throw std::invalid_argument("rounding bound requires k > 0");
}

}  // namespace detail

/// General-degree radius (1 + 2e(d - 2)) * beta * n^(d-1) * sqrt((k+1)/2) * sqrt(n ln n).
inline Rational mcdiarmid_rounding_bound(const Rational& beta, std::size_t n, std::size_t d,
                                         const Rational& k) {
  detail::check_rounding_args(n, d, k);
  const Rational eta = 2 * e_upper() * Rational(static_cast<unsigned long>(d - 2)) + 1;
  return eta * beta * pow_int(Rational(static_cast<unsigned long>(n)), d - 1) *
         detail::rounding_radius_factor(n, k);
}

/// High-probability radius of |p(z) - p(y)| under independent rounding. For
/// d = 2 this is the quadratic-specific 3 * beta * n * sqrt((k+1)/2) * sqrt(n ln n);
/// otherwise the general-degree form.
inline Rational rounding_error_bound(const Rational& beta, std::size_t n, std::size_t d,
                                     const Rational& k) {
  detail::check_rounding_args(n, d, k);
  if (d == 2) {
    return 3 * beta * Rational(static_cast<unsigned long>(n)) *
           detail::rounding_radius_factor(n, k);
  }
  return mcdiarmid_rounding_bound(beta, n, d, k);
}

/// Failure probability 2d / n^(k + 1 - (d - 1)) attached to the radius.
inline double rounding_failure_probability(std::size_t n, std::size_t d, double k) {
  return 2.0 * static_cast<double>(d) /
         std::pow(static_cast<double>(n), k + 1.0 - static_cast<double>(d - 1));
}

}  // namespace laip
