#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "laip/relax.hpp"

namespace laip {

enum class ProblemKind { generic, maxcut, maxksat, maxkcsp };

inline const char* to_string(ProblemKind k) {
  switch (k) {
    case ProblemKind::generic: return "generic";
    case ProblemKind::maxcut: return "maxcut";
    case ProblemKind::maxksat: return "maxksat";
    case ProblemKind::maxkcsp: return "maxkcsp";
  }
  return "unknown";
}

/// Distance from v to the interval [lo, hi].
inline Rational interval_distance(const Rational& v, const Rational& lo, const Rational& hi) {
  if (v < lo) return lo - v;
  if (v > hi) return v - hi;
  return Rational(0);
}

/// A polynomial program together with the metadata the oracle layer needs.
struct Instance {
  std::string name;
  ProblemKind kind = ProblemKind::generic;
  Polynomial objective;
  std::vector<PolyConstraint> constraints;
  /// Cost ceiling H: an upper bound on the objective over {0,1}^n.
  Rational ceiling;

  std::size_t num_vars() const { return objective.num_vars(); }

  ConstrainedProgram program() const { return ConstrainedProgram{objective, constraints}; }

  /// max over constraints of dist(p_c(z), [L_c, U_c]); zero when unconstrained.
  Rational max_violation(std::span<const std::uint8_t> z) const {
    Rational worst = 0;
    for (const PolyConstraint& c : constraints) {
      const Rational d = interval_distance(c.poly.evaluate(z), c.lower, c.upper);
      if (d > worst) worst = d;
    }
    return worst;
  }

  bool is_feasible(std::span<const std::uint8_t> z) const { return sgn(max_violation(z)) == 0; }
};

/// Sum of positive coefficients; bounds a polynomial from above on {0,1}^n.
inline Rational positive_mass(const Polynomial& p) {
  Rational s = 0;
  for (const auto& [vars, c] : p.terms()) {
    if (sgn(c) > 0) s += c;
  }
  return s;
}

/// Generic instance; the objective is multilinearized with its declared degree kept.
inline Instance make_instance(const Polynomial& objective, std::string name = {}) {
  Instance inst;
  inst.name = std::move(name);
  inst.objective = multilinearize(objective).with_degree(objective.degree());
  inst.ceiling = positive_mass(inst.objective);
  return inst;
}

struct Prediction {
  Assignment x_hat;
  std::string provenance = "file";
};

inline std::size_t hamming_distance(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b) {
  check_dimension(a.size(), b.size());
  std::size_t d = 0;
  for (std::size_t i = 0; i < a.size(); ++i) d += (a[i] != 0) != (b[i] != 0);
  return d;
}

}  // namespace laip
