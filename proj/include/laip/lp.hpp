#pragma once

// Linear program container shared by the relaxation builder and the solvers.

#include <algorithm>
#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "laip/errors.hpp"
#include "laip/rational.hpp"

namespace laip {

struct LpTerm {
  std::size_t var;
  Rational coeff;
};

/// lower <= sum(coeff * x[var]) <= upper; a missing side is unbounded.
struct LpRow {
  std::string name;
  std::vector<LpTerm> terms;
  std::optional<Rational> lower;
  std::optional<Rational> upper;
};

/// maximize objective_constant + objective . x  subject to rows and
/// var_lower <= x <= var_upper, with all variable bounds inside [0, 1].
struct LpModel {
  std::size_t num_vars = 0;
  std::vector<Rational> var_lower;
  std::vector<Rational> var_upper;
  std::vector<Rational> objective;
  Rational objective_constant = 0;
  std::vector<LpRow> rows;
  /// Optional vertex known to be feasible; entries must sit on a variable bound.
  std::optional<std::vector<Rational>> warm_start;

  static LpModel unit_box(std::size_t n) {
    LpModel m;
    m.num_vars = n;
    m.var_lower.assign(n, Rational(0));
    m.var_upper.assign(n, Rational(1));
    m.objective.assign(n, Rational(0));
    return m;
  }

  void validate() const {
    check_dimension(num_vars, var_lower.size());
    check_dimension(num_vars, var_upper.size());
    check_dimension(num_vars, objective.size());
    for (std::size_t j = 0; j < num_vars; ++j) {
      if (var_lower[j] > var_upper[j] || sgn(var_lower[j]) < 0 || var_upper[j] > 1) {
        throw std::invalid_argument("variable bounds must satisfy 0 <= lo <= hi <= 1");
      }
    }
    for (const LpRow& row : rows) {
      for (const LpTerm& t : row.terms) {
        if (t.var >= num_vars) throw std::out_of_range("row references unknown variable");
      }
      if (row.lower && row.upper && *row.lower > *row.upper) {
        throw std::invalid_argument("row '" + row.name + "' has lower > upper");
      }
    }
    if (warm_start) check_dimension(num_vars, warm_start->size());
  }

  Rational row_activity(const LpRow& row, std::span<const Rational> x) const {
    Rational a = 0;
    for (const LpTerm& t : row.terms) a += t.coeff * x[t.var];
    return a;
  }

  Rational objective_value(std::span<const Rational> x) const {
    check_dimension(num_vars, x.size());
    Rational v = objective_constant;
    for (std::size_t j = 0; j < num_vars; ++j) v += objective[j] * x[j];
    return v;
  }

  /// Exact feasibility check of a rational point.
  bool is_feasible(std::span<const Rational> x) const {
    check_dimension(num_vars, x.size());
    for (std::size_t j = 0; j < num_vars; ++j) {
      if (x[j] < var_lower[j] || x[j] > var_upper[j]) return false;
    }
    for (const LpRow& row : rows) {
      const Rational a = row_activity(row, x);
      if (row.lower && a < *row.lower) return false;
      if (row.upper && a > *row.upper) return false;
    }
    return true;
  }

  /// Largest row or bound violation at a floating-point point.
  double max_violation(std::span<const double> x) const {
    check_dimension(num_vars, x.size());
    double worst = 0.0;
    for (std::size_t j = 0; j < num_vars; ++j) {
      worst = std::max(worst, var_lower[j].get_d() - x[j]);
      worst = std::max(worst, x[j] - var_upper[j].get_d());
    }
    for (const LpRow& row : rows) {
      long double a = 0;
      for (const LpTerm& t : row.terms) a += static_cast<long double>(t.coeff.get_d()) * x[t.var];
      if (row.lower) worst = std::max(worst, static_cast<double>(row.lower->get_d() - a));
      if (row.upper) worst = std::max(worst, static_cast<double>(a - row.upper->get_d()));
    }
    return worst;
  }
};

enum class LpStatus { optimal, infeasible, unbounded, numerical_failure };

inline const char* to_string(LpStatus s) {
  switch (s) {
    case LpStatus::optimal: return "optimal";
    case LpStatus::infeasible: return "infeasible";
    case LpStatus::unbounded: return "unbounded";
    case LpStatus::numerical_failure: return "numerical-failure";
  }
  return "unknown";
}

struct LpSolution {
  LpStatus status = LpStatus::numerical_failure;
  std::vector<double> y;  // clamped into the variable bounds when optimal
  double objective_value = 0.0;
  std::size_t iterations = 0;
};

/// Any LpModel -> LpSolution mapping with the same status vocabulary.
using LpBackend = std::function<LpSolution(const LpModel&)>;

/// CPLEX LP text format. Ranged rows are emitted as a '>=' and a '<=' row
/// (suffixes _lo/_hi) since not every reader accepts double inequalities.
inline std::string to_lp_format(const LpModel& model) {
  auto num = [](const Rational& q) { return to_decimal(q, 15); };
  auto var = [](std::size_t j) { return "x" + std::to_string(j); };
  auto linear = [&](std::ostringstream& out, const auto& coeff_of, std::size_t count) {
    bool any = false;
    for (std::size_t k = 0; k < count; ++k) {
      const auto [j, c] = coeff_of(k);
      if (sgn(c) == 0) continue;
      out << (sgn(c) < 0 ? " - " : (any ? " + " : " ")) << num(abs(c)) << ' ' << var(j);
      any = true;
    }
    if (!any) out << " 0 " << var(0);
  };

  std::ostringstream out;
  out << "\\ objective constant: " << num(model.objective_constant) << '\n';
  out << "Maximize\n obj:";
  linear(out, [&](std::size_t k) { return std::pair<std::size_t, Rational>(k, model.objective[k]); },
         model.num_vars);
  out << "\nSubject To\n";
  for (std::size_t r = 0; r < model.rows.size(); ++r) {
    const LpRow& row = model.rows[r];
    const std::string name = row.name.empty() ? "r" + std::to_string(r) : row.name;
    auto body = [&](std::ostringstream& o) {
      linear(o, [&](std::size_t k) { return std::pair<std::size_t, Rational>(row.terms[k].var, row.terms[k].coeff); },
             row.terms.size());
    };
    if (row.lower && row.upper && *row.lower == *row.upper) {
      out << ' ' << name << ':';
      body(out);
      out << " = " << num(*row.lower) << '\n';
      continue;
    }
    if (row.lower) {
      out << ' ' << name << (row.upper ? "_lo" : "") << ':';
      body(out);
      out << " >= " << num(*row.lower) << '\n';
    }
    if (row.upper) {
      out << ' ' << name << (row.lower ? "_hi" : "") << ':';
      body(out);
      out << " <= " << num(*row.upper) << '\n';
    }
  }
  out << "Bounds\n";
  for (std::size_t j = 0; j < model.num_vars; ++j) {
    out << ' ' << num(model.var_lower[j]) << " <= " << var(j) << " <= " << num(model.var_upper[j])
        << '\n';
  }
  out << "End\n";
  return out.str();
}

}  // namespace laip
