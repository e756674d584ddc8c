#pragma once

// Oracle-guided linear relaxation of a smooth polynomial program.
//
// Around a Boolean prediction xhat, every component p_I of the decomposition is
// replaced by its linearization q_I(x) = c_I + sum_j x_j * p_{I,j}(xhat), and
// the LP requires q_I(x) to stay within delta_I of p_I(xhat). The tolerances
// are chosen so that any Boolean point within Hamming distance eps of xhat
// remains feasible.

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "laip/decompose.hpp"
#include "laip/lp.hpp"
#include "laip/poly.hpp"

namespace laip {

/// delta for a tuple of length `tuple_len` (1 <= tuple_len <= d - 1):
///   beta * sqrt(n * eps)                         if tuple_len == d - 1
///   2 * beta * e * n^(d - tuple_len - 1/2) * sqrt(eps)  otherwise
/// Irrational factors are rounded upwards.
inline Rational tolerance(const Rational& beta, std::size_t n, std::size_t d, std::size_t tuple_len,
                          std::size_t eps) {
  if (tuple_len < 1 || tuple_len + 1 > d) {
    throw std::out_of_range("tolerance: tuple length must lie in [1, d - 1]");
  }
  if (eps > n) throw std::out_of_range("tolerance: eps must lie in [0, n]");
  if (eps == 0) return Rational(0);
  const Rational root = sqrt_upper(Rational(static_cast<unsigned long>(n * eps)));
  if (tuple_len + 1 == d) return beta * root;
  // n^(d - |I| - 1/2) * sqrt(eps) = n^(d - |I| - 1) * sqrt(n * eps)
  return 2 * beta * e_upper() * pow_int(Rational(n), d - tuple_len - 1) * root;
}

struct ToleranceTable {
  std::map<IndexTuple, Rational> entries;
  std::size_t eps = 0;
  Rational beta;
  std::size_t n = 0;
  std::size_t d = 0;

  /// Sum of delta_I over every tuple of the table.
  Rational total() const {
    Rational s = 0;
    for (const auto& [tuple, delta] : entries) s += delta;
    return s;
  }
};

/// Tolerances for every tuple I of the tree with 1 <= |I| <= d - 1, where d is
/// `degree` (defaults to the tree's declared degree).
inline ToleranceTable tolerance_table(const DecompositionTree& tree, const Rational& beta,
                                      std::size_t eps, std::size_t degree = 0) {
  ToleranceTable table;
  table.eps = eps;
  table.beta = beta;
  table.n = tree.num_vars();
  table.d = degree == 0 ? tree.degree() : degree;
  std::map<std::size_t, Rational> per_length;
  for (const DecompositionNode& node : tree.nodes()) {
    const std::size_t len = node.tuple.size();
    if (len < 1 || len + 1 > table.d) continue;
    auto it = per_length.find(len);
    if (it == per_length.end()) {
      it = per_length.emplace(len, tolerance(beta, table.n, table.d, len, eps)).first;
    }
    table.entries.emplace(node.tuple, it->second);
  }
  return table;
}

inline std::string tuple_name(const std::string& prefix, const IndexTuple& tuple) {
  std::string name = prefix;
  for (VarIndex v : tuple) name += "_" + std::to_string(v);
  return name;
}

namespace detail {

inline std::vector<Rational> to_rationals(std::span<const std::uint8_t> xhat) {
  std::vector<Rational> out;
  out.reserve(xhat.size());
  for (std::uint8_t b : xhat) {
    if (b > 1) throw std::invalid_argument("prediction entries must be 0 or 1");
    out.emplace_back(b);
  }
  return out;
}

// Appends the tolerance rows q_I(x) in p_I(xhat) +- delta_I for every internal
// node of `tree` that has at least one child.
inline void append_component_rows(LpModel& model, const DecompositionTree& tree,
                                  const std::vector<Rational>& values, const ToleranceTable& table,
                                  const std::string& prefix) {
  const auto& nodes = tree.nodes();
  for (std::size_t k = 1; k < nodes.size(); ++k) {
    const DecompositionNode& node = nodes[k];
    auto it = table.entries.find(node.tuple);
    if (it == table.entries.end() || node.children.empty()) continue;
    LpRow row;
    row.name = tuple_name(prefix, node.tuple);
    for (const auto& [j, child] : node.children) {
      if (sgn(values[child]) != 0) row.terms.push_back({j, values[child]});
    }
    // c_I + sum_j x_j p_{I,j}(xhat) in [p_I(xhat) - delta, p_I(xhat) + delta]
    row.lower = values[k] - node.constant - it->second;
    row.upper = values[k] - node.constant + it->second;
    model.rows.push_back(std::move(row));
  }
}

inline LpModel objective_model(const DecompositionTree& tree, const std::vector<Rational>& values,
                               const std::vector<Rational>& xhat) {
  LpModel model = LpModel::unit_box(tree.num_vars());
  model.objective_constant = tree.constant();
  for (const auto& [j, child] : tree.root().children) model.objective[j] = values[child];
  model.warm_start = xhat;
  return model;
}

}  // namespace detail

/// The d-LP around `xhat` with error budget `eps`.
inline LpModel build_relaxation(const DecompositionTree& tree, std::span<const std::uint8_t> xhat,
                                std::size_t eps, const Rational& beta) {
  check_dimension(tree.num_vars(), xhat.size());
  const std::vector<Rational> point = detail::to_rationals(xhat);
  const std::vector<Rational> values = tree.evaluate_all<Rational>(point);
  LpModel model = detail::objective_model(tree, values, point);
  const ToleranceTable table = tolerance_table(tree, beta, eps);
  detail::append_component_rows(model, tree, values, table, "t");
  return model;
}

/// A polynomial constraint lower <= p(x) <= upper.
struct PolyConstraint {
  Polynomial poly;
  Rational lower;
  Rational upper;
};

struct ConstrainedProgram {
  Polynomial objective;
  std::vector<PolyConstraint> constraints;

  /// Common degree used for every tolerance schedule: the largest declared
  /// degree among the objective and constraints.
  std::size_t degree() const {
    std::size_t d = objective.degree();
    for (const PolyConstraint& c : constraints) d = std::max(d, c.poly.degree());
    return d;
  }

  void validate() const {
    for (const PolyConstraint& c : constraints) {
      check_dimension(objective.num_vars(), c.poly.num_vars());
      if (c.lower > c.upper) throw std::invalid_argument("constraint has lower > upper");
    }
  }
};

/// Smallest beta making the objective and every constraint beta-smooth at the
/// program's common degree.
inline Rational program_smoothness(const ConstrainedProgram& prog) {
  const std::size_t d = prog.degree();
  Rational beta = min_smoothness(prog.objective.with_degree(d));
  for (const PolyConstraint& c : prog.constraints) {
    const Rational b = min_smoothness(c.poly.with_degree(d));
    if (b > beta) beta = b;
  }
  return beta;
}

/// Top-level slack delta_c for one constraint: the sum of its tuple tolerances.
inline Rational constraint_slack(const DecompositionTree& tree, const Rational& beta,
                                 std::size_t eps, std::size_t degree) {
  return tolerance_table(tree, beta, eps, degree).total();
}

/// The d-LP' around `xhat`: the objective relaxation plus, for each
/// constraint c, q_c(x) in [L_c - delta_c, U_c + delta_c] and tolerance rows
/// for its own decomposition.
inline LpModel build_constrained_relaxation(const ConstrainedProgram& prog,
                                            std::span<const std::uint8_t> xhat, std::size_t eps,
                                            const Rational& beta) {
  prog.validate();
  const std::size_t n = prog.objective.num_vars();
  check_dimension(n, xhat.size());
  const std::size_t d = prog.degree();
  const std::vector<Rational> point = detail::to_rationals(xhat);

  const DecompositionTree tree = decompose(prog.objective.with_degree(d));
  const std::vector<Rational> values = tree.evaluate_all<Rational>(point);
  LpModel model = detail::objective_model(tree, values, point);
  detail::append_component_rows(model, tree, values, tolerance_table(tree, beta, eps, d), "t");

  for (std::size_t c = 0; c < prog.constraints.size(); ++c) {
    const PolyConstraint& con = prog.constraints[c];
    const DecompositionTree ctree = decompose(con.poly.with_degree(d));
    const std::vector<Rational> cvalues = ctree.evaluate_all<Rational>(point);
    const ToleranceTable table = tolerance_table(ctree, beta, eps, d);
    const Rational slack = table.total();

    LpRow top;
    top.name = "c" + std::to_string(c);
    for (const auto& [j, child] : ctree.root().children) {
      if (sgn(cvalues[child]) != 0) top.terms.push_back({j, cvalues[child]});
    }
    top.lower = con.lower - slack - ctree.constant();
    top.upper = con.upper + slack - ctree.constant();
    model.rows.push_back(std::move(top));
    detail::append_component_rows(model, ctree, cvalues, table, "c" + std::to_string(c) + "t");
  }
  return model;
}

/// Additive relaxation gap 2 * eta * beta * n^(d - 1/2) * sqrt(eps) with
/// eta = 2e(d - 2) + 1.
inline Rational gap_bound(const Rational& beta, std::size_t n, std::size_t d, std::size_t eps) {
  if (d < 2) throw std::invalid_argument("gap_bound requires d >= 2");
  if (eps == 0) return Rational(0);
  const Rational eta = 2 * e_upper() * Rational(static_cast<unsigned long>(d - 2)) + 1;
  return 2 * eta * beta * pow_int(Rational(n), d - 1) *
         sqrt_upper(Rational(static_cast<unsigned long>(n * eps)));
}

}  // namespace laip
