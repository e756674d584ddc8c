#pragma once

// Bounded-variable revised primal simplex.
//
// Each row i becomes a slack s_i = a_i . x with bounds [lower_i, upper_i], so
// the system is [A | -I] (x, s) = 0 with every column boxed. Phase 1 minimizes
// the sum of bound violations of the basic variables; phase 2 maximizes the
// objective from the feasible basis. Pricing is Dantzig's rule, switching to
// Bland's rule for good once 1000 degenerate pivots have been taken.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include "laip/lp.hpp"

namespace laip {

struct SimplexOptions {
  double feasibility_tol = 1e-9;
  double optimality_tol = 1e-9;
  double pivot_tol = 1e-9;
  double report_tol = 1e-7;  // row residual accepted in a reported optimum
  std::size_t bland_after_degenerate = 1000;
  std::size_t refactor_every = 64;
  std::size_t iteration_factor = 50;  // cap = factor * (rows + vars)
};

class BoundedSimplex {
 public:
  explicit BoundedSimplex(const LpModel& model, SimplexOptions options = {})
      : model_(model), opt_(options) {}

  LpSolution run() {
    model_.validate();
    if (!setup()) return finish(LpStatus::infeasible);

    const std::size_t cap = opt_.iteration_factor * (m_ + n_);
    while (true) {
      if (iterations_ >= cap) return finish(LpStatus::numerical_failure);
      const bool phase1 = compute_duals();
      const Entering entering = price(phase1);
      if (entering.var == kNone) {
        if (phase1) return finish(LpStatus::infeasible);
        return finish(LpStatus::optimal);
      }
      const StepResult step = pivot(entering, phase1);
      if (step == StepResult::unbounded) {
        return finish(phase1 ? LpStatus::numerical_failure : LpStatus::unbounded);
      }
      if (step == StepResult::singular) return finish(LpStatus::numerical_failure);
    }
  }

 private:
  static constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();
  static constexpr double kInf = std::numeric_limits<double>::infinity();

  enum class StepResult { ok, unbounded, singular };

  struct Entering {
    std::size_t var = kNone;
    double direction = 0.0;
  };

  struct ColumnEntry {
    std::size_t row;
    double value;
  };

  // Builds the structural columns, drops empty rows, and installs the slack
  // basis. Returns false when an empty row is infeasible.
  bool setup() {
    n_ = model_.num_vars;
    std::vector<std::vector<double>> dense_rows;
    for (const LpRow& row : model_.rows) {
      std::vector<Rational> merged(n_);
      for (const LpTerm& t : row.terms) merged[t.var] += t.coeff;
      std::vector<double> coeffs(n_, 0.0);
      bool empty = true;
      for (std::size_t j = 0; j < n_; ++j) {
        if (sgn(merged[j]) != 0) {
          coeffs[j] = merged[j].get_d();
          empty = false;
        }
      }
      if (empty) {
        if ((row.lower && sgn(*row.lower) > 0) || (row.upper && sgn(*row.upper) < 0)) return false;
        continue;
      }
      if (!row.lower && !row.upper) continue;
      dense_rows.push_back(std::move(coeffs));
      row_lower_.push_back(row.lower ? row.lower->get_d() : -kInf);
      row_upper_.push_back(row.upper ? row.upper->get_d() : kInf);
    }
    m_ = dense_rows.size();

    columns_.assign(n_, {});
    for (std::size_t i = 0; i < m_; ++i) {
      for (std::size_t j = 0; j < n_; ++j) {
        if (dense_rows[i][j] != 0.0) columns_[j].push_back({i, dense_rows[i][j]});
      }
    }

    const std::size_t total = n_ + m_;
    lo_.resize(total);
    hi_.resize(total);
    cost_.assign(total, 0.0);
    x_.assign(total, 0.0);
    at_upper_.assign(total, false);
    basis_pos_.assign(total, kNone);
    for (std::size_t j = 0; j < n_; ++j) {
      lo_[j] = model_.var_lower[j].get_d();
      hi_[j] = model_.var_upper[j].get_d();
      cost_[j] = model_.objective[j].get_d();
      bool upper = false;
      if (model_.warm_start && (*model_.warm_start)[j] == model_.var_upper[j]) upper = true;
      at_upper_[j] = upper;
      x_[j] = upper ? hi_[j] : lo_[j];
    }
    for (std::size_t i = 0; i < m_; ++i) {
      lo_[n_ + i] = row_lower_[i];
      hi_[n_ + i] = row_upper_[i];
    }
    head_.resize(m_);
    for (std::size_t i = 0; i < m_; ++i) {
      head_[i] = n_ + i;
      basis_pos_[n_ + i] = i;
    }
    return refactor();
  }

  // Rebuilds the basis inverse from head_ by Gauss-Jordan elimination with
  // partial pivoting, then recomputes the basic values from the nonbasic ones.
  bool refactor() {
    since_refactor_ = 0;
    std::vector<double> b(m_ * m_, 0.0);
    for (std::size_t k = 0; k < m_; ++k) {
      const std::size_t var = head_[k];
      if (var < n_) {
        for (const ColumnEntry& e : columns_[var]) b[e.row * m_ + k] = e.value;
      } else {
        b[(var - n_) * m_ + k] = -1.0;
      }
    }
    binv_.assign(m_ * m_, 0.0);
    for (std::size_t i = 0; i < m_; ++i) binv_[i * m_ + i] = 1.0;
    for (std::size_t col = 0; col < m_; ++col) {
      std::size_t best = col;
      for (std::size_t r = col + 1; r < m_; ++r) {
        if (std::abs(b[r * m_ + col]) > std::abs(b[best * m_ + col])) best = r;
      }
      if (std::abs(b[best * m_ + col]) < 1e-12) return false;
      if (best != col) {
        for (std::size_t c = 0; c < m_; ++c) {
          std::swap(b[best * m_ + c], b[col * m_ + c]);
          std::swap(binv_[best * m_ + c], binv_[col * m_ + c]);
        }
      }
      const double inv = 1.0 / b[col * m_ + col];
      for (std::size_t c = 0; c < m_; ++c) {
        b[col * m_ + c] *= inv;
        binv_[col * m_ + c] *= inv;
      }
      for (std::size_t r = 0; r < m_; ++r) {
        if (r == col) continue;
        const double f = b[r * m_ + col];
        if (f == 0.0) continue;
        for (std::size_t c = 0; c < m_; ++c) {
          b[r * m_ + c] -= f * b[col * m_ + c];
          binv_[r * m_ + c] -= f * binv_[col * m_ + c];
        }
      }
    }
    recompute_basic_values();
    return true;
  }

  // x_B = -B^{-1} N x_N
  void recompute_basic_values() {
    std::vector<double> rhs(m_, 0.0);
    for (std::size_t j = 0; j < n_ + m_; ++j) {
      if (basis_pos_[j] != kNone || x_[j] == 0.0) continue;
      if (j < n_) {
        for (const ColumnEntry& e : columns_[j]) rhs[e.row] -= e.value * x_[j];
      } else {
        rhs[j - n_] += x_[j];
      }
    }
    for (std::size_t i = 0; i < m_; ++i) {
      double v = 0.0;
      for (std::size_t k = 0; k < m_; ++k) v += binv_[i * m_ + k] * rhs[k];
      x_[head_[i]] = v;
    }
  }

  bool below(std::size_t var) const { return x_[var] < lo_[var] - opt_.feasibility_tol; }
  bool above(std::size_t var) const { return x_[var] > hi_[var] + opt_.feasibility_tol; }

  // Fills duals_ for the current phase; returns true while in phase 1.
  bool compute_duals() {
    phase_cost_.assign(m_, 0.0);
    bool infeasible = false;
    for (std::size_t i = 0; i < m_; ++i) {
      const std::size_t var = head_[i];
      if (below(var)) {
        phase_cost_[i] = -1.0;
        infeasible = true;
      } else if (above(var)) {
        phase_cost_[i] = 1.0;
        infeasible = true;
      }
    }
    if (!infeasible) {
      // Phase 2 minimizes -objective.
      for (std::size_t i = 0; i < m_; ++i) phase_cost_[i] = -cost_[head_[i]];
    }
    duals_.assign(m_, 0.0);
    for (std::size_t i = 0; i < m_; ++i) {
      const double c = phase_cost_[i];
      if (c == 0.0) continue;
      for (std::size_t k = 0; k < m_; ++k) duals_[k] += c * binv_[i * m_ + k];
    }
    return infeasible;
  }

  double reduced_cost(std::size_t var, bool phase1) const {
    double d = phase1 ? 0.0 : -cost_[var];
    if (var < n_) {
      for (const ColumnEntry& e : columns_[var]) d -= duals_[e.row] * e.value;
    } else {
      d += duals_[var - n_];
    }
    return d;
  }

  Entering price(bool phase1) const {
    Entering best;
    double best_score = 0.0;
    for (std::size_t j = 0; j < n_ + m_; ++j) {
      if (basis_pos_[j] != kNone || !(hi_[j] > lo_[j])) continue;
      const double d = reduced_cost(j, phase1);
      double dir = 0.0;
      if (!at_upper_[j] && d < -opt_.optimality_tol && hi_[j] > x_[j]) dir = 1.0;
      if (at_upper_[j] && d > opt_.optimality_tol && lo_[j] < x_[j]) dir = -1.0;
      if (dir == 0.0) continue;
      if (bland_) return {j, dir};
      if (std::abs(d) > best_score) {
        best_score = std::abs(d);
        best = {j, dir};
      }
    }
    return best;
  }

  StepResult pivot(const Entering& entering, bool phase1) {
    const std::size_t q = entering.var;
    const double dir = entering.direction;

    std::vector<double> alpha(m_, 0.0);
    if (q < n_) {
      for (const ColumnEntry& e : columns_[q]) {
        for (std::size_t i = 0; i < m_; ++i) alpha[i] += binv_[i * m_ + e.row] * e.value;
      }
    } else {
      for (std::size_t i = 0; i < m_; ++i) alpha[i] = -binv_[i * m_ + (q - n_)];
    }

    double theta = hi_[q] - lo_[q];
    std::size_t leave = kNone;
    bool leave_upper = false;
    const double tie = 1e-12;
    for (std::size_t i = 0; i < m_; ++i) {
      if (std::abs(alpha[i]) <= opt_.pivot_tol) continue;
      const double rate = -dir * alpha[i];
      const std::size_t b = head_[i];
      double limit;
      bool to_upper;
      if (rate < 0.0) {
        if (phase1 && above(b)) {
          limit = (x_[b] - hi_[b]) / -rate;
          to_upper = true;
        } else if (phase1 && below(b)) {
          continue;
        } else if (std::isfinite(lo_[b])) {
          limit = std::max(0.0, x_[b] - lo_[b]) / -rate;
          to_upper = false;
        } else {
          continue;
        }
      } else {
        if (phase1 && below(b)) {
          limit = (lo_[b] - x_[b]) / rate;
          to_upper = false;
        } else if (phase1 && above(b)) {
          continue;
        } else if (std::isfinite(hi_[b])) {
          limit = std::max(0.0, hi_[b] - x_[b]) / rate;
          to_upper = true;
        } else {
          continue;
        }
      }
      bool take = limit < theta - tie;
      if (!take && limit <= theta + tie) {
        if (leave == kNone) {
          take = true;
        } else if (bland_) {
          take = b < head_[leave];
        } else {
          take = std::abs(alpha[i]) > std::abs(alpha[leave]);
        }
      }
      if (take) {
        theta = limit;
        leave = i;
        leave_upper = to_upper;
      }
    }
    if (!std::isfinite(theta)) return StepResult::unbounded;

    ++iterations_;
    if (theta <= tie) {
      if (++degenerate_ >= opt_.bland_after_degenerate) bland_ = true;
    }

    x_[q] += dir * theta;
    for (std::size_t i = 0; i < m_; ++i) x_[head_[i]] -= dir * theta * alpha[i];

    if (leave == kNone) {
      at_upper_[q] = !at_upper_[q];
      x_[q] = at_upper_[q] ? hi_[q] : lo_[q];
      return StepResult::ok;
    }

    const std::size_t out = head_[leave];
    x_[out] = leave_upper ? hi_[out] : lo_[out];
    at_upper_[out] = leave_upper;
    basis_pos_[out] = kNone;
    head_[leave] = q;
    basis_pos_[q] = leave;

    const double piv = alpha[leave];
    double* prow = &binv_[leave * m_];
    for (std::size_t c = 0; c < m_; ++c) prow[c] /= piv;
    for (std::size_t i = 0; i < m_; ++i) {
      if (i == leave || alpha[i] == 0.0) continue;
      const double f = alpha[i];
      double* row = &binv_[i * m_];
      for (std::size_t c = 0; c < m_; ++c) row[c] -= f * prow[c];
    }
    if (++since_refactor_ >= opt_.refactor_every) {
      if (!refactor()) return StepResult::singular;
    }
    return StepResult::ok;
  }

  LpSolution finish(LpStatus status) {
    LpSolution sol;
    sol.status = status;
    sol.iterations = iterations_;
    if (status != LpStatus::optimal) return sol;

    auto extract = [&] {
      sol.y.assign(n_, 0.0);
      for (std::size_t j = 0; j < n_; ++j) sol.y[j] = std::clamp(x_[j], lo_[j], hi_[j]);
    };
    extract();
    if (model_.max_violation(sol.y) > opt_.report_tol) {
      if (!refactor()) {
        sol.status = LpStatus::numerical_failure;
        return sol;
      }
      extract();
      if (model_.max_violation(sol.y) > opt_.report_tol) {
        sol.status = LpStatus::numerical_failure;
        return sol;
      }
    }
    long double value = model_.objective_constant.get_d();
    for (std::size_t j = 0; j < n_; ++j) value += static_cast<long double>(cost_[j]) * sol.y[j];
    sol.objective_value = static_cast<double>(value);
    return sol;
  }

  const LpModel& model_;
  SimplexOptions opt_;
  std::size_t n_ = 0;
  std::size_t m_ = 0;
  std::vector<std::vector<ColumnEntry>> columns_;
  std::vector<double> row_lower_, row_upper_;
  std::vector<double> lo_, hi_, cost_, x_;
  std::vector<bool> at_upper_;
  std::vector<std::size_t> head_, basis_pos_;
  std::vector<double> binv_;  // row-major m x m
  std::vector<double> phase_cost_, duals_;
  std::size_t iterations_ = 0;
  std::size_t degenerate_ = 0;
  std::size_t since_refactor_ = 0;
  bool bland_ = false;
};

/// Embedded LP backend.
inline LpSolution solve_lp(const LpModel& model, const SimplexOptions& options = {}) {
  return BoundedSimplex(model, options).run();
}

}  // namespace laip
