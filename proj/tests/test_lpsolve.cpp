#include <gtest/gtest.h>

#include <random>

#include "laip/problems.hpp"
#include "laip/relax.hpp"
#include "laip/simplex.hpp"
#include "support/oracles.hpp"
#include "support/random_lp.hpp"
#include "support/reference_lp.hpp"

using namespace laip;

TEST(Simplex, SingleBindingRow) {
  LpModel m = LpModel::unit_box(2);
  m.objective = {1, 1};
  m.rows.push_back({"r", {{0, 1}, {1, 1}}, std::nullopt, Rational(1)});
  const LpSolution s = solve_lp(m);
  ASSERT_EQ(s.status, LpStatus::optimal);
  EXPECT_NEAR(s.objective_value, 1.0, 1e-12);
}

TEST(Simplex, NullObjectiveReturnsConstant) {
  LpModel m = LpModel::unit_box(3);
  m.objective_constant = Rational(7, 2);
  m.rows.push_back({"r", {{0, 1}, {2, -1}}, Rational(0), Rational(1, 2)});
  const LpSolution s = solve_lp(m);
  ASSERT_EQ(s.status, LpStatus::optimal);
  EXPECT_DOUBLE_EQ(s.objective_value, 3.5);
}

TEST(Simplex, Infeasible) {
  LpModel m = LpModel::unit_box(2);
  m.rows.push_back({"r", {{0, 1}, {1, 1}}, Rational(3), std::nullopt});
  EXPECT_EQ(solve_lp(m).status, LpStatus::infeasible);
}

TEST(Simplex, EmptyRowRemoval) {
  LpModel m = LpModel::unit_box(1);
  m.objective = {1};
  m.rows.push_back({"empty", {}, Rational(-1), Rational(1)});
  EXPECT_EQ(solve_lp(m).status, LpStatus::optimal);
  m.rows.push_back({"bad", {}, Rational(1), Rational(2)});
  EXPECT_EQ(solve_lp(m).status, LpStatus::infeasible);
}

TEST(Simplex, EqualityRowsAndFixedVariables) {
  LpModel m = LpModel::unit_box(3);
  m.objective = {1, 2, 3};
  m.var_lower[2] = m.var_upper[2] = Rational(1, 4);
  m.rows.push_back({"eq", {{0, 1}, {1, 1}}, Rational(1), Rational(1)});
  const LpSolution s = solve_lp(m);
  ASSERT_EQ(s.status, LpStatus::optimal);
  EXPECT_NEAR(s.objective_value, 2.75, 1e-12);
  EXPECT_NEAR(s.y[1], 1.0, 1e-12);
}

TEST(Simplex, TriangleAtFullBudget) {
  Graph g;
  g.n = 3;
  g.add_edge(0, 1);
  g.add_edge(1, 2);
  g.add_edge(0, 2);
  const Polynomial p = maxcut_objective(g);
  const LpSolution s = solve_lp(build_relaxation(decompose(p), Assignment{1, 0, 0}, 3, min_smoothness(p)));
  ASSERT_EQ(s.status, LpStatus::optimal);
  EXPECT_GE(s.objective_value, 2.0 - 1e-9);
}

TEST(Simplex, SolutionWithinBoundsAndRows) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    const LpModel m = support::random_lp(rng, 1 + rng() % 30, rng() % 61);
    const LpSolution s = solve_lp(m);
    if (s.status != LpStatus::optimal) continue;
    for (std::size_t j = 0; j < m.num_vars; ++j) {
      ASSERT_GE(s.y[j], m.var_lower[j].get_d());
      ASSERT_LE(s.y[j], m.var_upper[j].get_d());
    }
    ASSERT_LE(m.max_violation(s.y), 1e-7);
  }
}

TEST(Simplex, AgreesWithReferenceTableau) {
  std::mt19937_64 rng(2718);
  int optimal = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const LpModel m = support::random_lp(rng, 1 + rng() % 30, rng() % 61);
    const LpSolution s = solve_lp(m);
    const support::ReferenceResult ref = support::reference_solve(m);
    ASSERT_EQ(s.status, ref.status) << "trial " << trial;
    if (s.status != LpStatus::optimal) continue;
    ++optimal;
    const double r = static_cast<double>(ref.value);
    EXPECT_LE(std::abs(s.objective_value - r), 1e-6 * std::max(1.0, std::abs(r))) << "trial " << trial;
  }
  EXPECT_GT(optimal, 150);
}

TEST(Simplex, AgreesWithReferenceOnRelaxations) {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 5 + rng() % 8;
    const Polynomial p = support::random_poly(rng, n, 2 + rng() % 2, 15);
    const LpModel m = build_relaxation(decompose(p), support::random_bits(rng, n), rng() % (n + 1), min_smoothness(p));
    const LpSolution s = solve_lp(m);
    const support::ReferenceResult ref = support::reference_solve(m);
    ASSERT_EQ(s.status, LpStatus::optimal);
    ASSERT_EQ(ref.status, LpStatus::optimal);
    const double r = static_cast<double>(ref.value);
    EXPECT_LE(std::abs(s.objective_value - r), 1e-6 * std::max(1.0, std::abs(r)));
  }
}

TEST(Simplex, Deterministic) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    const LpModel m = support::random_lp(rng, 20, 40);
    const LpSolution a = solve_lp(m), b = solve_lp(m);
    EXPECT_EQ(a.status, b.status);
    EXPECT_EQ(a.y, b.y);
    EXPECT_EQ(a.iterations, b.iterations);
  }
}

TEST(Simplex, DegenerateCyclingCandidate) {
  // Beale's classic cycling example, shifted into the unit box.
  LpModel m = LpModel::unit_box(4);
  m.objective = {Rational(3, 4), Rational(-150), Rational(1, 50), Rational(-6)};
  m.rows.push_back({"a", {{0, Rational(1, 4)}, {1, -60}, {2, Rational(-1, 25)}, {3, 9}}, std::nullopt, Rational(0)});
  m.rows.push_back({"b", {{0, Rational(1, 2)}, {1, -90}, {2, Rational(-1, 50)}, {3, 3}}, std::nullopt, Rational(0)});
  const LpSolution s = solve_lp(m);
  const support::ReferenceResult ref = support::reference_solve(m);
  ASSERT_EQ(s.status, LpStatus::optimal);
  EXPECT_NEAR(s.objective_value, static_cast<double>(ref.value), 1e-9);
}

TEST(Simplex, WarmStartGivesSameOptimum) {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 8;
    const Polynomial p = support::random_poly(rng, n, 2, 16);
    LpModel m = build_relaxation(decompose(p), support::random_bits(rng, n), 3, min_smoothness(p));
    const LpSolution warm = solve_lp(m);
    m.warm_start.reset();
    const LpSolution cold = solve_lp(m);
    ASSERT_EQ(warm.status, LpStatus::optimal);
    ASSERT_EQ(cold.status, LpStatus::optimal);
    EXPECT_NEAR(warm.objective_value, cold.objective_value, 1e-7 * std::max(1.0, std::abs(cold.objective_value)));
  }
}

TEST(Simplex, IterationCapReportsNumericalFailure) {
  std::mt19937_64 rng(5);
  const LpModel m = support::random_lp(rng, 30, 60);
  SimplexOptions opt;
  opt.iteration_factor = 0;
  const LpSolution s = solve_lp(m, opt);
  EXPECT_TRUE(s.status == LpStatus::numerical_failure || s.iterations == 0);
}

TEST(Backend, CustomBackendContract) {
  LpBackend backend = [](const LpModel& m) {
    const support::ReferenceResult r = support::reference_solve(m);
    LpSolution s;
    s.status = r.status;
    s.objective_value = static_cast<double>(r.value);
    s.y.assign(r.x.begin(), r.x.end());
    return s;
  };
  LpModel m = LpModel::unit_box(2);
  m.objective = {1, 1};
  m.rows.push_back({"r", {{0, 1}, {1, 1}}, std::nullopt, Rational(1)});
  EXPECT_NEAR(backend(m).objective_value, 1.0, 1e-12);
}
