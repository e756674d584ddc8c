#include <gtest/gtest.h>

#include <random>

#include "laip/problems.hpp"
#include "laip/relax.hpp"
#include "laip/rounding.hpp"
#include "laip/simplex.hpp"
#include "support/oracles.hpp"

using namespace laip;

namespace {

Polynomial triangle() {
  Graph g;
  g.n = 3;
  g.add_edge(0, 1);
  g.add_edge(1, 2);
  g.add_edge(0, 2);
  return maxcut_objective(g);
}

std::vector<Rational> as_rationals(const Assignment& x) { return {x.begin(), x.end()}; }

}  // namespace

TEST(Tolerance, TopLevelCase) {
  EXPECT_EQ(tolerance(2, 4, 2, 1, 1), 4);
  EXPECT_EQ(tolerance(1, 9, 2, 1, 4), 6);
}

TEST(Tolerance, ZeroBudget) {
  for (std::size_t len = 1; len < 4; ++len) EXPECT_EQ(tolerance(3, 10, 4, len, 0), 0);
}

TEST(Tolerance, DeeperTuples) {
  // 2e * 4^(3/2) * 2 = 32e
  EXPECT_EQ(tolerance(1, 4, 3, 1, 4), 32 * e_upper());
  // sqrt(2 * 3) is irrational: the stored value rounds upward within 1e-10 relative
  const Rational t = tolerance(1, 3, 2, 1, 2);
  EXPECT_GE(t * t, 6);
  EXPECT_LT(t.get_d() - std::sqrt(6.0), 1e-10);
}

TEST(Tolerance, RangeErrors) {
  EXPECT_THROW(tolerance(1, 4, 3, 0, 1), std::out_of_range);
  EXPECT_THROW(tolerance(1, 4, 3, 3, 1), std::out_of_range);
  EXPECT_THROW(tolerance(1, 4, 2, 1, 5), std::out_of_range);
}

TEST(Tolerance, MonotoneInEps) {
  for (std::size_t eps = 0; eps < 10; ++eps) {
    EXPECT_LE(tolerance(1, 10, 3, 1, eps), tolerance(1, 10, 3, 1, eps + 1));
    EXPECT_LE(tolerance(1, 10, 3, 2, eps), tolerance(1, 10, 3, 2, eps + 1));
  }
}

TEST(BuildRelaxation, PerfectPredictionKeepsValue) {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 30; ++trial) {
    const Polynomial p = support::random_poly(rng, 6, 2, 10);
    const Assignment x = support::random_bits(rng, 6);
    const LpModel lp = build_relaxation(decompose(p), x, 0, min_smoothness(p));
    const std::vector<Rational> q = as_rationals(x);
    EXPECT_TRUE(lp.is_feasible(q));
    EXPECT_EQ(lp.objective_value(q), p.evaluate(std::span<const std::uint8_t>(x)));
  }
}

TEST(BuildRelaxation, TriangleWithPerfectPrediction) {
  const Polynomial p = triangle();
  const Assignment xhat{1, 0, 0};
  const LpSolution s = solve_lp(build_relaxation(decompose(p), xhat, 0, min_smoothness(p)));
  ASSERT_EQ(s.status, LpStatus::optimal);
  EXPECT_NEAR(s.objective_value, 2.0, 1e-9);
}

TEST(BuildRelaxation, QuadraticRowCount) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 20; ++trial) {
    const Polynomial p = support::random_poly(rng, 7, 2, 12);
    const DecompositionTree t = decompose(p);
    std::size_t nonconstant = 0;
    for (const auto& [j, child] : t.root().children) nonconstant += !t.nodes()[child].children.empty();
    EXPECT_EQ(build_relaxation(t, support::random_bits(rng, 7), 2, min_smoothness(p)).rows.size(), nonconstant);
  }
}

TEST(BuildRelaxation, RowsCarryExactBounds) {
  const Polynomial p = triangle();
  const LpModel lp = build_relaxation(decompose(p), Assignment{1, 0, 0}, 1, 2);
  // p_0 = 2 - 2x_1 - 2x_2 -> row -2x_1 - 2x_2 in [2 - 2 - 2 sqrt(3), 2 - 2 + 2 sqrt(3)]
  ASSERT_EQ(lp.rows.size(), 2u);
  EXPECT_EQ(lp.rows[0].name, "t_0");
  EXPECT_EQ(*lp.rows[0].upper, -*lp.rows[0].lower);
  EXPECT_NEAR(lp.rows[0].upper->get_d(), 2 * std::sqrt(3.0), 1e-9);
  EXPECT_EQ(lp.objective[0], 2);
  EXPECT_EQ(lp.objective[1], 2);
  EXPECT_EQ(lp.objective[2], 2);
}

TEST(BuildRelaxation, DimensionAndValueErrors) {
  const DecompositionTree t = decompose(triangle());
  EXPECT_THROW(build_relaxation(t, Assignment{1, 0}, 0, 2), DimensionError);
  EXPECT_THROW(build_relaxation(t, Assignment{1, 0, 2}, 0, 2), std::invalid_argument);
}

TEST(BuildRelaxation, PredictionAlwaysFeasible) {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 4 + rng() % 5, d = 2 + rng() % 2;
    const Polynomial p = support::random_poly(rng, n, d, 10);
    const Assignment xhat = support::random_bits(rng, n);
    const LpModel lp = build_relaxation(decompose(p), xhat, rng() % (n + 1), min_smoothness(p));
    EXPECT_TRUE(lp.is_feasible(as_rationals(xhat)));
  }
}

TEST(BuildRelaxation, OptimumFeasibleAtTrueError) {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = 4 + rng() % 5, d = 2 + rng() % 3;
    if (d >= n) continue;
    const Polynomial p = support::random_poly(rng, n, d, 12);
    const support::BruteForce bf = support::brute_force(p);
    const DecompositionTree t = decompose(p);
    const Rational beta = min_smoothness(p);
    for (int rep = 0; rep < 4; ++rep) {
      const Assignment xhat = support::random_bits(rng, n);
      const std::size_t eps = hamming_distance(xhat, bf.x);
      EXPECT_TRUE(build_relaxation(t, xhat, eps, beta).is_feasible(as_rationals(bf.x)));
    }
  }
}

TEST(BuildRelaxation, QuadraticComponentDeviation) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 3 + rng() % 8;
    const Polynomial p = support::random_poly(rng, n, 2, 3 + rng() % 12);
    const Rational beta = min_smoothness(p);
    const DecompositionTree t = decompose(p);
    const Assignment a = support::random_bits(rng, n), b = support::random_bits(rng, n);
    const std::size_t eps = hamming_distance(a, b);
    const Rational delta = tolerance(beta, n, 2, 1, eps);
    const auto va = t.evaluate_all<std::uint8_t>(a), vb = t.evaluate_all<std::uint8_t>(b);
    for (const auto& [j, child] : t.root().children) ASSERT_LE(abs(va[child] - vb[child]), delta);
  }
}

TEST(BuildRelaxation, RegionsNestInEps) {
  // A point feasible at eps stays feasible at eps + 1.
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 6;
    const Polynomial p = support::random_poly(rng, n, 3, 14);
    const DecompositionTree t = decompose(p);
    const Assignment xhat = support::random_bits(rng, n);
    const Rational beta = min_smoothness(p);
    for (std::size_t eps = 0; eps < n; ++eps) {
      const LpModel small = build_relaxation(t, xhat, eps, beta);
      const LpModel large = build_relaxation(t, xhat, eps + 1, beta);
      ASSERT_EQ(small.rows.size(), large.rows.size());
      for (std::size_t r = 0; r < small.rows.size(); ++r) {
        ASSERT_LE(*large.rows[r].lower, *small.rows[r].lower);
        ASSERT_GE(*large.rows[r].upper, *small.rows[r].upper);
      }
    }
  }
}

TEST(GapBound, Substitution) {
  // d = 2: 2 beta n^(3/2) sqrt(eps)
  EXPECT_EQ(gap_bound(1, 4, 2, 4), 2 * 8 * 2);
  EXPECT_EQ(gap_bound(3, 10, 4, 0), 0);
  // d = 3: n^(5/2) = 32
  EXPECT_EQ(gap_bound(1, 4, 3, 1), 2 * (2 * e_upper() + 1) * 32);
  EXPECT_THROW(gap_bound(1, 4, 1, 1), std::invalid_argument);
}

TEST(GapBound, HoldsForLpOptimum) {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = 4 + rng() % 5, d = 2 + rng() % 2;
    const Polynomial p = support::random_poly(rng, n, d, 10);
    const support::BruteForce bf = support::brute_force(p);
    const Rational beta = min_smoothness(p);
    const Assignment xhat = support::random_bits(rng, n);
    const std::size_t eps = hamming_distance(xhat, bf.x);
    const LpSolution s = solve_lp(build_relaxation(decompose(p), xhat, eps, beta));
    ASSERT_EQ(s.status, LpStatus::optimal);
    const std::vector<Rational> y = to_rationals(std::span<const double>(s.y));
    const Rational py = p.evaluate(std::span<const Rational>(y));
    EXPECT_GE(py.get_d(), Rational(bf.value - gap_bound(beta, n, d, eps)).get_d() - 1e-6);
  }
}

TEST(ConstrainedRelaxation, EmptyConstraintSetMatches) {
  std::mt19937_64 rng(51);
  const Polynomial p = support::random_poly(rng, 6, 2, 10);
  const Assignment xhat = support::random_bits(rng, 6);
  const Rational beta = min_smoothness(p);
  const LpModel a = build_relaxation(decompose(p), xhat, 2, beta);
  const LpModel b = build_constrained_relaxation(ConstrainedProgram{p, {}}, xhat, 2, beta);
  EXPECT_EQ(to_lp_format(a), to_lp_format(b));
}

TEST(ConstrainedRelaxation, LinearConstraintSlack) {
  const std::size_t n = 6;
  Polynomial obj(n);
  obj.add_term({0, 1}, 1);
  Polynomial card(n);
  for (VarIndex i = 0; i < n; ++i) card.add_term({i}, 1);
  const ConstrainedProgram prog{obj, {{card, 0, 3}}};
  const Assignment xhat{1, 1, 0, 0, 0, 0};
  const Rational beta = program_smoothness(prog);
  const LpModel lp = build_constrained_relaxation(prog, xhat, 1, beta);
  const LpRow* top = nullptr;
  for (const LpRow& r : lp.rows) {
    if (r.name == "c0") top = &r;
  }
  ASSERT_NE(top, nullptr);
  // n top-level components, each with tolerance beta sqrt(n eps)
  const Rational slack = Rational(static_cast<unsigned long>(n)) * tolerance(beta, n, 2, 1, 1);
  EXPECT_EQ(*top->upper, 3 + slack);
  EXPECT_EQ(*top->lower, 0 - slack);
}

TEST(ConstrainedRelaxation, OptimumFeasibleAtTrueError) {
  std::mt19937_64 rng(61);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 5 + rng() % 4;
    const Polynomial obj = support::random_poly(rng, n, 2, 10);
    Polynomial card(n);
    for (VarIndex i = 0; i < n; ++i) card.add_term({i}, 1);
    const Rational cap(static_cast<unsigned long>(n / 2));
    const ConstrainedProgram prog{obj, {{card, 0, cap}}};
    const auto bf = support::brute_force(obj, [&](const Assignment& x) {
      return card.evaluate(std::span<const std::uint8_t>(x)) <= cap;
    });
    ASSERT_TRUE(bf.has_value());
    const Assignment xhat = support::random_bits(rng, n);
    const std::size_t eps = hamming_distance(xhat, bf->x);
    const LpModel lp = build_constrained_relaxation(prog, xhat, eps, program_smoothness(prog));
    EXPECT_TRUE(lp.is_feasible(as_rationals(bf->x)));
  }
}

TEST(LpFormat, WritesSectionsAndRanges) {
  const LpModel lp = build_relaxation(decompose(triangle()), Assignment{1, 0, 0}, 1, 2);
  const std::string text = to_lp_format(lp);
  EXPECT_NE(text.find("Maximize"), std::string::npos);
  EXPECT_NE(text.find("Subject To"), std::string::npos);
  EXPECT_NE(text.find("t_0_lo:"), std::string::npos);
  EXPECT_NE(text.find("t_0_hi:"), std::string::npos);
  EXPECT_NE(text.find("Bounds"), std::string::npos);
  EXPECT_NE(text.find("End"), std::string::npos);
}
