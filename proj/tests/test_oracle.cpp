#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "laip/oracle.hpp"
#include "support/oracles.hpp"

using namespace laip;

namespace {

std::vector<Instance> training_set(std::size_t count, std::uint64_t seed) {
  std::vector<Instance> out;
  for (std::size_t i = 0; i < count; ++i) {
    Instance inst = i % 2 == 0 ? to_instance(gen_gnp(8, 0.5, seed + i)) : to_instance(gen_ksat(8, 24, 3, seed + i));
    inst.name = "inst" + std::to_string(i);
    out.push_back(std::move(inst));
  }
  return out;
}

SolveConfig fast_config() {
  SolveConfig c;
  c.grid = EpsGrid::every(4);
  c.include_baseline = false;
  return c;
}

}  // namespace

TEST(Perturb, ZeroAndFull) {
  const Assignment x{1, 0, 1, 1, 0};
  EXPECT_EQ(perturb(x, 0, 9).x_hat, x);
  EXPECT_EQ(perturb(x, 5, 9).x_hat, (Assignment{0, 1, 0, 0, 1}));
  EXPECT_EQ(perturb(x, 2, 9).provenance, "perturbed(2)");
  EXPECT_THROW(perturb(x, 6, 0), std::out_of_range);
}

TEST(Perturb, ExactFlipCount) {
  std::mt19937_64 rng(1);
  for (std::uint64_t seed = 0; seed < 500; ++seed) {
    const std::size_t n = 1 + rng() % 40;
    const Assignment x = support::random_bits(rng, n);
    const std::size_t eps = rng() % (n + 1);
    const Prediction p = perturb(x, eps, seed);
    ASSERT_EQ(hamming_distance(p.x_hat, x), eps);
  }
  const Assignment x(10, 0);
  for (std::uint64_t seed = 0; seed < 100; ++seed) EXPECT_EQ(hamming_distance(perturb(x, 3, seed).x_hat, x), 3u);
}

TEST(Perturb, DeterministicAndRoughlyUniform) {
  const Assignment x(8, 0);
  EXPECT_EQ(perturb(x, 3, 4).x_hat, perturb(x, 3, 4).x_hat);
  std::vector<int> hits(8, 0);
  const int trials = 8000;
  for (int s = 0; s < trials; ++s) {
    const Assignment y = perturb(x, 2, s).x_hat;
    for (std::size_t i = 0; i < 8; ++i) hits[i] += y[i];
  }
  // each coordinate flipped with probability 1/4; 2000 expected, sd ~ 39
  for (int h : hits) EXPECT_NEAR(h, 2000, 250);
}

TEST(PredictionFile, RoundTrip) {
  const Assignment x{1, 0, 0, 1, 1};
  EXPECT_EQ(write_prediction(x), "10011\n");
  EXPECT_EQ(parse_prediction(" 10011\r\n", 5), x);
  EXPECT_THROW(parse_prediction("1001", 5), ParseError);
  EXPECT_THROW(parse_prediction("10a11", 5), ParseError);
}

TEST(Manifest, Parse) {
  const auto m = parse_manifest(R"([{"name": "a", "predictions": {"i0": "p0.txt", "i1": "p1.txt"}}])");
  ASSERT_EQ(m.size(), 1u);
  EXPECT_EQ(m[0].name, "a");
  EXPECT_EQ(m[0].predictions.at("i1"), "p1.txt");
  EXPECT_THROW(parse_manifest("[{\"name\": 3}]"), ParseError);
  EXPECT_THROW(parse_manifest("{"), ParseError);
}

TEST(Manifest, FileOracleReadsPredictions) {
  const auto dir = std::filesystem::temp_directory_path() / "laip_oracle_test";
  std::filesystem::create_directories(dir);
  const auto file = dir / "p.txt";
  write_file(file.string(), "0110\n");
  ManifestEntry e;
  e.name = "files";
  e.predictions["g"] = file.string();
  const NamedOracle o = file_oracle(e);
  Instance inst = to_instance(gen_gnp(4, 0.5, 1));
  inst.name = "g";
  EXPECT_EQ(o.predict(inst, 0), (Assignment{0, 1, 1, 0}));
  inst.name = "missing";
  EXPECT_THROW(o.predict(inst, 0), std::runtime_error);
  std::filesystem::remove_all(dir);
}

TEST(PredictionError, ExactComplementAndPerturbed) {
  const std::vector<Instance> set = training_set(6, 10);
  EXPECT_EQ(empirical_prediction_error(exact_oracle(), set), 0);
  EXPECT_EQ(empirical_prediction_error(complement_oracle(), set), 8);
  EXPECT_EQ(empirical_prediction_error(perturb_oracle([](std::size_t) { return 3; }, 1, "p3"), set), 3);
  EXPECT_THROW(empirical_prediction_error(exact_oracle(), {}), std::invalid_argument);
  EXPECT_THROW(empirical_prediction_error(exact_oracle(), {to_instance(gen_gnp(30, 0.1, 0))}),
               std::invalid_argument);
}

TEST(PredictionError, CanonicalOptimumIsLexSmallest) {
  const std::vector<Instance> set = training_set(4, 20);
  for (const Instance& inst : set) EXPECT_EQ(exact_oracle().predict(inst, 0), support::brute_force(inst.objective).x);
}

TEST(Erm, ExactBeatsComplement) {
  ErmProblem prob;
  prob.candidates = {exact_oracle(), complement_oracle()};
  prob.training = training_set(6, 30);
  const ErmResult r = erm_select(prob, fast_config());
  EXPECT_EQ(r.best_id, "exact");
  EXPECT_LE(r.mean_cost[0], r.mean_cost[1]);
  for (std::size_t i = 0; i < prob.training.size(); ++i) {
    EXPECT_EQ(r.costs[0][i], prob.training[i].ceiling - exact_solve(prob.training[i]).value);
  }
}

TEST(Erm, SingleCandidate) {
  ErmProblem prob;
  prob.candidates = {perturb_oracle([](std::size_t n) { return n / 2; }, 3, "half")};
  prob.training = training_set(4, 40);
  const ErmResult r = erm_select(prob, fast_config());
  EXPECT_EQ(r.best_id, "half");
  Rational mean = 0;
  for (const Rational& c : r.costs[0]) mean += c;
  EXPECT_EQ(r.best_cost, mean / 4);
}

TEST(Erm, DuplicatesGoToLowestIndex) {
  ErmProblem prob;
  NamedOracle second = exact_oracle();
  second.id = "second";
  prob.candidates = {exact_oracle(), second};
  prob.training = training_set(3, 50);
  const ErmResult r = erm_select(prob, fast_config());
  EXPECT_EQ(r.mean_cost[0], r.mean_cost[1]);
  EXPECT_EQ(r.best, 0u);
  EXPECT_EQ(r.best_id, "exact");
}

TEST(Erm, CostPlusValueIsCeiling) {
  ErmProblem prob;
  prob.candidates = {exact_oracle(), perturb_oracle([](std::size_t n) { return n / 4; }, 5, "quarter")};
  prob.training = training_set(4, 60);
  const ErmResult r = erm_select(prob, fast_config());
  Rational h = 0;
  for (const Instance& inst : prob.training) h += inst.ceiling;
  h /= 4;
  for (std::size_t c = 0; c < 2; ++c) EXPECT_EQ(r.mean_cost[c] + r.mean_value[c], h);
}

TEST(Erm, DominatingCandidateSelected) {
  // A constant oracle that always predicts all zeros, against the optimum.
  const NamedOracle zeros{"zeros", [](const Instance& inst, std::size_t) { return Assignment(inst.num_vars(), 0); }};
  ErmProblem prob;
  prob.candidates = {zeros, exact_oracle()};
  prob.training = training_set(4, 70);
  SolveConfig config = fast_config();
  config.grid = EpsGrid::of({0});
  const ErmResult r = erm_select(prob, config);
  for (std::size_t i = 0; i < 4; ++i) ASSERT_LE(r.costs[1][i], r.costs[0][i]);
  EXPECT_EQ(r.best_id, "exact");
}

TEST(Erm, WorkersGiveSameResult) {
  ErmProblem prob;
  prob.candidates = {complement_oracle(), exact_oracle(), perturb_oracle([](std::size_t) { return 2; }, 8, "p2")};
  prob.training = training_set(5, 80);
  SolveConfig config = fast_config();
  const ErmResult a = erm_select(prob, config);
  config.workers = 4;
  const ErmResult b = erm_select(prob, config);
  EXPECT_EQ(a.costs, b.costs);
  EXPECT_EQ(a.best, b.best);
}

TEST(Erm, Errors) {
  ErmProblem prob;
  EXPECT_THROW(erm_select(prob, {}), std::invalid_argument);
  prob.candidates = {exact_oracle()};
  EXPECT_THROW(erm_select(prob, {}), std::invalid_argument);
}
