#pragma once

// Prediction sources and empirical-risk selection among them.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "laip/pipeline.hpp"
#include "laip/problems.hpp"
#include "laip/random.hpp"

namespace laip {

/// Flips exactly `eps` coordinates of x_star, chosen uniformly without
/// replacement from the seeded sequence.
inline Prediction perturb(std::span<const std::uint8_t> x_star, std::size_t eps, std::uint64_t seed) {
  const std::size_t n = x_star.size();
  if (eps > n) throw std::out_of_range("perturb: eps must lie in [0, n]");
  Rng rng(seed);
  Prediction p;
  p.x_hat.assign(x_star.begin(), x_star.end());
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  for (std::size_t r = 0; r < eps; ++r) {
    std::swap(order[r], order[r + rng.below(n - r)]);
    p.x_hat[order[r]] ^= 1;
  }
  p.provenance = "perturbed(" + std::to_string(eps) + ")";
  return p;
}

// ------------------------------------------------------- prediction files

/// One line of '0'/'1' characters; surrounding whitespace is ignored.
inline Assignment parse_prediction(const std::string& text, std::size_t n) {
  Assignment x;
  for (char c : text) {
    if (c == '0' || c == '1') {
      x.push_back(c == '1');
    } else if (c != ' ' && c != '\t' && c != '\r' && c != '\n') {
      throw ParseError(std::string("prediction contains '") + c + "'");
    }
  }
  if (x.size() != n) {
    throw ParseError("prediction has length " + std::to_string(x.size()) + ", expected " + std::to_string(n));
  }
  return x;
}

inline std::string write_prediction(std::span<const std::uint8_t> x) {
  std::string s;
  for (std::uint8_t b : x) s += b ? '1' : '0';
  return s + "\n";
}

/// [{"name": "cand", "predictions": {"<instance id>": "<prediction file>"}}, ...]
struct ManifestEntry {
  std::string name;
  std::map<std::string, std::string> predictions;
};

inline std::vector<ManifestEntry> parse_manifest(const std::string& text) {
  try {
    const nlohmann::json j = nlohmann::json::parse(text);
    std::vector<ManifestEntry> out;
    for (const auto& e : j) {
      ManifestEntry m;
      m.name = e.at("name").get<std::string>();
      m.predictions = e.at("predictions").get<std::map<std::string, std::string>>();
      out.push_back(std::move(m));
    }
    return out;
  } catch (const nlohmann::json::exception& ex) {
    throw ParseError(std::string("invalid manifest: ") + ex.what());
  }
}

// --------------------------------------------------------------- oracles

/// Maps (instance, training index) to a prediction.
using Oracle = std::function<Assignment(const Instance&, std::size_t)>;

struct NamedOracle {
  std::string id;
  Oracle predict;
};

inline NamedOracle exact_oracle(std::size_t cap = 24) {
  return {"exact", [cap](const Instance& inst, std::size_t) { return exact_solve(inst, cap).x; }};
}

inline NamedOracle complement_oracle(std::size_t cap = 24) {
  return {"complement", [cap](const Instance& inst, std::size_t) {
            Assignment x = exact_solve(inst, cap).x;
            for (auto& b : x) b ^= 1;
            return x;
          }};
}

/// Exact optimum with eps_of(n) coordinates flipped; the seed stream is keyed
/// by the training index.
inline NamedOracle perturb_oracle(std::function<std::size_t(std::size_t)> eps_of, std::uint64_t seed,
                                  std::string id, std::size_t cap = 24) {
  return {std::move(id), [eps_of = std::move(eps_of), seed, cap](const Instance& inst, std::size_t index) {
            const Assignment x = exact_solve(inst, cap).x;
            return perturb(x, eps_of(inst.num_vars()), mix64(seed, index)).x_hat;
          }};
}

/// Reads predictions from files listed in a manifest entry, keyed by instance name.
inline NamedOracle file_oracle(const ManifestEntry& entry) {
  return {entry.name, [entry](const Instance& inst, std::size_t) {
            auto it = entry.predictions.find(inst.name);
            if (it == entry.predictions.end()) {
              throw std::runtime_error("manifest '" + entry.name + "' has no prediction for '" + inst.name + "'");
            }
            return parse_prediction(read_file(it->second), inst.num_vars());
          }};
}

// ------------------------------------------------------------------- ERM

struct ErmProblem {
  std::vector<NamedOracle> candidates;
  std::vector<Instance> training;
};

struct ErmResult {
  std::size_t best = 0;
  std::string best_id;
  Rational best_cost;
  /// Mean cost H - p(z) per candidate.
  std::vector<Rational> mean_cost;
  /// Mean achieved value per candidate.
  std::vector<Rational> mean_value;
  /// costs[c][i] for candidate c on training instance i.
  std::vector<std::vector<Rational>> costs;
};

/// argmin over candidates of the mean of H - p(z) across the training set,
/// where z is the pipeline's output with that candidate's prediction. Ties go
/// to the lowest index.
inline ErmResult erm_select(const ErmProblem& prob, const SolveConfig& config) {
  if (prob.candidates.empty()) throw std::invalid_argument("erm_select: no candidates");
  if (prob.training.empty()) throw std::invalid_argument("erm_select: no training instances");
  const std::size_t nc = prob.candidates.size();
  const std::size_t ni = prob.training.size();
  ErmResult r;
  r.costs.assign(nc, std::vector<Rational>(ni));
  std::vector<std::vector<Rational>> values(nc, std::vector<Rational>(ni));

  SolveConfig inner = config;
  inner.workers = 1;
  detail::parallel_for(nc * ni, config.workers, [&](std::size_t cell) {
    const std::size_t c = cell / ni;
    const std::size_t i = cell % ni;
    const Instance& inst = prob.training[i];
    Prediction pred;
    pred.x_hat = prob.candidates[c].predict(inst, i);
    pred.provenance = "erm(" + std::to_string(c) + ")";
    const SolveReport rep = solve(inst, pred, inner);
    values[c][i] = rep.best_value;
    r.costs[c][i] = inst.ceiling - rep.best_value;
  });

  const Rational count(static_cast<unsigned long>(ni));
  for (std::size_t c = 0; c < nc; ++c) {
    Rational cost = 0, value = 0;
    for (std::size_t i = 0; i < ni; ++i) {
      cost += r.costs[c][i];
      value += values[c][i];
    }
    r.mean_cost.push_back(cost / count);
    r.mean_value.push_back(value / count);
    if (c == 0 || r.mean_cost[c] < r.mean_cost[r.best]) r.best = c;
  }
  r.best_id = prob.candidates[r.best].id;
  r.best_cost = r.mean_cost[r.best];
  return r;
}

/// Mean Hamming distance from the oracle's predictions to the canonical
/// (lexicographically smallest) optima.
inline Rational empirical_prediction_error(const NamedOracle& oracle, const std::vector<Instance>& instances,
                                           std::size_t cap = 24) {
  if (instances.empty()) throw std::invalid_argument("empirical_prediction_error: no instances");
  Rational total = 0;
  for (std::size_t i = 0; i < instances.size(); ++i) {
    const Assignment x_star = exact_solve(instances[i], cap).x;
    total += Rational(static_cast<unsigned long>(hamming_distance(oracle.predict(instances[i], i), x_star)));
  }
  return total / Rational(static_cast<unsigned long>(instances.size()));
}

}  // namespace laip
