#pragma once

// JSON and CSV serialization of solve reports.

#include <cmath>
#include <sstream>
#include <string>

#include <json.hpp>

#include "laip/pipeline.hpp"

namespace laip {

namespace detail {

inline std::string bits(std::span<const std::uint8_t> x) {
  std::string s;
  for (std::uint8_t b : x) s += b ? '1' : '0';
  return s;
}

// Exact value as "num/den" next to a 15-digit decimal.
inline nlohmann::json exact(const Rational& q) {
  return {{"exact", to_string(q)}, {"approx", to_decimal(q, 15)}};
}

inline std::string csv_double(double v) { return std::isnan(v) ? "" : to_decimal(v, 15); }

}  // namespace detail

/// Full report. Keys are emitted in sorted order, so equal reports give equal bytes.
inline nlohmann::json to_json(const SolveReport& r) {
  nlohmann::json j;
  j["n"] = r.n;
  j["d"] = r.d;
  j["beta"] = detail::exact(r.beta);
  j["strategy"] = to_string(r.strategy);
  j["seed"] = r.seed;
  j["k"] = to_string(r.k);
  j["num_constraints"] = r.num_constraints;
  j["exact_bypass"] = r.exact_bypass;
  j["best_z"] = detail::bits(r.best_z);
  j["best_value"] = detail::exact(r.best_value);
  j["best_violation"] = detail::exact(r.best_violation);
  j["best_provenance"] = r.best_provenance;
  j["lp_solves"] = r.lp_solves();
  j["warnings"] = r.warnings;

  j["per_eps"] = nlohmann::json::array();
  for (const EpsRecord& e : r.per_eps) {
    nlohmann::json row;
    row["eps"] = e.eps;
    row["status"] = to_string(e.status);
    row["iterations"] = e.iterations;
    row["wall_ms"] = e.wall_ms;
    row["gap_bound"] = detail::exact(e.gap_bound);
    row["rounding_bound"] = detail::exact(e.rounding_bound);
    if (r.num_constraints > 0) row["constraint_bound"] = detail::exact(e.constraint_bound);
    if (e.solved()) {
      row["lp_value"] = e.lp_value;
      row["z"] = detail::bits(e.z);
      row["rounded_value"] = detail::exact(e.rounded_value);
      row["violation_max"] = detail::exact(e.violation);
      if (!e.seeds.empty()) {
        nlohmann::json seeds = nlohmann::json::array();
        for (const SeedOutcome& s : e.seeds) {
          seeds.push_back({{"seed", s.seed}, {"value", to_string(s.value)}, {"violation", to_string(s.violation)}});
        }
        row["seeds"] = std::move(seeds);
      }
    }
    j["per_eps"].push_back(std::move(row));
  }

  j["candidates"] = nlohmann::json::array();
  for (const Candidate& c : r.candidates) {
    j["candidates"].push_back({{"provenance", c.provenance},
                               {"z", detail::bits(c.z)},
                               {"value", detail::exact(c.value)},
                               {"violation", detail::exact(c.violation)}});
  }
  return j;
}

/// Per-eps rows: eps, lp_value, rounded_value, violation_max, wall_ms. Skipped
/// rows leave the numeric fields empty.
inline std::string to_csv(const SolveReport& r) {
  std::ostringstream out;
  out << "eps,lp_value,rounded_value,violation_max,wall_ms\n";
  for (const EpsRecord& e : r.per_eps) {
    out << e.eps << ',';
    if (e.solved()) {
      out << detail::csv_double(e.lp_value) << ',' << to_decimal(e.rounded_value, 15) << ','
          << to_decimal(e.violation, 15);
    } else {
      out << ",,";
    }
    out << ',' << to_decimal(e.wall_ms, 6) << '\n';
  }
  return out.str();
}

}  // namespace laip
