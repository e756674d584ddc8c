#pragma once

// The learning-augmented solve loop: for each error budget eps, relax around
// the prediction, solve the LP, round, and keep the best integral point.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <limits>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "laip/instance.hpp"
#include "laip/relax.hpp"
#include "laip/rounding.hpp"
#include "laip/simplex.hpp"

namespace laip {

/// Which error budgets to try: all of 0..n, every s-th value, or a list.
struct EpsGrid {
  enum class Kind { full, stride, list };
  Kind kind = Kind::full;
  std::size_t stride = 1;
  std::vector<std::size_t> values;

  static EpsGrid full() { return {}; }
  static EpsGrid every(std::size_t s) {
    if (s == 0) throw std::invalid_argument("eps grid stride must be >= 1");
    return {Kind::stride, s, {}};
  }
  static EpsGrid of(std::vector<std::size_t> v) { return {Kind::list, 1, std::move(v)}; }

  /// "full", "stride:S" or a comma-separated list "0,5,10".
  static EpsGrid parse(const std::string& text) {
    if (text == "full") return full();
    if (text.rfind("stride:", 0) == 0) {
      const std::string s = text.substr(7);
      std::size_t used = 0;
      unsigned long v = 0;
      try {
        v = std::stoul(s, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used == 0 || used != s.size()) throw std::invalid_argument("bad grid stride '" + s + "'");
      return every(v);
    }
    std::vector<std::size_t> out;
    std::stringstream in(text);
    std::string tok;
    while (std::getline(in, tok, ',')) {
      std::size_t used = 0;
      unsigned long v = 0;
      try {
        v = std::stoul(tok, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used == 0 || used != tok.size() || tok.front() == '-') {
        throw std::invalid_argument("bad grid value '" + tok + "'");
      }
      out.push_back(v);
    }
    if (out.empty()) throw std::invalid_argument("empty eps grid");
    return of(std::move(out));
  }

  /// Sorted, duplicate-free budgets for an n-variable instance.
  std::vector<std::size_t> expand(std::size_t n) const {
    std::vector<std::size_t> out;
    switch (kind) {
      case Kind::full:
        for (std::size_t e = 0; e <= n; ++e) out.push_back(e);
        break;
      case Kind::stride:
        if (stride == 0) throw std::invalid_argument("eps grid stride must be >= 1");
        for (std::size_t e = 0; e <= n; e += stride) out.push_back(e);
        break;
      case Kind::list:
        for (std::size_t e : values) {
          if (e > n) throw std::out_of_range("eps grid value " + std::to_string(e) + " exceeds n");
          out.push_back(e);
        }
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
        break;
    }
    return out;
  }
};

struct SolveConfig {
  RoundingStrategy strategy = RoundingStrategy::greedy;
  std::uint64_t seed = 0;
  EpsGrid grid;
  bool include_prediction = true;
  bool include_baseline = true;
  /// Tail exponent for the reported rounding bounds.
  Rational k = 1;
  std::size_t randomized_rounds = 16;
  /// Empty means the embedded simplex.
  LpBackend backend;
  std::size_t workers = 1;
  std::size_t exact_cap = 24;
  bool record_timing = true;
};

struct SeedOutcome {
  std::uint64_t seed = 0;
  Rational value;
  Rational violation;
};

struct EpsRecord {
  std::size_t eps = 0;
  LpStatus status = LpStatus::numerical_failure;
  std::size_t iterations = 0;
  double lp_value = std::numeric_limits<double>::quiet_NaN();
  std::vector<double> y;
  Assignment z;
  Rational rounded_value;
  /// max over constraints of dist(p_c(z), [L_c, U_c])
  Rational violation;
  std::vector<Rational> constraint_violations;
  Rational gap_bound;
  Rational rounding_bound;
  /// Additive constraint error allowed at this eps; zero when unconstrained.
  Rational constraint_bound;
  std::vector<SeedOutcome> seeds;
  double wall_ms = 0.0;

  bool solved() const { return status == LpStatus::optimal; }
};

struct Candidate {
  std::string provenance;
  Assignment z;
  Rational value;
  Rational violation;
};

struct SolveReport {
  std::size_t n = 0;
  std::size_t d = 0;
  Rational beta;
  RoundingStrategy strategy = RoundingStrategy::greedy;
  std::uint64_t seed = 0;
  Rational k = 1;
  std::size_t num_constraints = 0;
  bool exact_bypass = false;

  Assignment best_z;
  Rational best_value;
  Rational best_violation;
  std::string best_provenance;

  std::vector<EpsRecord> per_eps;
  std::vector<Candidate> candidates;
  std::vector<std::string> warnings;

  std::size_t lp_solves() const {
    std::size_t c = 0;
    for (const EpsRecord& r : per_eps) c += r.solved();
    return c;
  }
};

struct ExactResult {
  Assignment x;
  Rational value;
};

namespace detail {

// Terms as (bitmask, scaled integer coefficient). Variable i is bit n-1-i so
// that counting upwards visits assignments in lexicographic order.
struct PackedPoly {
  std::vector<std::pair<std::uint64_t, std::int64_t>> terms;
  Integer scale;  // the integer coefficients are scale * original
};

inline std::optional<PackedPoly> pack(const Polynomial& p) {
  const std::size_t n = p.num_vars();
  Integer scale = 1;
  for (const auto& [vars, c] : p.terms()) mpz_lcm(scale.get_mpz_t(), scale.get_mpz_t(), c.get_den_mpz_t());
  PackedPoly out;
  out.scale = scale;
  Integer mass = 0;
  for (const auto& [vars, c] : p.terms()) {
    const Rational scaled = c * Rational(scale);
    const Integer v = scaled.get_num();
    mass += abs(v);
    if (!v.fits_slong_p() || mass > Integer("4611686018427387904")) return std::nullopt;
    std::uint64_t mask = 0;
    for (VarIndex i : vars) mask |= std::uint64_t{1} << (n - 1 - i);
    out.terms.emplace_back(mask, v.get_si());
  }
  return out;
}

inline std::int64_t packed_value(const PackedPoly& p, std::uint64_t bits) {
  std::int64_t v = 0;
  for (const auto& [mask, c] : p.terms) {
    if ((bits & mask) == mask) v += c;
  }
  return v;
}

inline Assignment unpack(std::uint64_t bits, std::size_t n) {
  Assignment x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = (bits >> (n - 1 - i)) & 1;
  return x;
}

inline Integer ceil_int(const Rational& q) {
  Integer r;
  mpz_cdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return r;
}

inline Integer floor_int(const Rational& q) {
  Integer r;
  mpz_fdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return r;
}

}  // namespace detail

/// Exhaustive maximization over {0,1}^n subject to the instance constraints.
/// Ties go to the lexicographically smallest vector (x_0 most significant).
inline ExactResult exact_solve(const Instance& inst, std::size_t cap = 24) {
  const std::size_t n = inst.num_vars();
  if (n > cap || n > 62) {
    throw std::invalid_argument("exact_solve: n = " + std::to_string(n) + " exceeds the cap of " +
                                std::to_string(std::min<std::size_t>(cap, 62)));
  }
  const std::uint64_t count = std::uint64_t{1} << n;

  auto obj = detail::pack(inst.objective);
  struct PackedConstraint {
    detail::PackedPoly poly;
    std::int64_t lo, hi;
  };
  std::vector<PackedConstraint> cons;
  bool packed = obj.has_value();
  for (const PolyConstraint& c : inst.constraints) {
    if (!packed) break;
    auto pc = detail::pack(c.poly);
    if (!pc) {
      packed = false;
      break;
    }
    const Integer lo = detail::ceil_int(c.lower * Rational(pc->scale));
    const Integer hi = detail::floor_int(c.upper * Rational(pc->scale));
    const Integer lim("4611686018427387904");
    const Integer clo = lo < -lim ? -lim : (lo > lim ? lim : lo);
    const Integer chi = hi > lim ? lim : (hi < -lim ? -lim : hi);
    cons.push_back({std::move(*pc), clo.get_si(), chi.get_si()});
  }

  std::optional<std::uint64_t> best_bits;
  if (packed) {
    std::int64_t best = 0;
    for (std::uint64_t bits = 0; bits < count; ++bits) {
      bool ok = true;
      for (const PackedConstraint& c : cons) {
        const std::int64_t v = detail::packed_value(c.poly, bits);
        if (v < c.lo || v > c.hi) {
          ok = false;
          break;
        }
      }
      if (!ok) continue;
      const std::int64_t v = detail::packed_value(*obj, bits);
      if (!best_bits || v > best) {
        best = v;
        best_bits = bits;
      }
    }
  } else {
    Rational best;
    for (std::uint64_t bits = 0; bits < count; ++bits) {
      const Assignment x = detail::unpack(bits, n);
      if (!inst.is_feasible(x)) continue;
      const Rational v = inst.objective.evaluate(std::span<const std::uint8_t>(x));
      if (!best_bits || v > best) {
        best = v;
        best_bits = bits;
      }
    }
  }
  if (!best_bits) throw std::runtime_error("exact_solve: no assignment satisfies the constraints");
  ExactResult r;
  r.x = detail::unpack(*best_bits, n);
  r.value = inst.objective.evaluate(std::span<const std::uint8_t>(r.x));
  return r;
}

/// Additive constraint error of a rounded point:
///   eta beta n^(d - 1/2) sqrt(eps) + eta beta n^(d - 1) sqrt((k+1)/2) sqrt(n ln n)
/// with eta = 2e(d - 2) + 1.
inline Rational constraint_error_bound(const Rational& beta, std::size_t n, std::size_t d,
                                       std::size_t eps, const Rational& k) {
  if (d < 2) throw std::invalid_argument("constraint_error_bound requires d >= 2");
  return gap_bound(beta, n, d, eps) / 2 + mcdiarmid_rounding_bound(beta, n, d, k);
}

/// Lower bound the pipeline's value must meet when eps is the true prediction
/// error: p(x*) - 2 eta beta n^(d - 1/2) sqrt(eps), minus the rounding radius
/// eta beta n^(d-1) sqrt((k+1)/2) sqrt(n ln n) for randomized rounding.
inline Rational guarantee_bound(const Rational& opt, const Rational& beta, std::size_t n,
                                std::size_t d, std::size_t eps, const SolveConfig& config) {
  if (d < 2) throw std::invalid_argument("guarantee_bound requires d >= 2");
  Rational b = opt - gap_bound(beta, n, d, eps);
  if (config.strategy == RoundingStrategy::randomized) b -= mcdiarmid_rounding_bound(beta, n, d, config.k);
  return b;
}

inline Rational guarantee_bound(const Instance& inst, std::size_t eps, const SolveConfig& config) {
  const ExactResult x = exact_solve(inst, config.exact_cap);
  return guarantee_bound(x.value, min_smoothness(inst.objective), inst.num_vars(),
                         inst.objective.degree(), eps, config);
}

/// MAX-CUT approximation ratio 1 - (4 / kappa) sqrt(eps) / n^xi.
inline double maxcut_ratio(double kappa, double xi, std::size_t n, std::size_t eps) {
  return 1.0 - (4.0 / kappa) * std::sqrt(static_cast<double>(eps)) / std::pow(static_cast<double>(n), xi);
}

/// MAX-k-SAT approximation ratio 1 - 2(2e(k - 2) + 1) beta / kappa * sqrt(eps) / n^xi.
inline double maxksat_ratio(std::size_t k, double beta, double kappa, double xi, std::size_t n,
                            std::size_t eps) {
  const double eta = 2.0 * std::exp(1.0) * (static_cast<double>(k) - 2.0) + 1.0;
  return 1.0 - 2.0 * eta * beta / kappa * std::sqrt(static_cast<double>(eps)) /
                   std::pow(static_cast<double>(n), xi);
}

namespace detail {

inline bool better(const Rational& va, const Rational& viol_a, const Rational& vb, const Rational& viol_b) {
  if (viol_a != viol_b) return viol_a < viol_b;
  return va > vb;
}

inline std::vector<Rational> violations(const Instance& inst, std::span<const std::uint8_t> z) {
  std::vector<Rational> out;
  out.reserve(inst.constraints.size());
  for (const PolyConstraint& c : inst.constraints) {
    out.push_back(interval_distance(c.poly.evaluate(z), c.lower, c.upper));
  }
  return out;
}

inline Rational max_of(const std::vector<Rational>& v) {
  Rational m = 0;
  for (const Rational& x : v) {
    if (x > m) m = x;
  }
  return m;
}

// Runs f(i) for i in [0, count) on up to `workers` threads; rethrows the first
// exception by index.
template <class F>
void parallel_for(std::size_t count, std::size_t workers, F&& f) {
  workers = std::max<std::size_t>(1, std::min(workers, count));
  if (workers == 1) {
    for (std::size_t i = 0; i < count; ++i) f(i);
    return;
  }
  std::vector<std::exception_ptr> errors(count);
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i; (i = next.fetch_add(1)) < count;) {
        try {
          f(i);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    });
  }
  for (std::thread& t : pool) t.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

struct Context {
  const Instance& inst;
  const Prediction& prediction;
  const SolveConfig& config;
  std::size_t n;
  std::size_t d;
  std::size_t bound_d;  // degree used in the reported bounds, at least 2
  Rational beta;
};

inline void round_record(const Context& ctx, EpsRecord& rec) {
  const Polynomial& p = ctx.inst.objective;
  auto score = [&](const Assignment& z, Rational& value, Rational& viol, std::vector<Rational>& per) {
    value = p.evaluate(std::span<const std::uint8_t>(z));
    per = violations(ctx.inst, z);
    viol = max_of(per);
  };
  if (ctx.config.strategy == RoundingStrategy::greedy) {
    rec.z = greedy_round(p, std::span<const double>(rec.y));
    score(rec.z, rec.rounded_value, rec.violation, rec.constraint_violations);
    return;
  }
  const std::uint64_t base = mix64(ctx.config.seed, rec.eps);
  bool have = false;
  for (std::size_t r = 0; r < std::max<std::size_t>(1, ctx.config.randomized_rounds); ++r) {
    SeedOutcome so;
    so.seed = mix64(base, r);
    Assignment z = randomized_round(rec.y, so.seed);
    std::vector<Rational> per;
    score(z, so.value, so.violation, per);
    if (!have || better(so.value, so.violation, rec.rounded_value, rec.violation)) {
      have = true;
      rec.z = std::move(z);
      rec.rounded_value = so.value;
      rec.violation = so.violation;
      rec.constraint_violations = std::move(per);
    }
    rec.seeds.push_back(std::move(so));
  }
}

inline EpsRecord run_eps(const Context& ctx, std::size_t eps) {
  const auto start = std::chrono::steady_clock::now();
  EpsRecord rec;
  rec.eps = eps;
  rec.gap_bound = gap_bound(ctx.beta, ctx.n, ctx.bound_d, eps);
  rec.rounding_bound = rounding_error_bound(ctx.beta, ctx.n, ctx.bound_d, ctx.config.k);
  if (!ctx.inst.constraints.empty()) {
    rec.constraint_bound = constraint_error_bound(ctx.beta, ctx.n, ctx.bound_d, eps, ctx.config.k);
  }

  const LpModel model = ctx.inst.constraints.empty()
                            ? build_relaxation(decompose(ctx.inst.objective), ctx.prediction.x_hat, eps, ctx.beta)
                            : build_constrained_relaxation(ctx.inst.program(), ctx.prediction.x_hat, eps, ctx.beta);
  const LpSolution sol = ctx.config.backend ? ctx.config.backend(model) : solve_lp(model);
  rec.status = sol.status;
  rec.iterations = sol.iterations;
  if (sol.status == LpStatus::optimal) {
    rec.lp_value = sol.objective_value;
    rec.y = sol.y;
    round_record(ctx, rec);
  }
  if (ctx.config.record_timing) {
    rec.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  }
  return rec;
}

inline void add_candidate(SolveReport& report, const Instance& inst, std::string provenance, Assignment z) {
  Candidate c;
  c.provenance = std::move(provenance);
  c.value = inst.objective.evaluate(std::span<const std::uint8_t>(z));
  c.violation = inst.max_violation(z);
  c.z = std::move(z);
  report.candidates.push_back(std::move(c));
}

inline void pick_best(SolveReport& report) {
  const Candidate* best = nullptr;
  for (const Candidate& c : report.candidates) {
    if (!best || better(c.value, c.violation, best->value, best->violation)) best = &c;
  }
  if (!best) return;
  report.best_z = best->z;
  report.best_value = best->value;
  report.best_violation = best->violation;
  report.best_provenance = best->provenance;
}

}  // namespace detail

/// Runs the loop on `inst`, using the constrained relaxation when the instance
/// has constraints. The best candidate has the smallest constraint violation,
/// then the largest objective value; earlier candidates win ties.
inline SolveReport solve(const Instance& inst, const Prediction& prediction, const SolveConfig& config = {}) {
  const std::size_t n = inst.num_vars();
  check_dimension(n, prediction.x_hat.size());
  for (std::uint8_t b : prediction.x_hat) {
    if (b > 1) throw std::invalid_argument("prediction entries must be 0 or 1");
  }
  const ConstrainedProgram prog = inst.program();
  prog.validate();

  SolveReport report;
  report.n = n;
  report.d = prog.degree();
  report.beta = inst.constraints.empty() ? min_smoothness(inst.objective) : program_smoothness(prog);
  report.strategy = config.strategy;
  report.seed = config.seed;
  report.k = config.k;
  report.num_constraints = inst.constraints.size();

  if (n < 2 || n <= report.d) {
    report.exact_bypass = true;
    ExactResult x = exact_solve(inst, config.exact_cap);
    detail::add_candidate(report, inst, "exact", std::move(x.x));
    detail::pick_best(report);
    return report;
  }

  const detail::Context ctx{inst, prediction, config, n, report.d, std::max<std::size_t>(2, report.d), report.beta};
  const std::vector<std::size_t> grid = config.grid.expand(n);
  report.per_eps.resize(grid.size());
  detail::parallel_for(grid.size(), config.workers,
                       [&](std::size_t i) { report.per_eps[i] = detail::run_eps(ctx, grid[i]); });

  for (const EpsRecord& rec : report.per_eps) {
    if (rec.solved()) {
      Candidate c;
      c.provenance = "eps=" + std::to_string(rec.eps);
      c.z = rec.z;
      c.value = rec.rounded_value;
      c.violation = rec.violation;
      report.candidates.push_back(std::move(c));
    } else {
      report.warnings.push_back("eps=" + std::to_string(rec.eps) + ": LP " + to_string(rec.status) +
                                ", skipped");
    }
  }
  if (config.include_prediction) detail::add_candidate(report, inst, "prediction", prediction.x_hat);
  if (config.include_baseline) {
    const std::vector<Rational> half(n, Rational(1, 2));
    detail::add_candidate(report, inst, "baseline", greedy_round(inst.objective, std::span<const Rational>(half)));
  }
  detail::pick_best(report);
  return report;
}

inline SolveReport solve_constrained(const ConstrainedProgram& prog, const Prediction& prediction,
                                     const SolveConfig& config = {}) {
  Instance inst = make_instance(prog.objective);
  inst.constraints = prog.constraints;
  return solve(inst, prediction, config);
}

}  // namespace laip
