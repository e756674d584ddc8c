#pragma once

// Subcommand bodies for the laip tool, kept apart from argument parsing so
// tests can call them directly.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "laip/laip.hpp"

namespace laip::cli {

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kFailure = 1;
inline constexpr int kParseError = 2;
inline constexpr int kAllLpFailed = 3;

struct GenOptions {
  std::string kind;  // maxcut | maxksat | maxkcsp
  std::size_t n = 10;
  double p = 0.5;
  std::size_t m = 20;
  std::size_t k = 3;
  std::uint64_t seed = 0;
  std::string out;  // empty: stdout
};

struct SolveOptions {
  std::string input;
  std::string prediction = "exact";  // exact | perturb:E | path to a prediction file
  std::string strategy = "greedy";
  std::string grid = "full";
  std::uint64_t seed = 0;
  std::string k = "1";
  std::string json_out;
  std::string csv_out;
  bool timing = true;
  std::size_t workers = 1;
  std::size_t exact_cap = 24;
  LpBackend backend;  // empty: embedded simplex
};

struct SweepOptions {
  std::vector<std::string> inputs;
  std::string eps = "0";
  std::size_t trials = 1;
  std::uint64_t seed = 0;
  std::string strategy = "greedy";
  std::string out;  // empty: stdout
  std::size_t workers = 1;
  std::size_t exact_cap = 24;
};

struct VerifyOptions {
  std::string input;
  std::size_t exact_cap = 20;
};

/// Worker count from LAIP_WORKERS, or `fallback` when unset or malformed.
inline std::size_t env_workers(std::size_t fallback = 1) {
  const char* v = std::getenv("LAIP_WORKERS");
  if (!v) return fallback;
  char* end = nullptr;
  const unsigned long w = std::strtoul(v, &end, 10);
  if (end == v || *end != '\0' || w == 0) return fallback;
  return w;
}

inline RoundingStrategy parse_strategy(const std::string& s) {
  if (s == "greedy") return RoundingStrategy::greedy;
  if (s == "randomized") return RoundingStrategy::randomized;
  throw std::invalid_argument("unknown strategy '" + s + "'");
}

namespace detail {

inline void emit(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
  } else {
    write_file(path, text);
  }
}

inline Prediction load_prediction(const std::string& source, const Instance& inst, std::uint64_t seed,
                                  std::size_t cap) {
  if (source == "exact") {
    Prediction p;
    p.x_hat = exact_solve(inst, cap).x;
    p.provenance = "exact";
    return p;
  }
  if (source.rfind("perturb:", 0) == 0) {
    const std::string e = source.substr(8);
    std::size_t used = 0;
    unsigned long eps = 0;
    try {
      eps = std::stoul(e, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != e.size() || e.front() == '-') throw std::invalid_argument("bad perturb budget '" + e + "'");
    return perturb(exact_solve(inst, cap).x, eps, seed);
  }
  Prediction p;
  p.x_hat = parse_prediction(read_file(source), inst.num_vars());
  p.provenance = "file";
  return p;
}

// Runs `body` and maps exceptions onto exit codes.
template <class F>
int guarded(std::ostream& err, F&& body) {
  try {
    return body();
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return kParseError;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kParseError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kFailure;
  }
}

}  // namespace detail

inline int cmd_gen(const GenOptions& o, std::ostream& out, std::ostream& err) {
  return detail::guarded(err, [&] {
    std::string text;
    if (o.kind == "maxcut") {
      text = write_dimacs_graph(gen_gnp(o.n, o.p, o.seed));
    } else if (o.kind == "maxksat") {
      text = write_dimacs_cnf(gen_ksat(o.n, o.m, o.k, o.seed));
    } else if (o.kind == "maxkcsp") {
      text = write_csp_json(gen_kcsp(o.n, o.m, o.k, o.seed));
    } else {
      throw std::invalid_argument("unknown problem kind '" + o.kind + "'");
    }
    detail::emit(o.out, text, out);
    return kOk;
  });
}

inline int cmd_solve(const SolveOptions& o, std::ostream& out, std::ostream& err) {
  return detail::guarded(err, [&] {
    const Instance inst = load_instance(o.input);
    SolveConfig config;
    config.strategy = parse_strategy(o.strategy);
    config.seed = o.seed;
    config.grid = EpsGrid::parse(o.grid);
    config.k = parse_rational(o.k);
    config.workers = o.workers;
    config.exact_cap = o.exact_cap;
    config.record_timing = o.timing;
    config.backend = o.backend;
    const Prediction pred = detail::load_prediction(o.prediction, inst, o.seed, o.exact_cap);
    const SolveReport r = solve(inst, pred, config);

    if (!o.json_out.empty()) detail::emit(o.json_out, to_json(r).dump(2) + "\n", out);
    if (!o.csv_out.empty()) detail::emit(o.csv_out, to_csv(r), out);
    for (const std::string& w : r.warnings) err << "warning: " << w << "\n";
    out << "n " << r.n << "\n"
        << "d " << r.d << "\n"
        << "beta " << to_string(r.beta) << "\n"
        << "prediction " << pred.provenance << "\n"
        << "lp_solves " << r.lp_solves() << "\n"
        << "best_value " << to_string(r.best_value) << "\n"
        << "best_violation " << to_string(r.best_violation) << "\n"
        << "best_provenance " << r.best_provenance << "\n"
        << "best_z " << write_prediction(r.best_z);
    if (!r.exact_bypass && !r.per_eps.empty() && r.lp_solves() == 0) {
      err << "error: every LP failed\n";
      return kAllLpFailed;
    }
    return kOk;
  });
}

struct SweepRow {
  std::size_t instance = 0;
  std::size_t eps = 0;
  std::size_t trial = 0;
  Rational achieved;
  Rational opt;
  Rational bound;
};

/// One row per (instance, eps, trial): the prediction is the canonical
/// optimum with eps flips, and the grid is the single true eps.
inline int cmd_sweep(const SweepOptions& o, std::ostream& out, std::ostream& err) {
  return detail::guarded(err, [&] {
    if (o.inputs.empty()) throw std::invalid_argument("sweep needs at least one instance");
    if (o.trials == 0) throw std::invalid_argument("sweep needs at least one trial");
    std::vector<Instance> insts;
    std::vector<ExactResult> optima;
    for (const std::string& path : o.inputs) {
      insts.push_back(load_instance(path));
      optima.push_back(exact_solve(insts.back(), o.exact_cap));
    }
    const EpsGrid grid = EpsGrid::parse(o.eps);
    const RoundingStrategy strategy = parse_strategy(o.strategy);

    std::vector<SweepRow> rows;
    for (std::size_t i = 0; i < insts.size(); ++i) {
      for (std::size_t eps : grid.expand(insts[i].num_vars())) {
        for (std::size_t t = 0; t < o.trials; ++t) rows.push_back({i, eps, t, {}, optima[i].value, {}});
      }
    }
    std::vector<std::string> warnings(rows.size());
    laip::detail::parallel_for(rows.size(), o.workers, [&](std::size_t c) {
      SweepRow& row = rows[c];
      const Instance& inst = insts[row.instance];
      const std::uint64_t cell_seed = mix64(mix64(o.seed, row.instance), mix64(row.eps, row.trial));
      SolveConfig config;
      config.strategy = strategy;
      config.seed = cell_seed;
      config.grid = EpsGrid::of({row.eps});
      config.exact_cap = o.exact_cap;
      config.record_timing = false;
      const SolveReport r = solve(inst, perturb(optima[row.instance].x, row.eps, cell_seed), config);
      row.achieved = r.best_value;
      const std::size_t d = std::max<std::size_t>(2, inst.objective.degree());
      row.bound = guarantee_bound(row.opt, min_smoothness(inst.objective), inst.num_vars(), d, row.eps, config);
      if (!r.warnings.empty()) warnings[c] = r.warnings.front();
    });

    std::ostringstream csv;
    csv << "instance,eps,trial,achieved,opt,ratio,bound\n";
    for (const SweepRow& row : rows) {
      Rational ratio = 1;
      if (sgn(row.opt) != 0) ratio = row.achieved / row.opt;
      csv << std::filesystem::path(o.inputs[row.instance]).filename().string() << ',' << row.eps << ',' << row.trial << ',' << to_decimal(row.achieved, 15)
          << ',' << to_decimal(row.opt, 15) << ',' << to_decimal(ratio, 15) << ',' << to_decimal(row.bound, 15)
          << '\n';
    }
    for (const std::string& w : warnings) {
      if (!w.empty()) err << "warning: " << w << "\n";
    }
    detail::emit(o.out, csv.str(), out);
    return kOk;
  });
}

/// Heuristic regime label from the optimum: dense when OPT >= beta n^d / 8,
/// near-dense when OPT >= beta n^(d - 1/2) / 8, else sparse.
inline std::string density_label(const Rational& opt, const Rational& beta, std::size_t n, std::size_t d) {
  if (sgn(beta) == 0 || n == 0) return "sparse";
  const double scale = beta.get_d() / 8.0;
  const double dn = static_cast<double>(n);
  const double v = opt.get_d();
  if (v >= scale * std::pow(dn, static_cast<double>(d))) return "dense";
  if (v >= scale * std::pow(dn, static_cast<double>(d) - 0.5)) return "near-dense";
  return "sparse";
}

inline int cmd_verify(const VerifyOptions& o, std::ostream& out, std::ostream& err) {
  return detail::guarded(err, [&] {
    const Instance inst = load_instance(o.input);
    const Polynomial& p = inst.objective;
    const Rational beta = min_smoothness(p);
    out << "kind " << to_string(inst.kind) << "\n"
        << "n " << p.num_vars() << "\n"
        << "d " << p.degree() << "\n"
        << "beta " << to_string(beta) << "\n"
        << "monomials " << p.size() << "\n"
        << "tree_nodes " << decompose(p).size() << "\n"
        << "ceiling " << to_string(inst.ceiling) << "\n";
    if (p.num_vars() <= o.exact_cap) {
      const ExactResult x = exact_solve(inst, o.exact_cap);
      out << "opt " << to_string(x.value) << "\n"
          << "density " << density_label(x.value, beta, p.num_vars(), p.degree())
          << " (threshold beta*n^d/8 dense, beta*n^(d-1/2)/8 near-dense)\n";
    } else {
      out << "density unknown (n above the brute-force cap " << o.exact_cap << ")\n";
    }
    return kOk;
  });
}

}  // namespace laip::cli
