#include <CLI11.hpp>

#include "commands.hpp"

int main(int argc, char** argv) {
  using namespace laip::cli;
  CLI::App app{"Prediction-guided relax-and-round for smooth polynomial integer programs"};
  app.require_subcommand(1);

  GenOptions gen;
  auto* g = app.add_subcommand("gen", "Generate a random instance");
  g->add_option("kind", gen.kind, "maxcut | maxksat | maxkcsp")->required();
  g->add_option("--n", gen.n, "Variables or vertices");
  g->add_option("--p", gen.p, "Edge probability (maxcut)");
  g->add_option("--m", gen.m, "Clauses or constraints");
  g->add_option("--k", gen.k, "Clause width or constraint arity");
  g->add_option("--seed", gen.seed);
  g->add_option("-o,--out", gen.out, "Output file (default stdout)");

  SolveOptions solve;
  solve.workers = env_workers();
  bool no_timing = false;
  auto* s = app.add_subcommand("solve", "Run the solve loop on one instance");
  s->add_option("input", solve.input, "Instance file")->required();
  s->add_option("--prediction", solve.prediction, "exact | perturb:E | prediction file");
  s->add_option("--strategy", solve.strategy, "greedy | randomized");
  s->add_option("--grid", solve.grid, "full | stride:S | comma list");
  s->add_option("--seed", solve.seed);
  s->add_option("--k", solve.k, "Tail exponent for reported rounding bounds");
  s->add_option("--json", solve.json_out, "Write the full report as JSON");
  s->add_option("--csv", solve.csv_out, "Write per-eps rows as CSV");
  s->add_option("--workers", solve.workers, "Threads (default LAIP_WORKERS or 1)");
  s->add_option("--exact-cap", solve.exact_cap, "Largest n for brute force");
  s->add_flag("--no-timing", no_timing, "Leave wall_ms at zero for byte-stable output");

  SweepOptions sweep;
  sweep.workers = env_workers();
  auto* w = app.add_subcommand("sweep", "Achieved value against the guarantee over perturbed predictions");
  w->add_option("inputs", sweep.inputs, "Instance files")->required();
  w->add_option("--eps", sweep.eps, "full | stride:S | comma list");
  w->add_option("--trials", sweep.trials);
  w->add_option("--seed", sweep.seed);
  w->add_option("--strategy", sweep.strategy, "greedy | randomized");
  w->add_option("-o,--out", sweep.out, "Output CSV (default stdout)");
  w->add_option("--workers", sweep.workers, "Threads (default LAIP_WORKERS or 1)");
  w->add_option("--exact-cap", sweep.exact_cap, "Largest n for brute force");

  VerifyOptions verify;
  auto* v = app.add_subcommand("verify", "Print smoothness and structure diagnostics");
  v->add_option("input", verify.input, "Instance file")->required();
  v->add_option("--exact-cap", verify.exact_cap, "Largest n for the brute-force optimum");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kParseError;
  }
  solve.timing = !no_timing;

  if (*g) return cmd_gen(gen, std::cout, std::cerr);
  if (*s) return cmd_solve(solve, std::cout, std::cerr);
  if (*w) return cmd_sweep(sweep, std::cout, std::cerr);
  return cmd_verify(verify, std::cout, std::cerr);
}
