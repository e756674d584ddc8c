// Solves a small random MAX-CUT instance from a noisy prediction and prints
// the per-eps rows next to the brute-force optimum.

#include <iostream>

#include "laip/laip.hpp"

int main() {
  using namespace laip;
  const Instance inst = to_instance(gen_gnp(14, 0.4, 2024));
  const ExactResult opt = exact_solve(inst);
  const Prediction pred = perturb(opt.x, 3, 7);

  SolveConfig config;
  config.grid = EpsGrid::every(2);
  config.record_timing = false;
  const SolveReport r = solve(inst, pred, config);

  std::cout << "n " << r.n << "  beta " << to_string(r.beta) << "  OPT " << to_string(opt.value) << "\n";
  std::cout << "prediction value " << to_string(inst.objective.evaluate(std::span<const std::uint8_t>(pred.x_hat)))
            << " (3 flips from the optimum)\n";
  std::cout << to_csv(r);
  std::cout << "best " << to_string(r.best_value) << " from " << r.best_provenance << "\n";
  std::cout << "guarantee at eps=3: " << to_decimal(guarantee_bound(inst, 3, config), 6) << "\n";
  return r.best_value >= guarantee_bound(inst, 3, config) ? 0 : 1;
}
