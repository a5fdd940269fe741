// Reconstructs exp(z1 + z2) from its restrictions to the lines given by the
// kappa family and prints how the sup error over a small polydisc shrinks
// with the number of lines.

#include <cstdio>

#include "holorecon/reconstruction.hpp"
#include "holorecon/sequence.hpp"

using namespace holorecon;

int main() {
  auto f = exp_sum(1, 1);
  auto seq = gen_kappa(24);
  CompactGrid K{0.5, 0.5, 9};
  auto curve = convergence_experiment(f, seq, {2, 4, 8, 16, 24}, K);
  std::printf("%-6s %-6s %-14s %-14s\n", "N", "M", "sup_error", "mean_error");
  for (const auto& cp : curve)
    std::printf("%-6d %-6d %-14.6e %-14.6e\n", cp.N, cp.M, cp.sup_error, cp.mean_error);
  std::printf("classification: %s\n",
              fails_to_decrease(curve) ? "NOT-DECREASING" : "DECREASING");
  return 0;
}
