// Computes the growth criterion for the three named direction families and
// prints the verdict trichotomy: the square net and the real kappa family
// keep the fitted base flat, the theta family blows through it.

#include <cstdio>

#include "holorecon/divided.hpp"
#include "holorecon/sequence.hpp"

using namespace holorecon;

int main() {
  struct Case {
    const char* name;
    DirectionSequence seq;
    int P;
  };
  Case cases[] = {
      {"square-net", gen_square_net(41), 40},
      {"kappa", gen_kappa(41), 40},
      {"theta", gen_theta(25), 24},
  };
  for (auto& c : cases) {
    auto rep = criterion_matrix(c.seq, c.P, 8);
    std::printf("%-12s verdict %-12s R_hat %-10.4g root-growth %.3f\n", c.name,
                to_string(rep.verdict), rep.r_hat, rep.root_growth_half);
  }
  return 0;
}
