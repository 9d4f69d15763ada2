// Pairs (laplacian - m^2) Phi_eps with a Gaussian test function for a few
// widths and prints how fast the result approaches -4 pi psi(0).

#include <cstdio>
#include <numbers>

#include "kgdist/verifier.hpp"

int main() {
  const kgdist::FieldParams p(1.0);
  const auto psi = kgdist::gaussian_test_function(1.0);
  std::printf("%-8s %-20s %-12s\n", "eps", "pairing", "defect");
  for (double eps : {0.1, 0.03, 0.01, 0.003, 0.001}) {
    const auto res = kgdist::residual_pairing(p, kgdist::Mollification(eps), psi);
    std::printf("%-8g %-20.14f %-12.4e\n", eps, res.value, res.value + 4.0 * std::numbers::pi);
  }
}
