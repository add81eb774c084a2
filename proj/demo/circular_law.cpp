// Brown measure of c_t versus the eigenvalues of a Ginibre matrix.

#include <cstdio>

#include "brownlab/brown_circular.hpp"
#include "brownlab/randmat.hpp"

using namespace brownlab;

int main() {
  const double t = 1.0;
  const auto theory = density_grid(Zero{}, t, {-1.3, 1.3, -1.3, 1.3, 130, 130});
  std::printf("density at 0: %.12f (1/pi = %.12f)\n", density_circular(Zero{}, 0.0, t), 1 / kPi);
  std::printf("grid mass:    %.6f\n", theory.mass);

  for (std::size_t n : {128, 256, 512}) {
    const auto eigs = eigenvalues(sample({EnsembleKind::Ginibre, n, t, 0, 1, {}}));
    const auto rep = esd_compare(eigs, theory, [t](double r) { return std::min(1.0, r * r / t); });
    std::printf("n = %3zu  radial KS %.4f  binned TV %.4f (%d bins)\n", n, rep.radial_ks, rep.binned_tv, rep.bins);
  }
}
