// Biane's maps for x0 with law 0.4 d(-2) + 0.1 d(-0.8) + 0.5 d(1) at t = 1:
// the boundary profile v_t, and where the elliptic image of each vertical
// segment lands for gamma = 0.25 + 0.25i.

#include <cstdio>

#include "brownlab/brown_circular.hpp"
#include "brownlab/selfadjoint.hpp"

using namespace brownlab;

int main() {
  const BianeMaps m(Measure1D::from_atoms({{-2.0, 0.4}, {-0.8, 0.1}, {1.0, 0.5}}), 1.0);
  const cplx gamma(0.25, 0.25);
  std::printf("%8s %10s %10s %10s %12s\n", "a", "v_t(a)", "psi_t(a)", "density", "det J");
  for (double a = -3.5; a <= 2.5 + 1e-9; a += 0.25) {
    if (!m.in_ut(a)) {
      std::printf("%8.3f %10s\n", a, "-");
      continue;
    }
    std::printf("%8.3f %10.6f %10.6f %10.6f %12.6f\n", a, m.v(a), m.psi(a), density_circular(m.op(), a, 1.0),
                det_jac_sa(m, gamma, a));
  }
  std::printf("density of mu + semicircle at 0.3: %.6f\n", semicircle_add_density(m, 0.3));
}
