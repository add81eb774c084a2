// Haar unitary plus circular: the single-ring annulus, its radial CDF, and
// the ellipses that the pushforward map makes of its circles.

#include <cstdio>

#include "brownlab/special_operators.hpp"

using namespace brownlab;

int main() {
  const double t = 0.5;
  const cplx gamma(0.4, 0);
  std::printf("annulus %.6f < |z| < %.6f\n", haar_inner_radius(t), haar_outer_radius(t));
  std::printf("%8s %10s %10s %10s %10s\n", "r", "CDF", "generic", "major", "minor");
  const double lo = haar_inner_radius(t), hi = haar_outer_radius(t);
  for (int k = 0; k <= 8; ++k) {
    const double r = lo + (hi - lo) * k / 8;
    const auto ax = phi_rdiag(HaarUnitary{}, t, r, gamma);
    const double generic = r * p_lambda(ShiftedOperator(HaarUnitary{}, r), t).real();
    std::printf("%8.4f %10.6f %10.6f %10.6f %10.6f\n", r, haar_cdf(r, t), generic, ax.major, ax.minor);
  }
  std::printf("DT + c_1: disk radius %.6f, density %.6f\n", dt_radius(1.0), dt_density(1.0));
}
