#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "brownlab/error.hpp"
#include "brownlab/parallel.hpp"
#include "brownlab/spectral_core.hpp"
#include "brownlab/subordination.hpp"

namespace brownlab {

/// Uniform grid of nx * ny cells; samples sit at cell centres.
struct GridSpec {
  double xmin = -1, xmax = 1, ymin = -1, ymax = 1;
  int nx = 1, ny = 1;

  double dx() const { return (xmax - xmin) / nx; }
  double dy() const { return (ymax - ymin) / ny; }
  double x(int i) const { return xmin + (i + 0.5) * dx(); }
  double y(int j) const { return ymin + (j + 0.5) * dy(); }
  cplx point(int i, int j) const { return {x(i), y(j)}; }
  std::size_t size() const { return static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny); }

  void validate() const {
    if (nx < 1 || ny < 1 || !(xmax > xmin) || !(ymax > ymin))
      fail(ErrorKind::InvalidArgument, "grid needs nx, ny >= 1 and non-empty bounds");
  }
};

/// Row-major (index j * nx + i) density samples; NaN outside Xi_t.
struct DensityGrid {
  GridSpec grid;
  std::vector<double> values;
  std::vector<std::uint8_t> mask;
  double cell_area = 0;
  double mass = 0;

  double at(int i, int j) const { return values[static_cast<std::size_t>(j) * grid.nx + i]; }
  bool inside(int i, int j) const { return mask[static_cast<std::size_t>(j) * grid.nx + i] != 0; }
};

/// log Delta(x0 + c_t - lambda).
inline double log_fk_det_circular(const ShiftedOperator& x, double t) {
  const auto s = solve_w0(x, t);
  if (!s.in_xi) return 0.5 * x.log_det(0.0);
  return 0.5 * (x.log_det(s.w) - s.w * s.w / t);
}
inline double log_fk_det_circular(const OperatorModel& op, cplx lambda, double t) {
  return log_fk_det_circular(ShiftedOperator(op, lambda), t);
}

/// Density from the positive-sum formula (|f5|^2/f3 + w0^2 f4) / pi; 0 off Xi_t.
inline double density_circular(const ShiftedOperator& x, double t) {
  const auto s = solve_w0(x, t);
  if (!s.in_xi) return 0.0;
  const auto f = x.functionals(s.w);
  return (std::norm(f.f5) / f.f3 + s.w * s.w * f.f4) / kPi;
}
inline double density_circular(const OperatorModel& op, cplx lambda, double t) {
  return density_circular(ShiftedOperator(op, lambda), t);
}

/// Same density via (1/pi)(1/t - d/d(conj lambda) phi[x0^* h^-1]), with the
/// derivative taken by central differences and w0 re-solved at each node.
inline double density_circular_fd(const OperatorModel& op, cplx lambda, double t) {
  check_t(t);
  const double h = 1e-5 * std::max(1.0, std::abs(lambda));
  auto q = [&](cplx z) {
    const ShiftedOperator x(op, z);
    const auto s = solve_w0(x, t);
    if (!s.in_xi) fail(ErrorKind::StencilOutsideDomain, "difference stencil leaves Xi_t");
    const auto f = x.functionals(s.w);
    return std::conj(z) * f.f1 - f.f2;
  };
  const cplx dx = (q(lambda + h) - q(lambda - h)) / (2 * h);
  const cplx dy = (q(lambda + cplx(0, h)) - q(lambda - cplx(0, h))) / (2 * h);
  const cplx dbar = 0.5 * (dx + cplx(0, 1) * dy);
  return (1 / t - dbar.real()) / kPi;
}

inline DensityGrid density_grid(const OperatorModel& op, double t, const GridSpec& grid, unsigned threads = 1) {
  check_t(t);
  grid.validate();
  DensityGrid g;
  g.grid = grid;
  g.values.assign(grid.size(), kNaN);
  g.mask.assign(grid.size(), 0);
  g.cell_area = grid.dx() * grid.dy();
  parallel_for(grid.size(), threads, [&](std::size_t k) {
    const int i = static_cast<int>(k % grid.nx), j = static_cast<int>(k / grid.nx);
    const ShiftedOperator x(op, grid.point(i, j));
    const auto s = solve_w0(x, t);
    if (!s.in_xi) return;
    const auto f = x.functionals(s.w);
    g.values[k] = (std::norm(f.f5) / f.f3 + s.w * s.w * f.f4) / kPi;
    g.mask[k] = 1;
  });
  double m = 0;
  for (std::size_t k = 0; k < grid.size(); ++k)
    if (g.mask[k]) m += g.values[k];
  g.mass = m * g.cell_area;
  return g;
}

}  // namespace brownlab
