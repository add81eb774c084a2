#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "brownlab/brown_circular.hpp"
#include "brownlab/error.hpp"
#include "brownlab/rng.hpp"

namespace brownlab {

enum class EnsembleKind { Ginibre, Elliptic, HaarUnitary, DtUpper, Deterministic };

struct EnsembleSpec {
  EnsembleKind kind = EnsembleKind::Ginibre;
  std::size_t n = 0;
  double t = 1;
  cplx gamma = 0;
  std::uint64_t seed = 0;
  Eigen::MatrixXcd matrix;  // Deterministic only
};

inline std::optional<EnsembleKind> ensemble_from_string(const std::string& s) {
  if (s == "ginibre") return EnsembleKind::Ginibre;
  if (s == "elliptic") return EnsembleKind::Elliptic;
  if (s == "haar_unitary") return EnsembleKind::HaarUnitary;
  if (s == "dt_upper") return EnsembleKind::DtUpper;
  if (s == "deterministic") return EnsembleKind::Deterministic;
  return std::nullopt;
}

namespace detail {
// Stream ids keep ensembles with the same seed independent of each other.
inline CounterRng ensemble_rng(const EnsembleSpec& s, std::uint64_t part = 0) {
  return CounterRng(s.seed, 16 * static_cast<std::uint64_t>(s.kind) + part);
}

// Hermitian matrix with E|h_ij|^2 = var.
inline Eigen::MatrixXcd gue(std::size_t n, double var, const CounterRng& rng) {
  Eigen::MatrixXcd h(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    h(i, i) = std::sqrt(var) * rng.normal_pair(i * n + i).first;
    for (std::size_t j = i + 1; j < n; ++j) {
      h(i, j) = rng.complex_normal(i * n + j, var);
      h(j, i) = std::conj(h(i, j));
    }
  }
  return h;
}

inline Eigen::MatrixXcd ginibre(std::size_t n, double var, const CounterRng& rng) {
  Eigen::MatrixXcd g(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) g(i, j) = rng.complex_normal(i * n + j, var);
  return g;
}
}  // namespace detail

/// Draws one matrix. Entry (i, j) depends only on (seed, kind, i, j).
inline Eigen::MatrixXcd sample(const EnsembleSpec& s) {
  const std::size_t n = s.kind == EnsembleKind::Deterministic ? static_cast<std::size_t>(s.matrix.rows()) : s.n;
  if (n == 0) fail(ErrorKind::InvalidArgument, "ensemble size must be positive");
  const double nn = static_cast<double>(n);
  switch (s.kind) {
    case EnsembleKind::Ginibre:
      check_t(s.t);
      return detail::ginibre(n, s.t / nn, detail::ensemble_rng(s));
    case EnsembleKind::Elliptic: {
      check_t(s.t);
      const double g = std::abs(s.gamma);
      if (g > s.t + 1e-15) fail(ErrorKind::InvalidArgument, "|gamma| must not exceed t");
      const double t1 = (s.t + g) / 2, t2 = (s.t - g) / 2;
      const cplx rot = std::polar(1.0, std::arg(s.gamma) / 2);
      return rot * (detail::gue(n, t1 / nn, detail::ensemble_rng(s, 0)) +
                    cplx(0, 1) * detail::gue(n, t2 / nn, detail::ensemble_rng(s, 1)));
    }
    case EnsembleKind::HaarUnitary: {
      const Eigen::MatrixXcd g = detail::ginibre(n, 1.0, detail::ensemble_rng(s));
      Eigen::HouseholderQR<Eigen::MatrixXcd> qr(g);
      Eigen::MatrixXcd q = qr.householderQ();
      const Eigen::MatrixXcd r = qr.matrixQR().triangularView<Eigen::Upper>();
      for (std::size_t j = 0; j < n; ++j) {
        const double m = std::abs(r(j, j));
        if (m > 0) q.col(j) *= r(j, j) / m;
      }
      return q;
    }
    case EnsembleKind::DtUpper: {
      const auto rng = detail::ensemble_rng(s);
      Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(n, n);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) a(i, j) = rng.complex_normal(i * n + j, 1 / nn);
      return a;
    }
    case EnsembleKind::Deterministic:
      return s.matrix;
  }
  fail(ErrorKind::InvalidArgument, "unknown ensemble");
}

/// Diagonal similarity by powers of two so row and column norms match.
inline Eigen::MatrixXcd balance(Eigen::MatrixXcd a) {
  const long n = a.rows();
  for (bool converged = false; !converged;) {
    converged = true;
    for (long i = 0; i < n; ++i) {
      double c = 0, r = 0;
      for (long j = 0; j < n; ++j)
        if (j != i) {
          c += std::abs(a(j, i).real()) + std::abs(a(j, i).imag());
          r += std::abs(a(i, j).real()) + std::abs(a(i, j).imag());
        }
      if (c == 0 || r == 0) continue;
      double f = 1;
      const double s = c + r;
      while (c < r / 2) {
        c *= 2;
        r /= 2;
        f *= 2;
      }
      while (c >= r * 2) {
        c /= 2;
        r *= 2;
        f /= 2;
      }
      if (c + r < 0.95 * s && f != 1) {
        converged = false;
        a.row(i) /= f;
        a.col(i) *= f;
      }
    }
  }
  return a;
}

/// Eigenvalues by balancing and complex Schur (Hessenberg + shifted QR, 30n
/// sweeps at most), verified by inverse iteration on ten eigenpairs.
inline std::vector<cplx> eigenvalues(const Eigen::MatrixXcd& a0) {
  const long n = a0.rows();
  if (n == 0 || a0.cols() != n) fail(ErrorKind::InvalidArgument, "eigenvalues need a square matrix");
  const Eigen::MatrixXcd a = balance(a0);
  Eigen::ComplexSchur<Eigen::MatrixXcd> schur(n);
  schur.setMaxIterations(30 * n);
  schur.compute(a, true);
  if (schur.info() != Eigen::Success) fail(ErrorKind::QrStagnation, "shifted QR did not converge");
  const Eigen::MatrixXcd& T = schur.matrixT();
  const Eigen::MatrixXcd& U = schur.matrixU();
  const double anorm = std::max(a.norm(), 1e-300);

  const long checks = std::min<long>(10, n);
  for (long c = 0; c < checks; ++c) {
    const long k = checks == 1 ? 0 : c * (n - 1) / (checks - 1);
    const cplx mu = T(k, k) + cplx(1e-10 * anorm, 0);
    Eigen::MatrixXcd shifted = T;
    shifted.diagonal().array() -= mu;
    Eigen::VectorXcd y = Eigen::VectorXcd::Ones(n);
    for (int it = 0; it < 3; ++it) {
      y = shifted.triangularView<Eigen::Upper>().solve(y);
      y /= y.norm();
    }
    const Eigen::VectorXcd x = U * y;
    const double res = (a * x - T(k, k) * x).norm();
    if (!(res <= 1e-8 * anorm)) fail(ErrorKind::QrStagnation, "eigenpair residual check failed");
  }
  std::vector<cplx> ev(static_cast<std::size_t>(n));
  for (long i = 0; i < n; ++i) ev[static_cast<std::size_t>(i)] = T(i, i);
  return ev;
}

struct EsdReport {
  std::size_t n = 0;
  int bins = 0;
  double binned_tv = kNaN;
  double radial_ks = kNaN;  // NaN when no radial CDF was supplied
  double xmin = 0, xmax = 0, ymin = 0, ymax = 0;
};

/// Default bins per axis: enough samples per occupied bin to make the
/// statistic meaningful, capped at 50.
inline int auto_bins(std::size_t n) {
  return std::clamp(static_cast<int>(std::floor(std::sqrt(static_cast<double>(n) / 5))), 4, 50);
}

/// Total variation between the empirical eigenvalue histogram and the grid
/// density, on a bins x bins partition of the union bounding box.
inline double binned_tv(const std::vector<cplx>& eigs, const DensityGrid& theory, int bins, EsdReport* box = nullptr) {
  if (eigs.empty()) fail(ErrorKind::InvalidArgument, "no eigenvalues");
  double x0 = kInf, x1 = -kInf, y0 = kInf, y1 = -kInf;
  for (const auto& z : eigs) {
    x0 = std::min(x0, z.real());
    x1 = std::max(x1, z.real());
    y0 = std::min(y0, z.imag());
    y1 = std::max(y1, z.imag());
  }
  const auto& g = theory.grid;
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i)
      if (theory.inside(i, j)) {
        x0 = std::min(x0, g.x(i) - g.dx() / 2);
        x1 = std::max(x1, g.x(i) + g.dx() / 2);
        y0 = std::min(y0, g.y(j) - g.dy() / 2);
        y1 = std::max(y1, g.y(j) + g.dy() / 2);
      }
  const double pad = 1e-9 * (1 + std::max(x1 - x0, y1 - y0));
  x0 -= pad, x1 += pad, y0 -= pad, y1 += pad;
  auto bin = [&](double x, double y) {
    const int bx = std::clamp(static_cast<int>((x - x0) / (x1 - x0) * bins), 0, bins - 1);
    const int by = std::clamp(static_cast<int>((y - y0) / (y1 - y0) * bins), 0, bins - 1);
    return static_cast<std::size_t>(by) * bins + bx;
  };
  std::vector<double> p(static_cast<std::size_t>(bins) * bins, 0.0), q(p.size(), 0.0);
  for (const auto& z : eigs) p[bin(z.real(), z.imag())] += 1.0 / static_cast<double>(eigs.size());
  double tot = 0;
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i)
      if (theory.inside(i, j)) {
        q[bin(g.x(i), g.y(j))] += theory.at(i, j);
        tot += theory.at(i, j);
      }
  if (!(tot > 0)) fail(ErrorKind::InvalidArgument, "theory grid has no mass");
  double tv = 0;
  for (std::size_t k = 0; k < p.size(); ++k) tv += std::abs(p[k] - q[k] / tot);
  if (box) {
    box->xmin = x0, box->xmax = x1, box->ymin = y0, box->ymax = y1;
  }
  return tv / 2;
}

/// Kolmogorov-Smirnov distance between the law of |eigenvalue| and cdf.
inline double radial_ks(const std::vector<cplx>& eigs, const std::function<double(double)>& cdf) {
  std::vector<double> r;
  for (const auto& z : eigs) r.push_back(std::abs(z));
  std::sort(r.begin(), r.end());
  const double n = static_cast<double>(r.size());
  double ks = 0;
  for (std::size_t i = 0; i < r.size(); ++i) {
    const double F = cdf(r[i]);
    ks = std::max({ks, std::abs(F - static_cast<double>(i) / n), std::abs(F - static_cast<double>(i + 1) / n)});
  }
  return ks;
}

inline EsdReport esd_compare(const std::vector<cplx>& eigs, const DensityGrid& theory,
                             const std::function<double(double)>& radial_cdf = {}, int bins = 0) {
  EsdReport rep;
  rep.n = eigs.size();
  rep.bins = bins > 0 ? bins : auto_bins(eigs.size());
  rep.binned_tv = binned_tv(eigs, theory, rep.bins, &rep);
  if (radial_cdf) rep.radial_ks = radial_ks(eigs, radial_cdf);
  return rep;
}

}  // namespace brownlab
