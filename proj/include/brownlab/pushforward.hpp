#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "brownlab/brown_circular.hpp"
#include "brownlab/error.hpp"
#include "brownlab/parallel.hpp"
#include "brownlab/rng.hpp"
#include "brownlab/selfadjoint.hpp"
#include "brownlab/spectral_core.hpp"
#include "brownlab/subordination.hpp"

namespace brownlab {

struct EllipticParams {
  double t = 1;
  cplx gamma = 0;

  EllipticParams() = default;
  EllipticParams(double t_, cplx g) : t(t_), gamma(g) { validate(); }
  void validate() const {
    check_t(t);
    if (std::abs(gamma) > t + 1e-15) fail(ErrorKind::InvalidArgument, "|gamma| must not exceed t");
  }
};

inline constexpr double kJacobianFloor = 1e-10;

/// p_lambda at w0: phi[(lambda - x0)^* ((lambda - x0)(lambda - x0)^* + w0^2)^-1].
inline cplx p_lambda(const ShiftedOperator& x, double t) { return x.functionals(solve_w0(x, t).w).f2; }

/// Phi(lambda) = lambda + gamma p_lambda, from Brown(x0 + c_t) to Brown(x0 + s_{t,gamma}).
inline cplx phi(const OperatorModel& op, cplx lambda, const EllipticParams& e) {
  const ShiftedOperator x(op, lambda);
  return lambda + e.gamma * p_lambda(x, e.t);
}

/// Regularised map using w(eps) instead of w0.
inline cplx phi_eps(const OperatorModel& op, cplx lambda, const EllipticParams& e, double eps) {
  const ShiftedOperator x(op, lambda);
  return lambda + e.gamma * x.functionals(solve_w(x, e.t, eps).w).f2;
}

struct Jacobian {
  Eigen::Matrix2d J = Eigen::Matrix2d::Zero();  // d(Re, Im) / d(x, y)
  double det = 0;
  bool closed_form = false;
};

enum class JacobianMethod { Auto, FiniteDifference };

namespace detail {
// one_sided: fall back to forward/backward differences when the central
// stencil straddles the boundary of Xi_t.
inline Jacobian jacobian_fd(const OperatorModel& op, cplx lambda, const EllipticParams& e, bool one_sided) {
  const double h = 1e-5 * std::max(1.0, std::abs(lambda));
  const bool in0 = in_xi_t(op, lambda, e.t);
  Jacobian r;
  const cplx dirs[2] = {cplx(1, 0), cplx(0, 1)};
  for (int k = 0; k < 2; ++k) {
    const cplx zp = lambda + h * dirs[k], zm = lambda - h * dirs[k];
    const bool inp = in_xi_t(op, zp, e.t), inm = in_xi_t(op, zm, e.t);
    cplx d;
    if (inp == in0 && inm == in0) {
      d = (phi(op, zp, e) - phi(op, zm, e)) / (2 * h);
    } else if (!one_sided) {
      fail(ErrorKind::StencilOutsideDomain, "difference stencil crosses the boundary of Xi_t");
    } else if (inp == in0) {
      d = (phi(op, zp, e) - phi(op, lambda, e)) / h;
    } else {
      d = (phi(op, lambda, e) - phi(op, zm, e)) / h;
    }
    r.J(0, k) = d.real();
    r.J(1, k) = d.imag();
  }
  r.det = r.J.determinant();
  return r;
}

inline Jacobian jacobian_selfadjoint(const OperatorModel& op, cplx lambda, const EllipticParams& e) {
  const BianeMaps m(std::get<SelfAdjoint>(op).mu, e.t);
  Jacobian r;
  r.closed_form = true;
  const ShiftedOperator x(op, lambda);
  if (in_xi_t(x, e.t)) {
    const cplx tau = e.t - e.gamma;
    const double hp = m.h_prime(lambda.real());
    r.J << 1 + e.gamma.real() * hp / e.t, -tau.imag() / e.t, e.gamma.imag() * hp / e.t, tau.real() / e.t;
  } else {
    // Outside Xi_t the map is holomorphic: Phi' = 1 - gamma \int (lambda - u)^-2 dmu.
    auto sq = [&](double u) { return 1.0 / ((lambda - u) * (lambda - u)); };
    cplx d2 = 0;
    for (const auto& at : m.mu().atoms()) d2 += at.w * sq(at.x);
    d2 += cplx(m.mu().integrate_pieces([&](double u) { return sq(u).real(); }, lambda.real()),
               m.mu().integrate_pieces([&](double u) { return sq(u).imag(); }, lambda.real()));
    const cplx d = 1.0 - e.gamma * d2;
    r.J << d.real(), -d.imag(), d.imag(), d.real();
  }
  r.det = r.J.determinant();
  return r;
}
}  // namespace detail

/// Jacobian of Phi as a map of R^2. Selfadjoint x0 uses the closed form.
inline Jacobian jacobian_phi(const OperatorModel& op, cplx lambda, const EllipticParams& e,
                             JacobianMethod method = JacobianMethod::Auto) {
  if (method == JacobianMethod::Auto && std::holds_alternative<SelfAdjoint>(op))
    return detail::jacobian_selfadjoint(op, lambda, e);
  return detail::jacobian_fd(op, lambda, e, false);
}

struct EllipticLogDet {
  cplx z;
  double log_det = 0;
};

/// log Delta(x0 + s_{t,gamma} - z) at z = Phi(lambda).
inline EllipticLogDet log_fk_det_elliptic(const OperatorModel& op, cplx lambda, const EllipticParams& e) {
  const auto jac = jacobian_phi(op, lambda, e);
  if (std::abs(jac.det) < kJacobianFloor) fail(ErrorKind::SingularPushforward, "Jacobian of Phi vanishes");
  const ShiftedOperator x(op, lambda);
  const cplx p = p_lambda(x, e.t);
  return {lambda + e.gamma * p, log_fk_det_circular(x, e.t) + 0.5 * std::real(e.gamma * p * p)};
}

struct PushforwardPoint {
  cplx lambda, z;
  double jac = 0, src = 0, dst = 0;
};

struct PushforwardField {
  std::vector<PushforwardPoint> points;
  double source_mass = 0;
  double transported_mass = 0;  // sum dst |jac| cell_area
  std::size_t singular_cells = 0;
  bool needs_point_cloud() const { return singular_cells > 0; }
};

/// Transports a circular-case density grid through Phi: dst = src / |det J|.
inline PushforwardField pushforward_density(const OperatorModel& op, const EllipticParams& e, const DensityGrid& src,
                                            unsigned threads = 1) {
  e.validate();
  std::vector<std::size_t> idx;
  for (std::size_t k = 0; k < src.values.size(); ++k)
    if (src.mask[k]) idx.push_back(k);
  PushforwardField f;
  f.points.resize(idx.size());
  parallel_for(idx.size(), threads, [&](std::size_t n) {
    const std::size_t k = idx[n];
    const int i = static_cast<int>(k % src.grid.nx), j = static_cast<int>(k / src.grid.nx);
    auto& p = f.points[n];
    p.lambda = src.grid.point(i, j);
    p.z = phi(op, p.lambda, e);
    const auto jac = std::holds_alternative<SelfAdjoint>(op) ? detail::jacobian_selfadjoint(op, p.lambda, e)
                                                             : detail::jacobian_fd(op, p.lambda, e, true);
    p.jac = jac.det;
    p.src = src.values[k];
    p.dst = std::abs(p.jac) < kJacobianFloor ? kNaN : p.src / std::abs(p.jac);
  });
  for (const auto& p : f.points) {
    f.source_mass += p.src * src.cell_area;
    if (std::isnan(p.dst)) {
      ++f.singular_cells;
    } else {
      f.transported_mass += p.dst * std::abs(p.jac) * src.cell_area;
    }
  }
  return f;
}

struct PointCloud {
  std::vector<cplx> source;
  std::vector<cplx> image;
  double acceptance_rate = 0;
};

inline constexpr double kEnvelopeFactor = 1.05;
inline constexpr double kMinAcceptance = 1e-4;

/// Rejection-samples Brown(x0 + c_t) with a uniform proposal over `grid`
/// (envelope 1.05 x max grid density) and maps each sample through Phi.
/// Sample i uses its own counter stream, so output is thread-count independent.
inline PointCloud pushforward_pointcloud(const OperatorModel& op, const EllipticParams& e, const DensityGrid& envelope,
                                         std::size_t n, std::uint64_t seed, unsigned threads = 1) {
  e.validate();
  double mx = 0;
  for (std::size_t k = 0; k < envelope.values.size(); ++k)
    if (envelope.mask[k]) mx = std::max(mx, envelope.values[k]);
  if (!(mx > 0)) fail(ErrorKind::EnvelopeFailure, "envelope grid has no mass");
  const double M = kEnvelopeFactor * mx;
  const auto& g = envelope.grid;
  const std::uint64_t max_attempts = static_cast<std::uint64_t>(1 / kMinAcceptance);
  PointCloud pc;
  pc.source.resize(n);
  pc.image.resize(n);
  std::vector<std::uint64_t> attempts(n);
  parallel_for(n, threads, [&](std::size_t i) {
    const CounterRng rng(seed, i);
    for (std::uint64_t k = 0;; ++k) {
      if (k >= max_attempts) fail(ErrorKind::EnvelopeFailure, "acceptance rate below 1e-4");
      const cplx lambda(g.xmin + (g.xmax - g.xmin) * rng.uniform(3 * k), g.ymin + (g.ymax - g.ymin) * rng.uniform(3 * k + 1));
      const ShiftedOperator x(op, lambda);
      const auto s = solve_w0(x, e.t);
      if (!s.in_xi) continue;
      const auto f = x.functionals(s.w);
      const double dens = (std::norm(f.f5) / f.f3 + s.w * s.w * f.f4) / kPi;
      if (rng.uniform(3 * k + 2) * M < dens) {
        pc.source[i] = lambda;
        pc.image[i] = lambda + e.gamma * f.f2;
        attempts[i] = k + 1;
        return;
      }
    }
  });
  std::uint64_t total = 0;
  for (auto a : attempts) total += a;
  pc.acceptance_rate = n ? static_cast<double>(n) / static_cast<double>(total) : 1.0;
  if (pc.acceptance_rate < kMinAcceptance) fail(ErrorKind::EnvelopeFailure, "acceptance rate below 1e-4");
  return pc;
}

}  // namespace brownlab
