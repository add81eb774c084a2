#pragma once

#include <cmath>
#include <cstdio>
#include <optional>
#include <string>

#include "brownlab/error.hpp"
#include "brownlab/measure.hpp"
#include "brownlab/numerics.hpp"
#include "brownlab/spectral_core.hpp"

namespace brownlab {

struct SubordinationResult {
  double w = 0;
  double residual = 0;
  int iterations = 0;
  bool in_xi = false;
};

inline void check_t(double t) {
  if (!(t > 0) || !std::isfinite(t)) fail(ErrorKind::InvalidArgument, "t must be positive");
}

/// 1 / \int u^-2 d mu_{|x0 - lambda|}; 0 when the integral diverges.
inline double lambda1_squared(const ShiftedOperator& x) {
  const auto f = x.f1_at_zero();
  return f ? 1 / *f : 0.0;
}
inline double lambda1_squared(const OperatorModel& op, cplx lambda) {
  return lambda1_squared(ShiftedOperator(op, lambda));
}

/// Strict inequality \int u^-2 > 1/t; a divergent integral counts as inside.
inline bool in_xi_t(const ShiftedOperator& x, double t) {
  check_t(t);
  const auto f = x.f1_at_zero();
  return !f || *f > 1 / t;
}
inline bool in_xi_t(const OperatorModel& op, cplx lambda, double t) { return in_xi_t(ShiftedOperator(op, lambda), t); }

namespace detail {
inline void check_residual(double res, double scale, const char* what) {
  if (!(res <= 1e-9 * std::max(1.0, scale))) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", res);
    fail(ErrorKind::NonConvergence, std::string(what) + " residual " + buf);
  }
}
}  // namespace detail

/// Unique root w > eps of (w - eps) / (w f1(w)) = t. Solved in d = w - eps so
/// that tiny offsets at large |lambda| keep full relative precision.
inline SubordinationResult solve_w(const ShiftedOperator& x, double t, double eps) {
  check_t(t);
  if (!(eps > 0)) fail(ErrorKind::InvalidArgument, "eps must be positive; use solve_w0 for eps = 0");
  auto K = [&](double d) {
    const double s = eps + d;
    return d / (s * x.f1(s)) - t;
  };
  auto dK = [&](double d) {
    const double s = eps + d;
    const auto [f1, f3] = x.f1_f3(s);
    const double h = s * f1, dh = f1 - 2 * s * s * f3;
    return (h - d * dh) / (h * h);
  };
  double hi = std::sqrt(t) + 1;
  for (int i = 0; K(hi) <= 0; ++i, hi *= 2)
    if (i > 200) fail(ErrorKind::BracketFailure, "no upper bracket for w(eps)");
  RootOptions opt;
  opt.residual_tol = 1e-13 * std::max(1.0, t);
  const auto r = increasing_root(K, dK, 0.0, hi, opt);
  detail::check_residual(r.residual, t, "solve_w");
  return {eps + r.x, r.residual, r.iterations, in_xi_t(x, t)};
}
inline SubordinationResult solve_w(const OperatorModel& op, cplx lambda, double t, double eps) {
  return solve_w(ShiftedOperator(op, lambda), t, eps);
}

/// w0 = lim_{eps -> 0} w(eps): the root of f1(w) = 1/t inside Xi_t, 0 outside.
inline SubordinationResult solve_w0(const ShiftedOperator& x, double t) {
  check_t(t);
  if (!in_xi_t(x, t)) return {0.0, 0.0, 0, false};
  auto F = [&](double w) { return w == 0 ? -t : 1 / x.f1(w) - t; };
  auto dF = [&](double w) {
    const auto [f1, f3] = x.f1_f3(w);
    return 2 * w * f3 / (f1 * f1);
  };
  double hi = std::sqrt(t) + 1;
  for (int i = 0; F(hi) <= 0; ++i, hi *= 2)
    if (i > 200) fail(ErrorKind::BracketFailure, "no upper bracket for w0");
  RootOptions opt;
  opt.residual_tol = 1e-14 * t;
  const auto r = increasing_root(F, dF, 0.0, hi, opt);
  const double res = r.x > 0 ? std::abs(x.f1(r.x) - 1 / t) : 0.0;
  detail::check_residual(res, 1 / t, "solve_w0");
  return {r.x, res, r.iterations, true};
}
inline SubordinationResult solve_w0(const OperatorModel& op, cplx lambda, double t) {
  return solve_w0(ShiftedOperator(op, lambda), t);
}

/// Cauchy transform of the semicircle of variance t, branch with G ~ 1/z.
inline cplx semicircle_cauchy(cplx z, double t) {
  const cplx sq = std::sqrt(z * z - 4 * t);
  const cplx g1 = (z - sq) / (2 * t), g2 = (z + sq) / (2 * t);
  if (z.imag() > 0) return g1.imag() < 0 ? g1 : g2;
  if (z.imag() < 0) return g1.imag() > 0 ? g1 : g2;
  return std::abs(g1) < std::abs(g2) ? g1 : g2;
}

/// Subordination function omega1(z) of mu1 boxplus semicircle(t), from the
/// fixed point omega = z + H2(z + H1(omega)).
inline cplx scalar_omega1(const Measure1D& mu1, double t, cplx z) {
  check_t(t);
  if (!(z.imag() > 0)) fail(ErrorKind::InvalidArgument, "scalar_omega1 needs Im z > 0");
  auto H1 = [&](cplx w) { return 1.0 / cauchy_transform(mu1, w) - w; };
  auto H2 = [&](cplx w) { return -t * semicircle_cauchy(w, t); };
  cplx w = z;
  double last_sign = 0;
  int flips = 0;
  for (int it = 0; it < 100000; ++it) {
    const cplx next = z + H2(z + H1(w));
    cplx step = next - w;
    const double sgn = step.real() > 0 ? 1 : (step.real() < 0 ? -1 : 0);
    if (sgn != 0 && sgn == -last_sign) ++flips;
    last_sign = sgn;
    if (flips >= 10) step *= 0.5;
    w += step;
    if (std::abs(step) < 1e-13) return w;
  }
  fail(ErrorKind::NonConvergence, "omega1 iteration did not converge");
}

}  // namespace brownlab
