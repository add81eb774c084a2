#pragma once

#include <cmath>
#include <optional>

#include "brownlab/error.hpp"
#include "brownlab/numerics.hpp"

namespace brownlab {

/// With h = (lambda-x0)^*(lambda-x0) + w^2 and k = (lambda-x0)(lambda-x0)^* + w^2:
/// f1 = phi[h^-1], f2 = phi[(lambda-x0)^* k^-1], f3 = phi[h^-2],
/// f4 = phi[h^-1 k^-1], f5 = phi[(lambda-x0) h^-2].
struct ResolventFunctionals {
  double f1 = 0;
  cplx f2 = 0;
  double f3 = 0;
  double f4 = 0;
  cplx f5 = 0;
};

// Haar unitary u: everything reduces to R = sqrt(delta^2 - 4 r^2), delta = r^2 + 1 + w^2.
namespace haar_detail {
struct Parts {
  double r, delta, R;
};
inline Parts parts(cplx lambda, double w) {
  const double r = std::abs(lambda);
  const double delta = r * r + 1 + w * w;
  const double R = std::sqrt(((r - 1) * (r - 1) + w * w) * ((r + 1) * (r + 1) + w * w));
  return {r, delta, R};
}
}  // namespace haar_detail

inline ResolventFunctionals haar_functionals(cplx lambda, double w) {
  const auto [r, delta, R] = haar_detail::parts(lambda, w);
  if (R == 0) fail(ErrorKind::DivergentIntegral, "lambda on the unit circle with w = 0");
  ResolventFunctionals f;
  f.f1 = 1 / R;
  f.f2 = std::conj(lambda) * (delta + R - 2) / (R * (delta + R));
  f.f3 = delta / (R * R * R);
  f.f4 = f.f3;
  f.f5 = lambda * (delta - 2) / (R * R * R);
  return f;
}

inline double haar_f1(cplx lambda, double w) {
  const auto [r, delta, R] = haar_detail::parts(lambda, w);
  if (R == 0) fail(ErrorKind::DivergentIntegral, "lambda on the unit circle with w = 0");
  return 1 / R;
}

inline double haar_log_det(cplx lambda, double w) {
  const auto [r, delta, R] = haar_detail::parts(lambda, w);
  return std::log(0.5 * (delta + R));
}

/// Trapezoid rule on the unit circle. Independent of the closed forms above.
inline ResolventFunctionals haar_functionals_contour(cplx lambda, double w, int points = 64) {
  ResolventFunctionals f;
  for (int k = 0; k < points; ++k) {
    const cplx x = lambda - std::polar(1.0, 2 * kPi * k / points);
    const double d = 1 / (std::norm(x) + w * w);
    f.f1 += d;
    f.f2 += std::conj(x) * d;
    f.f3 += d * d;
    f.f5 += x * d * d;
  }
  f.f1 /= points;
  f.f2 /= static_cast<double>(points);
  f.f3 /= points;
  f.f5 /= static_cast<double>(points);
  f.f4 = f.f3;
  return f;
}

// Quasi-nilpotent DT: parametrised by sigma in (-1/|lambda|^2, 0) with
// w^2 = W(sigma) = -(e^sigma / sigma)(1 + |lambda|^2 sigma).
namespace dt_detail {
inline double W(double sigma, double r2) { return -std::exp(sigma) / sigma * (1 + r2 * sigma); }
inline double dW(double sigma, double r2) {
  return std::exp(sigma) * (1 / (sigma * sigma) - 1 / sigma - r2);
}

inline double sigma_of(double r2, double w2) {
  if (!(w2 > 0)) fail(ErrorKind::InvalidArgument, "DT parametrisation needs w > 0");
  double lo, hi = -0.25 / (w2 + r2 + 1);
  while (W(hi, r2) <= w2) hi *= 0.5;
  if (r2 > 0) {
    lo = -1 / r2;
  } else {
    lo = -1;
    while (W(lo, r2) >= w2) lo *= 2;
  }
  const double lw = std::log(w2);
  auto F = [&](double s) {
    const double v = W(s, r2);
    return v > 0 ? std::log(v) - lw : -kInf;
  };
  auto dF = [&](double s) { return dW(s, r2) / W(s, r2); };
  RootOptions opt;
  opt.residual_tol = 4 * kEps;
  opt.max_iter = 400;
  return increasing_root(F, dF, lo, hi, opt).x;
}
}  // namespace dt_detail

inline ResolventFunctionals dt_functionals(cplx lambda, double w) {
  const double r2 = std::norm(lambda);
  if (w == 0 && r2 == 0) fail(ErrorKind::DivergentIntegral, "DT at lambda = 0 with w = 0");
  const double s = w == 0 ? -1 / r2 : dt_detail::sigma_of(r2, w * w);
  const double dW = dt_detail::dW(s, r2);
  ResolventFunctionals f;
  f.f1 = std::expm1(-s);
  f.f2 = -std::conj(lambda) * s;
  f.f3 = std::exp(-s) / dW;
  f.f4 = (1 - s) / dW;
  f.f5 = lambda / dW;
  return f;
}

inline double dt_f1(cplx lambda, double w) {
  if (w == 0) {
    const double r2 = std::norm(lambda);
    if (r2 == 0) fail(ErrorKind::DivergentIntegral, "DT at lambda = 0 with w = 0");
    const double v = std::expm1(1 / r2);
    if (!std::isfinite(v)) fail(ErrorKind::DivergentIntegral, "DT f1 overflows at w = 0");
    return v;
  }
  return std::expm1(-dt_detail::sigma_of(std::norm(lambda), w * w));
}

inline double dt_log_det(cplx lambda, double w) {
  const double r2 = std::norm(lambda);
  if (w == 0) {
    if (r2 == 0) fail(ErrorKind::NegativeInfinity, "log det of the DT operator is -inf");
    return std::log(r2);
  }
  const double s = dt_detail::sigma_of(r2, w * w);
  return -1 / s - std::log(-s) - r2 * s - w * w - r2 - 1;
}

}  // namespace brownlab
