#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "brownlab/error.hpp"

namespace brownlab {

using cplx = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kEps = std::numeric_limits<double>::epsilon();
inline const double kNaN = std::numeric_limits<double>::quiet_NaN();
inline const double kInf = std::numeric_limits<double>::infinity();

namespace detail {
// One 21-point Kronrod panel; the embedded 10-point Gauss sum gives |K - G|.
template <class F>
double gk_panel(F& f, double a, double b, double& err, double& l1) {
  using GK = boost::math::quadrature::gauss_kronrod<double, 21>;
  using GL = boost::math::quadrature::gauss<double, 10>;
  static const auto& xk = GK::abscissa();
  static const auto& wk = GK::weights();
  static const auto& wg = GL::weights();
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  const double f0 = f(c);
  double k = f0 * wk[0], g = 0, l = std::abs(f0) * wk[0];
  for (std::size_t i = 1; i < xk.size(); ++i) {
    const double fp = f(c + h * xk[i]), fm = f(c - h * xk[i]);
    k += (fp + fm) * wk[i];
    l += (std::abs(fp) + std::abs(fm)) * wk[i];
    if (i % 2 == 1) g += (fp + fm) * wg[i / 2];
  }
  err = std::abs(k - g) * h;
  l1 = l * h;
  return k * h;
}

template <class F>
double gk_recursive(F& f, double a, double b, double abs_tol, int depth) {
  double err = 0, l1 = 0;
  const double r = gk_panel(f, a, b, err, l1);
  if (depth == 0 || err <= std::max(abs_tol, 64 * kEps * l1)) return r;
  const double m = 0.5 * (a + b);
  return gk_recursive(f, a, m, abs_tol / 2, depth - 1) + gk_recursive(f, m, b, abs_tol / 2, depth - 1);
}
}  // namespace detail

/// Adaptive 21-point Gauss-Kronrod on [a,b] with an absolute tolerance,
/// floored at a few ulps of the L1 norm.
template <class F>
double integrate_gk(F&& f, double a, double b, double abs_tol = 1e-12) {
  if (!(b > a)) return 0.0;
  auto g = [&](double u) { return f(u); };
  return detail::gk_recursive(g, a, b, abs_tol, 30);
}

struct RootOptions {
  double bisect_rel_width = 1e-3;
  double residual_tol = 1e-13;
  int max_iter = 200;
};

struct RootResult {
  double x = kNaN;
  double residual = kNaN;
  int iterations = 0;
};

/// Root of an increasing function bracketed by f(lo) < 0 < f(hi).
/// Bisection until the bracket is narrow, then Newton kept inside the bracket.
template <class F, class DF>
RootResult increasing_root(F&& f, DF&& df, double lo, double hi, const RootOptions& opt = {}) {
  RootResult r;
  auto width_ok = [&] { return hi - lo <= opt.bisect_rel_width * std::max(std::abs(hi), 1e-300); };
  while (!width_ok() && r.iterations < opt.max_iter) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    ++r.iterations;
    if (fm == 0.0) return {mid, 0.0, r.iterations};
    (fm < 0 ? lo : hi) = mid;
  }
  double x = 0.5 * (lo + hi);
  double best_x = x, best_res = kInf;
  while (r.iterations < opt.max_iter) {
    const double fx = f(x);
    ++r.iterations;
    if (std::abs(fx) < best_res) {
      best_res = std::abs(fx);
      best_x = x;
    }
    if (std::abs(fx) <= opt.residual_tol) break;
    (fx < 0 ? lo : hi) = x;
    if (hi - lo <= 4 * kEps * std::abs(x) || hi - lo <= 1e-300) break;
    const double d = df(x);
    double xn = (d > 0 && std::isfinite(d)) ? x - fx / d : kNaN;
    if (!(xn > lo && xn < hi)) xn = 0.5 * (lo + hi);
    if (xn == x) break;
    x = xn;
  }
  r.x = best_x;
  r.residual = best_res;
  return r;
}

/// Plain bisection for an increasing function, down to floating-point resolution.
template <class F>
double bisect_increasing(F&& f, double target, double lo, double hi, int max_iter = 300) {
  for (int i = 0; i < max_iter; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (f(mid) < target ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

/// Golden-section maximisation of a unimodal function on [a,b].
template <class F>
double golden_max(F&& f, double a, double b, int iters = 200) {
  const double g = (std::sqrt(5.0) - 1) / 2;
  double c = b - g * (b - a), d = a + g * (b - a);
  double fc = f(c), fd = f(d);
  for (int i = 0; i < iters && b - a > 1e-15 * (1 + std::abs(a)); ++i) {
    if (fc > fd) {
      b = d; d = c; fd = fc;
      c = b - g * (b - a); fc = f(c);
    } else {
      a = c; c = d; fc = fd;
      d = a + g * (b - a); fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

}  // namespace brownlab
