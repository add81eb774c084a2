#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "brownlab/error.hpp"
#include "brownlab/measure.hpp"
#include "brownlab/spectral_core.hpp"
#include "brownlab/subordination.hpp"

namespace brownlab {

/// Biane's maps for selfadjoint x0 with law mu:
///   v_t(a) > 0 on U_t = {a : \int (a-x)^-2 dmu > 1/t},
///   h_t(a) = t \int (a-u)/((a-u)^2 + v_t(a)^2) dmu,  psi_t = a + h_t.
class BianeMaps {
 public:
  BianeMaps(Measure1D mu, double t) : op_(SelfAdjoint{std::move(mu)}), t_(t) { check_t(t); }

  double t() const { return t_; }
  const OperatorModel& op() const { return op_; }
  const Measure1D& mu() const { return std::get<SelfAdjoint>(op_).mu; }

  double v(double a) const { return solve_w0(ShiftedOperator(op_, a), t_).w; }
  bool in_ut(double a) const { return in_xi_t(ShiftedOperator(op_, a), t_); }

  double h(double a) const {
    const ShiftedOperator x(op_, a);
    const double v = solve_w0(x, t_).w;
    return t_ * x.functionals(v).f2.real();
  }
  double psi(double a) const { return a + h(a); }

  /// Analytic derivative: inside U_t, h' = -1 + 2t(v^2 f3 + g^2/f3) with
  /// g = \int (a-u)/D^2; outside, h' = -t \int (a-u)^-2.
  double h_prime(double a) const {
    const ShiftedOperator x(op_, a);
    const auto s = solve_w0(x, t_);
    const auto f = x.functionals(s.w);
    if (!s.in_xi) return -t_ * f.f1;
    const double g = f.f5.real();
    return -1 + 2 * t_ * (s.w * s.w * f.f3 + g * g / f.f3);
  }
  double psi_prime(double a) const { return 1 + h_prime(a); }

  /// Bounds for scanning: support enlarged by 3 sqrt(t).
  double scan_min() const { return mu().support_min() - 3 * std::sqrt(t_); }
  double scan_max() const { return mu().support_max() + 3 * std::sqrt(t_); }

  /// a with psi(a) = x; psi is an increasing homeomorphism of the line.
  double psi_inverse(double x) const { return invert_increasing([&](double a) { return psi(a); }, x); }

  template <class F>
  static double invert_increasing(F&& f, double x) {
    double span = 1;
    double lo = x - span, hi = x + span;
    for (int i = 0; f(lo) > x; ++i) {
      if (i > 200) fail(ErrorKind::BracketFailure, "no lower bracket");
      lo -= (span *= 2);
    }
    for (int i = 0; f(hi) < x; ++i) {
      if (i > 200) fail(ErrorKind::BracketFailure, "no upper bracket");
      hi += (span *= 2);
    }
    return bisect_increasing(f, x, lo, hi);
  }

 private:
  OperatorModel op_;
  double t_;
};

/// Density of the Brown measure of x0 + c_t along the vertical line through
/// a: psi'(a) / (2 pi t), with psi' from a five-point difference.
inline double density_circular_sa(const BianeMaps& m, double a) {
  if (!m.in_ut(a)) fail(ErrorKind::OutsideUt, "a is outside U_t");
  double h = 1e-3 * std::max(1.0, std::abs(a));
  for (int k = 0;; ++k, h /= 10) {
    if (k == 5) fail(ErrorKind::OutsideUt, "a is too close to the boundary of U_t");
    if (m.in_ut(a - 2 * h) && m.in_ut(a + 2 * h)) break;
  }
  const double d = (-m.psi(a + 2 * h) + 8 * m.psi(a + h) - 8 * m.psi(a - h) + m.psi(a - 2 * h)) / (12 * h);
  return d / (2 * kPi * m.t());
}

/// Density of mu boxplus semicircle(t) at x: v_t(a) / (pi t) with psi_t(a) = x.
inline double semicircle_add_density(const BianeMaps& m, double x) {
  return m.v(m.psi_inverse(x)) / (kPi * m.t());
}

namespace detail {
inline void check_gamma(double t, cplx gamma) {
  if (std::abs(gamma) > t + 1e-15) fail(ErrorKind::InvalidArgument, "|gamma| must not exceed t");
}
inline double delta_coeff(double t, cplx gamma) {
  check_gamma(t, gamma);
  const cplx tau = t - gamma;
  if (tau.real() <= 0) fail(ErrorKind::GammaEqualsT, "gamma = t collapses the image to the real line");
  return 1 - std::norm(tau) / (t * tau.real());
}
}  // namespace detail

/// Push-forward map of x0 + c_t to x0 + s_{t,gamma}.
inline cplx phi_sa(const BianeMaps& m, cplx gamma, cplx lambda) {
  const double t = m.t();
  detail::check_gamma(t, gamma);
  const double a = lambda.real(), b = lambda.imag();
  const double v = m.v(a);
  if (std::abs(b) < v) {
    const cplx tau = t - gamma;
    return m.psi(a) - (tau / t) * m.h(a) + cplx(0, 1) * tau * b / t;
  }
  return lambda + gamma * cauchy_transform(m.mu(), lambda);
}

inline double delta_sa(const BianeMaps& m, cplx gamma, double a) {
  return a + detail::delta_coeff(m.t(), gamma) * m.h(a);
}

/// Jacobian determinant of phi_sa at any point above a.
inline double det_jac_sa(const BianeMaps& m, cplx gamma, double a) {
  const double c = detail::delta_coeff(m.t(), gamma);
  return (m.t() - gamma.real()) / m.t() * (1 + c * m.h_prime(a));
}

/// Density of the Brown measure of x0 + s_{t,gamma} at z.
inline double density_elliptic_sa(const BianeMaps& m, cplx gamma, cplx z) {
  const double t = m.t();
  const double c = detail::delta_coeff(t, gamma);
  const cplx tau = t - gamma;
  const double a = BianeMaps::invert_increasing([&](double s) { return s + c * m.h(s); },
                                                z.real() + tau.imag() / tau.real() * z.imag());
  const double b = (t * z.imag() + tau.imag() * m.h(a)) / tau.real();
  if (!(std::abs(b) < m.v(a))) fail(ErrorKind::OutsideImage, "z is outside the image of Xi_t");
  const double hp = m.h_prime(a);
  return (1 + hp) / (2 * kPi * tau.real() * (1 + c * hp));
}

struct BianeProfile {
  std::vector<double> a, v, psi, h, delta;
};

/// Tabulates the maps on 512 uniform points of the enlarged support, then
/// refines where psi' changes by more than 5% between neighbours.
inline BianeProfile biane_profile(const BianeMaps& m, cplx gamma = 0.0, std::size_t base = 512) {
  const double c = gamma == cplx(0) ? 0.0 : detail::delta_coeff(m.t(), gamma);
  std::vector<double> a(base), d(base);
  const double lo = m.scan_min(), hi = m.scan_max();
  for (std::size_t k = 0; k < base; ++k) a[k] = lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(base - 1);
  for (std::size_t k = 0; k < base; ++k) d[k] = m.psi_prime(a[k]);
  for (int pass = 0; pass < 4; ++pass) {
    std::vector<double> na{a[0]}, nd{d[0]};
    bool changed = false;
    for (std::size_t k = 1; k < a.size(); ++k) {
      if (std::abs(d[k] - d[k - 1]) > 0.05 * std::max(std::abs(d[k]), std::abs(d[k - 1])) && a[k] - a[k - 1] > 1e-9) {
        const double mid = 0.5 * (a[k] + a[k - 1]);
        na.push_back(mid);
        nd.push_back(m.psi_prime(mid));
        changed = true;
      }
      na.push_back(a[k]);
      nd.push_back(d[k]);
    }
    a.swap(na);
    d.swap(nd);
    if (!changed) break;
  }
  BianeProfile p;
  for (double x : a) {
    const double h = m.h(x);
    p.a.push_back(x);
    p.v.push_back(m.v(x));
    p.h.push_back(h);
    p.psi.push_back(x + h);
    p.delta.push_back(x + c * h);
  }
  return p;
}

}  // namespace brownlab
