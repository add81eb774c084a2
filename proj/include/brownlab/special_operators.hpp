#pragma once

#include <cmath>
#include <utility>

#include "brownlab/closed_forms.hpp"
#include "brownlab/error.hpp"
#include "brownlab/measure.hpp"
#include "brownlab/pushforward.hpp"
#include "brownlab/subordination.hpp"

namespace brownlab {

// ---------------------------------------------------------------------------
// R-diagonal operators, described by the law of |T|.

class RDiagonalProfile {
 public:
  explicit RDiagonalProfile(Measure1D singular_law) : mu_(std::move(singular_law)) {
    if (mu_.support_min() < 0) fail(ErrorKind::InvalidArgument, "singular-value law must live on [0, inf)");
    const OperatorModel op = SelfAdjoint{mu_};
    const auto inv2 = ShiftedOperator(op, 0.0).f1_at_zero();  // \int u^-2, nullopt if divergent
    lambda1_ = inv2 ? 1 / std::sqrt(*inv2) : 0.0;
    lambda2_ = std::sqrt(mu_.integrate([](double u) { return u * u; }));
  }

  /// Haar unitary: |u| = 1.
  static RDiagonalProfile haar() { return RDiagonalProfile(Measure1D::from_atoms({{1.0, 1.0}})); }

  /// Circular element of variance t: quarter-circle law of |c_t| on [0, 2 sqrt t].
  static RDiagonalProfile circular(double t, std::size_t samples = 4001) {
    check_t(t);
    const double r = 2 * std::sqrt(t);
    return RDiagonalProfile(Measure1D::from_density(
        [t](double u) { return std::sqrt(std::max(0.0, 4 * t - u * u)) / (kPi * t); }, 0, r, samples));
  }

  const Measure1D& singular_law() const { return mu_; }
  double lambda1() const { return lambda1_; }
  double lambda2() const { return lambda2_; }

  /// h_T(s) = s \int (s^2 + u^2)^-1 d mu_|T|.
  double h(double s) const { return s * mu_.integrate([s](double u) { return 1 / (s * s + u * u); }); }
  double h_prime(double s) const {
    const double f1 = mu_.integrate([s](double u) { return 1 / (s * s + u * u); });
    const double f3 = mu_.integrate([s](double u) { return 1 / ((s * s + u * u) * (s * s + u * u)); });
    return f1 - 2 * s * s * f3;
  }

 private:
  Measure1D mu_;
  double lambda1_ = 0, lambda2_ = 0;
};

struct SValue {
  enum class Kind { Finite, Zero, Infinite };
  double s = 0;
  Kind kind = Kind::Finite;
  bool is_infinite() const { return kind == Kind::Infinite; }
};

/// s(r, eps): root s > eps of (s - eps)^2 - (s - eps)/h_T(s) + r^2 = 0, i.e.
/// F(d) = 1/h_T(eps + d) - d - r^2/d = 0 in d = s - eps.
inline SValue solve_s(const RDiagonalProfile& T, double r, double eps) {
  if (!(r > 0) || !(eps >= 0)) fail(ErrorKind::InvalidArgument, "solve_s needs r > 0 and eps >= 0");
  if (eps == 0) {
    if (r <= T.lambda1()) return {0.0, SValue::Kind::Zero};
    if (r >= T.lambda2()) return {kInf, SValue::Kind::Infinite};
  }
  auto F = [&](double d) { return 1 / T.h(eps + d) - d - r * r / d; };
  auto dF = [&](double d) {
    const double s = eps + d, h = T.h(s);
    return -T.h_prime(s) / (h * h) - 1 + r * r / (d * d);
  };
  double hi = std::max(1.0, r);
  for (int i = 0; F(hi) <= 0; ++i, hi *= 2)
    if (i > 300) fail(ErrorKind::BracketFailure, "no upper bracket for s(r, eps)");
  double lo = 0.5 * hi;
  for (int i = 0; F(lo) >= 0; ++i, lo *= 0.5)
    if (i > 1000) fail(ErrorKind::BracketFailure, "no lower bracket for s(r, eps)");
  RootOptions opt;
  opt.residual_tol = 1e-14;
  opt.max_iter = 400;
  return {eps + increasing_root(F, dF, lo, hi, opt).x, SValue::Kind::Finite};
}

/// Brown measure of T of the disk of radius r: s^2 / (s^2 + r^2) at eps = 0.
inline double brown_cdf_rdiag(const RDiagonalProfile& T, double r) {
  if (r <= T.lambda1()) return 0.0;
  if (r >= T.lambda2()) return 1.0;
  const double s = solve_s(T, r, 0.0).s;
  return s * s / (s * s + r * r);
}

struct EllipseAxes {
  double minor = 0;  // r - |gamma| g / r
  double major = 0;  // r + |gamma| g / r
};

/// Axes of the image of |lambda| = r under Phi when the Brown measure of
/// T + c_t gives mass g to the disk of radius r.
inline EllipseAxes phi_rdiag(double r, double g, cplx gamma) {
  return {r - std::abs(gamma) * g / r, r + std::abs(gamma) * g / r};
}

/// Same, with g = r Re p_r(w0) from the generic subordination path.
inline EllipseAxes phi_rdiag(const OperatorModel& T, double t, double r, cplx gamma) {
  const double g = r * p_lambda(ShiftedOperator(T, r), t).real();
  return phi_rdiag(r, g, gamma);
}

/// Same, with g from the R-diagonal CDF of the sum's profile.
inline EllipseAxes phi_rdiag(const RDiagonalProfile& sum, double r, cplx gamma) {
  return phi_rdiag(r, brown_cdf_rdiag(sum, r), gamma);
}

// ---------------------------------------------------------------------------
// Haar unitary plus circular, closed forms.

inline double haar_inner_radius(double t) { return std::sqrt(std::max(0.0, 1 - t)); }
inline double haar_outer_radius(double t) { return std::sqrt(1 + t); }

inline double haar_w0(cplx lambda, double t) {
  check_t(t);
  const double r2 = std::norm(lambda);
  const double w2 = std::sqrt(4 * r2 + t * t) - (r2 + 1);
  if (!(w2 > 0)) fail(ErrorKind::OutsideAnnulus, "lambda is outside the annulus");
  return std::sqrt(w2);
}

inline double haar_cdf(double r, double t) {
  check_t(t);
  if (r <= haar_inner_radius(t)) return 0.0;
  if (r >= haar_outer_radius(t)) return 1.0;
  return r * r / t + 0.5 - std::sqrt(4 * r * r + t * t) / (2 * t);
}

/// Semi-axes (a, b) of the outer/inner boundary images at gamma = t, with
/// s = |lambda|^2 - 1.
inline std::pair<double, double> haar_axes(double s, double t) {
  check_t(t);
  const double lo = haar_inner_radius(t), hi = haar_outer_radius(t);
  if (s < lo * lo - 1 - 1e-15 || s > hi * hi - 1 + 1e-15) fail(ErrorKind::OutsideAnnulus, "s is outside the annulus");
  const double q = std::sqrt(1 + s), k = (std::sqrt(4 * (1 + s) + t * t) - t) / (2 * q);
  return {2 * q - k, k};
}

/// Semi-axes for general |gamma| <= t, interpolating linearly in |gamma|.
inline std::pair<double, double> haar_axes_gamma(double s, double t, cplx gamma) {
  const auto [a, b] = haar_axes(s, t);
  const double g = std::abs(gamma), q = std::sqrt(s + 1);
  if (g > t + 1e-15) fail(ErrorKind::InvalidArgument, "|gamma| must not exceed t");
  return {(t - g) / t * q + g / t * a, (t - g) / t * q + g / t * b};
}

// ---------------------------------------------------------------------------
// Quasi-nilpotent DT plus circular.

inline double dt_radius(double t) {
  check_t(t);
  return 1 / std::sqrt(std::log1p(1 / t));
}
inline double dt_density(double t) {
  check_t(t);
  return std::log1p(1 / t) / kPi;
}
inline cplx dt_phi(cplx lambda, double t, cplx gamma) {
  EllipticParams(t, gamma).validate();
  if (std::abs(lambda) < dt_radius(t)) return lambda + gamma * std::conj(lambda) * std::log1p(1 / t);
  return lambda + gamma / lambda;
}

}  // namespace brownlab
