#include <gtest/gtest.h>

#include <random>

#include "brownlab/brown_circular.hpp"
#include "brownlab/pushforward.hpp"
#include "brownlab/selfadjoint.hpp"
#include "oracles.hpp"

using namespace brownlab;

namespace {

Measure1D three_atom() { return Measure1D::from_atoms({{-2.0, 0.4}, {-0.8, 0.1}, {1.0, 0.5}}); }

std::vector<double> ut_points(const BianeMaps& m, int n, unsigned seed) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> u(m.scan_min(), m.scan_max());
  std::vector<double> pts;
  while (static_cast<int>(pts.size()) < n) {
    const double a = u(gen);
    if (m.in_ut(a - 0.01) && m.in_ut(a + 0.01)) pts.push_back(a);
  }
  return pts;
}

}  // namespace

TEST(SelfAdjoint, DerivativeBounds) {
  const BianeMaps m(three_atom(), 1.0);
  std::mt19937_64 gen(1);
  std::uniform_real_distribution<double> u(m.scan_min(), m.scan_max());
  for (int k = 0; k < 200; ++k) {
    const double a = u(gen);
    EXPECT_GT(m.psi_prime(a), 0.0);
    EXPECT_LT(m.psi_prime(a), 2.0);
    EXPECT_LT(std::abs(m.h_prime(a)), 1.0);
  }
}

TEST(SelfAdjoint, AnalyticDerivativeMatchesDifference) {
  const BianeMaps m(three_atom(), 0.7);
  for (double a : {-2.3, -1.1, 0.05, 0.9, 1.8, 3.5}) {
    const double h = 1e-5;
    EXPECT_NEAR(m.h_prime(a), (m.h(a + h) - m.h(a - h)) / (2 * h), 1e-7) << a;
  }
}

TEST(SelfAdjoint, DensityMatchesCircularFormulaAndIsVerticallyInvariant) {
  const BianeMaps m(three_atom(), 1.0);
  for (double a : ut_points(m, 20, 2)) {
    const double d = density_circular_sa(m, a);
    EXPECT_NEAR(d, density_circular(m.op(), a, 1.0), 1e-6) << a;
    const double v = m.v(a);
    for (double frac : {0.3, 0.9}) EXPECT_NEAR(density_circular(m.op(), cplx(a, frac * v), 1.0), d, 1e-8);
  }
}

TEST(SelfAdjoint, SemicircleAdditionMatchesSubordination) {
  const auto mu = Measure1D::from_atoms({{-1.0, 0.5}, {1.0, 0.5}});
  const double t = 0.3;
  const BianeMaps m(mu, t);
  for (double x : {-1.4, -0.5, 0.8, 1.2}) {
    const cplx z(x, 1e-7);
    const cplx g = cauchy_transform(mu, scalar_omega1(mu, t, z));
    EXPECT_NEAR(semicircle_add_density(m, x), -g.imag() / oracle::pi, 1e-5) << x;
  }
  // Zero operator: semicircle itself.
  const BianeMaps z(Measure1D::from_atoms({{0.0, 1.0}}), 1.0);
  for (double x : {-1.5, 0.0, 0.7}) EXPECT_NEAR(semicircle_add_density(z, x), oracle::semicircle_density(x, 1.0), 1e-10);
}

TEST(SelfAdjoint, DeltaIncreasingAndJacobian) {
  const BianeMaps m(three_atom(), 1.0);
  const cplx gamma(0.25, 0.25);
  double prev = -kInf;
  for (double a = m.scan_min(); a < m.scan_max(); a += 0.01) {
    const double d = delta_sa(m, gamma, a);
    EXPECT_GT(d, prev);
    prev = d;
  }
  const EllipticParams e(1.0, gamma);
  for (double a : ut_points(m, 10, 4)) {
    const cplx lambda(a, 0.5 * m.v(a));
    const auto fd = jacobian_phi(m.op(), lambda, e, JacobianMethod::FiniteDifference);
    EXPECT_NEAR(det_jac_sa(m, gamma, a), fd.det, 1e-6);
    EXPECT_NEAR(jacobian_phi(m.op(), lambda, e).det, fd.det, 1e-6);
  }
}

TEST(SelfAdjoint, PhiMatchesGenericMap) {
  const BianeMaps m(three_atom(), 1.0);
  const EllipticParams e(1.0, cplx(0.25, 0.25));
  for (cplx lambda : {cplx(-1.9, 0.3), cplx(0.9, -0.2), cplx(0.2, 1.4), cplx(2.5, 0.1)}) {
    EXPECT_LT(std::abs(phi_sa(m, e.gamma, lambda) - phi(m.op(), lambda, e)), 1e-12);
  }
}

TEST(SelfAdjoint, EllipticDensityIsTransportedDensity) {
  const BianeMaps m(three_atom(), 1.0);
  const cplx gamma(0.25, 0.25);
  const EllipticParams e(1.0, gamma);
  for (double a : ut_points(m, 8, 6)) {
    const cplx lambda(a, 0.4 * m.v(a));
    const cplx z = phi_sa(m, gamma, lambda);
    EXPECT_NEAR(density_elliptic_sa(m, gamma, z), density_circular(m.op(), lambda, 1.0) / det_jac_sa(m, gamma, a), 1e-9);
  }
}

TEST(SelfAdjoint, InjectiveOutsideXi) {
  const BianeMaps m(three_atom(), 1.0);
  const cplx gamma(0.25, 0.25);
  std::vector<cplx> imgs;
  for (int k = 0; k < 40; ++k) {
    const cplx lambda = cplx(-0.5, 0) + std::polar(3.5 + 0.05 * (k % 5), 0.16 * k);
    if (!in_xi_t(m.op(), lambda, 1.0)) imgs.push_back(phi_sa(m, gamma, lambda));
  }
  for (std::size_t i = 0; i < imgs.size(); ++i)
    for (std::size_t j = i + 1; j < imgs.size(); ++j) EXPECT_GT(std::abs(imgs[i] - imgs[j]), 1e-6);
}

TEST(SelfAdjoint, Errors) {
  const BianeMaps m(three_atom(), 1.0);
  auto kind = [](auto&& f) {
    try {
      f();
    } catch (const Error& e) {
      return e.kind();
    }
    return ErrorKind::InvalidArgument;
  };
  EXPECT_EQ(kind([&] { density_circular_sa(m, 0.1); }), ErrorKind::OutsideUt);
  EXPECT_EQ(kind([&] { delta_sa(m, 1.0, 0.3); }), ErrorKind::GammaEqualsT);
  EXPECT_EQ(kind([&] { density_elliptic_sa(m, 0.5, cplx(0.1, 2.0)); }), ErrorKind::OutsideImage);
}

TEST(SelfAdjoint, ProfileCoversSupport) {
  const BianeMaps m(three_atom(), 1.0);
  const auto p = biane_profile(m, cplx(0.25, 0.25));
  EXPECT_GE(p.a.size(), 512u);
  EXPECT_LE(p.a.front(), -5.0 + 1e-12);
  EXPECT_GE(p.a.back(), 4.0 - 1e-12);
  for (std::size_t k = 1; k < p.a.size(); ++k) {
    EXPECT_GT(p.a[k], p.a[k - 1]);
    EXPECT_GT(p.psi[k], p.psi[k - 1]);
    EXPECT_GT(p.delta[k], p.delta[k - 1]);
  }
}
