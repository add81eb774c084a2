#include <gtest/gtest.h>

#include <random>

#include "brownlab/subordination.hpp"
#include "oracles.hpp"

using namespace brownlab;

namespace {

OperatorModel three_atom() { return SelfAdjoint{Measure1D::from_atoms({{-2.0, 0.4}, {-0.8, 0.1}, {1.0, 0.5}})}; }

OperatorModel nilpotent() {
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(2, 2);
  a(0, 1) = 1;
  return make_matrix(a);
}

// w(eps) from the fixed-point subordination of the symmetrised singular law.
double omega_oracle(const OperatorModel& op, cplx lambda, double t, double eps) {
  const auto mu1 = symmetrize(shifted_singular_measure(op, lambda));
  return scalar_omega1(mu1, t, cplx(0, eps)).imag();
}

}  // namespace

TEST(Subordination, ZeroOperatorW) {
  const auto r = solve_w(Zero{}, 0.0, 1.0, 0.5);
  EXPECT_NEAR(r.w, (0.5 + std::sqrt(4.25)) / 2, 1e-13);
  EXPECT_NEAR(r.w, 1.28078, 1e-5);
  EXPECT_LE(r.residual, 1e-12);
}

TEST(Subordination, W0Examples) {
  EXPECT_NEAR(solve_w0(Zero{}, cplx(0.6, 0), 1.0).w, 0.8, 1e-13);
  EXPECT_NEAR(solve_w0(nilpotent(), 0.0, 1.0).w, std::pow(2.0, -0.25), 1e-13);
  const auto h = solve_w0(HaarUnitary{}, cplx(1, 0), 0.5);
  EXPECT_NEAR(h.w * h.w, std::sqrt(4.25) - 2, 1e-13);
  EXPECT_NEAR(h.w, 0.248099, 1e-6);
  EXPECT_EQ(solve_w0(Zero{}, cplx(1.5, 0), 1.0).w, 0.0);
}

TEST(Subordination, Lambda1AndDomain) {
  EXPECT_NEAR(lambda1_squared(Zero{}, cplx(0.6, 0.8)), 1.0, 1e-15);
  EXPECT_EQ(lambda1_squared(Zero{}, 0.0), 0.0);
  EXPECT_TRUE(in_xi_t(Zero{}, cplx(0.99, 0), 1.0));
  EXPECT_FALSE(in_xi_t(Zero{}, cplx(1.0, 0), 1.0));  // strict
  EXPECT_TRUE(in_xi_t(three_atom(), cplx(-0.8, 0), 0.01));
  EXPECT_FALSE(in_xi_t(three_atom(), cplx(0.1, 0), 1.0));
}

TEST(Subordination, BracketIsMonotone) {
  const auto op = three_atom();
  const ShiftedOperator x(op, cplx(-0.3, 0.4));
  const double t = 0.7, eps = 0.05;
  const double w = solve_w(x, t, eps).w;
  auto k = [&](double s) { return (s - eps) / (s * x.f1(s)); };
  EXPECT_LT(k(w - 1e-6), t);
  EXPECT_GT(k(w + 1e-6), t);
}

TEST(Subordination, OrderingAndLimitInEps) {
  const auto op = three_atom();
  for (cplx lambda : {cplx(-1.4, 0.2), cplx(0.9, -0.3), cplx(0.1, 0.05), cplx(2.5, 1.0)}) {
    const ShiftedOperator x(op, lambda);
    const double t = 1.0;
    double prev = kInf;
    for (double eps : {1.0, 0.3, 0.1, 0.01}) {
      const double w = solve_w(x, t, eps).w;
      EXPECT_GT(w, eps);
      EXPECT_LT(w, prev);
      prev = w;
    }
    const double w0 = solve_w0(x, t).w;
    const double d1 = solve_w(x, t, 1e-3).w - w0, d2 = solve_w(x, t, 1e-5).w - w0;
    EXPECT_GT(d1, 0);
    EXPECT_LT(d2, d1);
    EXPECT_LT(d2, 1e-2);
  }
}

TEST(Subordination, FarFromSpectrum) {
  for (double r : {5.0, 50.0, 500.0}) {
    const auto res = solve_w(three_atom(), cplx(r, r), 1.0, 0.1);
    EXPECT_LE(res.w, 0.2);
    EXPECT_GT(res.w, 0.1);
  }
}

TEST(Subordination, SemicircleBranchAndOmegaExample) {
  const auto delta0 = Measure1D::from_atoms({{0.0, 1.0}});
  const cplx w = scalar_omega1(delta0, 1.0, cplx(0, 1));
  EXPECT_NEAR(w.real(), 0.0, 1e-13);
  EXPECT_NEAR(w.imag(), (1 + std::sqrt(5.0)) / 2, 1e-12);
  const cplx g = semicircle_cauchy(cplx(0, 2), 1.0);
  EXPECT_NEAR(g.imag(), 1 - std::sqrt(2.0), 1e-15);
}

TEST(Subordination, SolveWMatchesOmegaOracle) {
  const auto op = three_atom();
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> re(-3, 2), im(-1.5, 1.5), tt(0.2, 2), ee(0.02, 1);
  for (int i = 0; i < 10; ++i) {
    const cplx lambda(re(gen), im(gen));
    const double t = tt(gen), eps = ee(gen);
    EXPECT_NEAR(solve_w(op, lambda, t, eps).w, omega_oracle(op, lambda, t, eps), 1e-8);
  }
  EXPECT_NEAR(solve_w(nilpotent(), cplx(0.2, 0.1), 1.0, 0.3).w, omega_oracle(nilpotent(), cplx(0.2, 0.1), 1.0, 0.3), 1e-8);
}

TEST(Subordination, W0ForDensityPiece) {
  // Semicircle sampled finely: Xi_t is determined by \int (a-x)^-2 d mu > 1/t.
  const auto mu = Measure1D::from_density([](double x) { return oracle::semicircle_density(x, 1.0); }, -2, 2, 2001);
  const OperatorModel op = SelfAdjoint{mu};
  const auto r = solve_w0(op, cplx(0.3, 0.2), 1.0);
  ASSERT_TRUE(r.in_xi);
  EXPECT_NEAR(ShiftedOperator(op, cplx(0.3, 0.2)).f1(r.w), 1.0, 1e-11);
}
