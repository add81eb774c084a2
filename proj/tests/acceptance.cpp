// One PASS/FAIL line per acceptance criterion; exit status is the number of failures.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "brownlab/brown_circular.hpp"
#include "brownlab/pushforward.hpp"
#include "brownlab/randmat.hpp"
#include "brownlab/selfadjoint.hpp"
#include "brownlab/special_operators.hpp"
#include "models.hpp"
#include "oracles.hpp"

using namespace brownlab;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

std::vector<cplx> interior_points(const OperatorModel& op, double t, int n, double re0, double re1, double im0, double im1,
                                  unsigned seed, double margin = 0.01) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> re(re0, re1), im(im0, im1);
  std::vector<cplx> pts;
  while (static_cast<int>(pts.size()) < n) {
    const cplx z(re(gen), im(gen));
    bool ok = true;
    for (double dx : {-margin, 0.0, margin})
      for (double dy : {-margin, 0.0, margin}) ok = ok && in_xi_t(op, z + cplx(dx, dy), t);
    if (ok) pts.push_back(z);
  }
  return pts;
}

Outcome circular_law() {
  double dev = 0;
  for (double x = -0.9; x <= 0.9 + 1e-12; x += 0.05)
    for (double y = -0.9; y <= 0.9 + 1e-12; y += 0.05)
      if (std::hypot(x, y) <= 0.9) dev = std::max(dev, std::abs(density_circular(Zero{}, {x, y}, 1.0) - 1 / kPi));
  const auto g = density_grid(Zero{}, 1.0, {-1.2, 1.2, -1.2, 1.2, 401, 401});
  return {dev <= 1e-9 && std::abs(g.mass - 1) <= 2e-3,
          "max |density - 1/pi| " + fmt("%.2e", dev) + ", grid mass " + fmt("%.6f", g.mass)};
}

Outcome subordination_oracle() {
  const auto op = models::three_atom();
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> re(-3, 2), im(-1.5, 1.5), tt(0.2, 2), ee(0.02, 1);
  double worst = 0;
  for (int i = 0; i < 50; ++i) {
    const cplx lambda(re(gen), im(gen));
    const double t = tt(gen), eps = ee(gen);
    const auto mu1 = symmetrize(shifted_singular_measure(op, lambda));
    worst = std::max(worst, std::abs(solve_w(op, lambda, t, eps).w - scalar_omega1(mu1, t, cplx(0, eps)).imag()));
  }
  return {worst <= 1e-8, "max |w - Im omega1| " + fmt("%.2e", worst)};
}

Outcome dual_density() {
  const OperatorModel ops[] = {Zero{}, models::nilpotent(), models::three_atom()};
  double worst = 0;
  for (const auto& op : ops)
    for (const cplx z : interior_points(op, 1.0, 100, -2.5, 1.8, -1.2, 1.2, 21))
      worst = std::max(worst, std::abs(density_circular(op, z, 1.0) - density_circular_fd(op, z, 1.0)));
  return {worst <= 1e-6, "max difference " + fmt("%.2e", worst) + " over 300 points"};
}

Outcome laplacian() {
  const OperatorModel ops[] = {Zero{}, models::nilpotent(), models::three_atom(), HaarUnitary{}, QuasiNilpotentDT{}};
  const double h = 1e-3;
  double worst = 0;
  for (const auto& op : ops) {
    auto L = [&](cplx z) { return log_fk_det_circular(op, z, 1.0); };
    for (const cplx z : interior_points(op, 1.0, 25, -2.0, 1.5, -1.0, 1.0, 31)) {
      const double lap = (L(z + h) + L(z - h) + L(z + cplx(0, h)) + L(z - cplx(0, h)) - 4 * L(z)) / (h * h);
      worst = std::max(worst, std::abs(lap / (2 * kPi) - density_circular(op, z, 1.0)));
    }
  }
  return {worst <= 1e-4, "max difference " + fmt("%.2e", worst) + " over 5 models x 25 points"};
}

Outcome selfadjoint_forms() {
  const auto op = models::three_atom();
  const BianeMaps m(std::get<SelfAdjoint>(op).mu, 1.0);
  const cplx gamma(0.25, 0.25);
  const EllipticParams e(1.0, gamma);
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> ua(-3.5, 2.5);
  double psi_lo = kInf, psi_hi = -kInf, hmax = 0, dens = 0, jac = 0;
  for (int n = 0; n < 200;) {
    const double a = ua(gen);
    if (!(m.in_ut(a - 0.01) && m.in_ut(a) && m.in_ut(a + 0.01))) continue;
    ++n;
    const double pp = m.psi_prime(a), hp = m.h_prime(a);
    psi_lo = std::min(psi_lo, pp);
    psi_hi = std::max(psi_hi, pp);
    hmax = std::max(hmax, std::abs(hp));
    const cplx lambda(a, 0.5 * m.v(a));
    dens = std::max(dens, std::abs(density_circular_sa(m, a) - density_circular(op, lambda, 1.0)));
    jac = std::max(jac, std::abs(det_jac_sa(m, gamma, a) - jacobian_phi(op, lambda, e, JacobianMethod::FiniteDifference).det));
  }
  const bool ok = psi_lo > 0 && psi_hi < 2 && hmax < 1 && dens <= 1e-6 && jac <= 1e-6;
  return {ok, "psi' in [" + fmt("%.4f", psi_lo) + ", " + fmt("%.4f", psi_hi) + "], max |h'| " + fmt("%.4f", hmax) +
                  ", density diff " + fmt("%.2e", dens) + ", Jacobian diff " + fmt("%.2e", jac)};
}

Outcome elliptic_ellipse() {
  const EllipticParams e(1.0, 0.5);
  const double major = std::abs(phi(Zero{}, 1.0, e)), minor = std::abs(phi(Zero{}, cplx(0, 1), e));
  const double major_in = std::abs(phi(Zero{}, 1.0 - 1e-12, e)), minor_in = std::abs(phi(Zero{}, cplx(0, 1 - 1e-12), e));
  const auto src = density_grid(Zero{}, 1.0, {-1.2, 1.2, -1.2, 1.2, 481, 481});
  const auto f = pushforward_density(Zero{}, e, src);
  double dev = 0;
  bool inside = true;
  for (const auto& p : f.points) {
    dev = std::max(dev, std::abs(p.dst - 1 / (kPi * 0.75)));
    inside = inside && std::norm(p.z.real() / 1.5) + std::norm(p.z.imag() / 0.5) <= 1 + 1e-12;
  }
  const double ax = std::max({std::abs(major - 1.5), std::abs(minor - 0.5), std::abs(major_in - 1.5), std::abs(minor_in - 0.5)});
  const bool ok = dev <= 1e-6 && inside && ax <= 1e-9 && std::abs(f.transported_mass - 1) <= 1e-3 && f.singular_cells == 0;
  return {ok, "density dev " + fmt("%.2e", dev) + ", axes dev " + fmt("%.2e", ax) + ", mass " + fmt("%.6f", f.transported_mass)};
}

Outcome degenerate_gamma() {
  const EllipticParams e(1.0, 1.0);
  const auto env = density_grid(Zero{}, 1.0, {-1.0, 1.0, -1.0, 1.0, 21, 21});
  const auto pc = pushforward_pointcloud(Zero{}, e, env, 100000, 2024, std::max(1u, std::thread::hardware_concurrency()));
  double im = 0;
  std::vector<double> xs;
  for (const auto& z : pc.image) {
    im = std::max(im, std::abs(z.imag()));
    xs.push_back(z.real());
  }
  std::sort(xs.begin(), xs.end());
  const double n = static_cast<double>(xs.size());
  double ks = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double F = oracle::semicircle_cdf(xs[i], 1.0);
    ks = std::max({ks, std::abs(F - static_cast<double>(i) / n), std::abs(F - static_cast<double>(i + 1) / n)});
  }
  return {im < 1e-12 && ks <= 0.01, "max |Im| " + fmt("%.2e", im) + ", KS " + fmt("%.4f", ks)};
}

Outcome haar_unitary() {
  double worst = 0, edge = 0;
  bool radii = true;
  for (double t : {0.25, 0.5, 1.0}) {
    const double lo = haar_inner_radius(t), hi = haar_outer_radius(t);
    // Radial mass from the generic density, integrated over angle (4 rays) and radius.
    auto ring = [&](double rho) {
      double s = 0;
      for (int k = 0; k < 4; ++k) s += density_circular(HaarUnitary{}, std::polar(rho, 2 * kPi * (k + 0.3) / 4), t);
      return 2 * kPi * rho * s / 4;
    };
    double acc = 0, prev = lo;
    for (int k = 1; k <= 32; ++k) {
      const double r = lo + (hi - lo) * k / 33.0;
      acc += integrate_gk(ring, prev, r, 1e-11);
      prev = r;
      worst = std::max(worst, std::abs(acc - haar_cdf(r, t)));
    }
    const double R = hi + 0.2;
    const int n = 201;
    const auto g = density_grid(HaarUnitary{}, t, {-R, R, -R, R, n, n});
    double rmin = kInf, rmax = 0;
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i)
        if (g.inside(i, j)) {
          rmin = std::min(rmin, std::abs(g.grid.point(i, j)));
          rmax = std::max(rmax, std::abs(g.grid.point(i, j)));
        }
    const double cell = std::hypot(g.grid.dx(), g.grid.dy());
    edge = std::max({edge, std::abs(rmin - lo) / cell, std::abs(rmax - hi) / cell});
    radii = radii && std::abs(rmin - lo) <= cell && std::abs(rmax - hi) <= cell;
  }
  return {worst <= 1e-6 && radii,
          "max CDF diff " + fmt("%.2e", worst) + ", radius error " + fmt("%.2f", edge) + " cells"};
}

Outcome dt_operator() {
  double rad = 0, dens = 0;
  for (double t : {0.5, 1.0, 2.0}) {
    const double R = 1 / std::sqrt(std::log(1 + 1 / t));
    const double r = bisect_increasing([&](double x) { return in_xi_t(QuasiNilpotentDT{}, x, t) ? 0.0 : 1.0; }, 0.5, 0.1, 5.0);
    rad = std::max(rad, std::abs(r - R));
    for (double f : {0.0, 0.25, 0.6, 0.95})
      dens = std::max(dens, std::abs(density_circular(QuasiNilpotentDT{}, std::polar(f * R, 1.1 * f), t) -
                                     std::log(1 + 1 / t) / kPi));
  }
  return {rad <= 1e-9 && dens <= 1e-8, "radius error " + fmt("%.2e", rad) + ", density error " + fmt("%.2e", dens)};
}

Outcome rdiagonal_axes() {
  const double t = 0.5;
  const cplx gamma(0.4, 0);
  const double lo = haar_inner_radius(t), hi = haar_outer_radius(t);
  bool mono = true;
  EllipseAxes prev{0, 0};
  for (int k = 0; k < 64; ++k) {
    const double r = lo + (hi - lo) * k / 63.0;
    const auto ax = phi_rdiag(HaarUnitary{}, t, r, gamma);
    if (k > 0) mono = mono && ax.major >= prev.major - 1e-12 && ax.minor >= prev.minor - 1e-12;
    prev = ax;
  }
  const double s = std::sqrt(1 + t), g = std::abs(gamma);
  const double d_gamma = std::max(std::abs(prev.major - (t + g + 1) / s), std::abs(prev.minor - (t - g + 1) / s));
  const auto at_t = phi_rdiag(HaarUnitary{}, t, hi, cplx(t, 0));
  const double d_t = std::max(std::abs(at_t.major - (2 * t + 1) / s), std::abs(at_t.minor - 1 / s));
  return {mono && d_gamma <= 1e-8 && d_t <= 1e-8,
          std::string(mono ? "monotone" : "NOT monotone") + "; outer axes at gamma=0.4 " + fmt("%.6f", prev.major) + "/" +
              fmt("%.6f", prev.minor) + ", at gamma=t " + fmt("%.6f", at_t.major) + "/" + fmt("%.6f", at_t.minor) +
              " (dev " + fmt("%.1e", std::max(d_gamma, d_t)) + ")"};
}

Outcome monte_carlo() {
  const auto circ = [](double r) { return std::min(1.0, r * r); };
  std::string detail = "ginibre ks";
  bool ok = true;
  for (std::uint64_t seed : {1, 2, 3}) {
    const double ks = radial_ks(eigenvalues(sample({EnsembleKind::Ginibre, 512, 1.0, 0, seed, {}})), circ);
    ok = ok && ks <= 0.06;
    detail += " " + fmt("%.4f", ks);
  }

  Eigen::MatrixXcd d = Eigen::MatrixXcd::Zero(510, 510);
  for (int k = 0; k < 510; ++k) d(k, k) = k < 204 ? -2.0 : (k < 255 ? -0.8 : 1.0);
  const auto ev_b = eigenvalues(d + sample({EnsembleKind::Ginibre, 510, 1.0, 0, 7, {}}));
  const auto theory = density_grid(models::three_atom(), 1.0, {-4.5, 3.5, -2.2, 2.2, 200, 110});
  const double tv = esd_compare(ev_b, theory).binned_tv;
  ok = ok && tv <= 0.12;
  detail += "; three-atom tv " + fmt("%.4f", tv);

  const Eigen::MatrixXcd u = sample({EnsembleKind::HaarUnitary, 512, 1.0, 0, 8, {}});
  const auto ev_c = eigenvalues(u + sample({EnsembleKind::Ginibre, 512, 0.5, 0, 9, {}}));
  const double ks_c = radial_ks(ev_c, [](double r) { return haar_cdf(r, 0.5); });
  ok = ok && ks_c <= 0.08;
  detail += "; haar ks " + fmt("%.4f", ks_c);

  const Eigen::MatrixXcd dt = sample({EnsembleKind::DtUpper, 512, 1.0, 0, 10, {}});
  const auto ev_d = eigenvalues(dt + sample({EnsembleKind::Ginibre, 512, 1.0, 0, 11, {}}));
  const double frac =
      static_cast<double>(std::count_if(ev_d.begin(), ev_d.end(), [](cplx z) { return std::abs(z) <= 1.20112; })) / 512.0;
  ok = ok && frac >= 0.97;
  detail += "; dt inside fraction " + fmt("%.4f", frac);
  return {ok, detail};
}

Outcome regularized_map() {
  const auto op = models::three_atom();
  const EllipticParams e(1.0, cplx(0.25, 0.25));
  auto dev = [&](double eps) {
    double d = 0;
    for (double x = -3.0; x <= 2.0 + 1e-12; x += 0.25)
      for (double y = -1.5; y <= 1.5 + 1e-12; y += 0.25) d = std::max(d, std::abs(phi_eps(op, {x, y}, e, eps) - phi(op, {x, y}, e)));
    return d;
  };
  const double d3 = dev(1e-3), d4 = dev(1e-4);
  return {d4 <= 10 * d3 + 1e-8, "max deviation " + fmt("%.3e", d3) + " at 1e-3, " + fmt("%.3e", d4) + " at 1e-4"};
}

struct Criterion {
  int id;
  const char* name;
  double budget_s;
  std::function<Outcome()> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> all = {
      {1, "circular law recovery", 5, circular_law},
      {2, "subordination oracle", 10, subordination_oracle},
      {3, "dual density formulas", 30, dual_density},
      {4, "Laplacian consistency", 30, laplacian},
      {5, "selfadjoint closed forms", 20, selfadjoint_forms},
      {6, "elliptic pushforward ellipse", 60, elliptic_ellipse},
      {7, "degenerate gamma = t", 10, degenerate_gamma},
      {8, "Haar unitary CDF and annulus", 30, haar_unitary},
      {9, "DT radius and density", 5, dt_operator},
      {10, "R-diagonal axes", 5, rdiagonal_axes},
      {11, "Monte Carlo ESD", 300, monte_carlo},
      {12, "regularized map convergence", 20, regularized_map},
  };
  int failures = 0;
  for (const auto& c : all) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool pass = o.ok && secs <= c.budget_s;
    if (!pass) ++failures;
    std::printf("%s %2d %-30s %s [%.2f s / %.0f s]\n", pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(), secs,
                c.budget_s);
    std::fflush(stdout);
  }
  return failures;
}
