#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "brownlab/error.hpp"
#include "brownlab/numerics.hpp"

namespace brownlab {

struct Atom {
  double x = 0;
  double w = 0;
};

/// Density sampled on a uniform grid of [a,b], linear in between.
struct DensityPiece {
  double a = 0;
  double b = 0;
  std::vector<double> samples;

  double step() const { return (b - a) / static_cast<double>(samples.size() - 1); }
  double node(std::size_t k) const {
    return k + 1 == samples.size() ? b : a + static_cast<double>(k) * step();
  }
  double value(double u) const {
    if (u < a || u > b) return 0.0;
    const double s = (u - a) / step();
    const auto k = std::min<std::size_t>(static_cast<std::size_t>(s), samples.size() - 2);
    const double f = s - static_cast<double>(k);
    return samples[k] * (1 - f) + samples[k + 1] * f;
  }
  double mass() const {
    double m = 0;
    for (std::size_t k = 0; k + 1 < samples.size(); ++k) m += samples[k] + samples[k + 1];
    return 0.5 * m * step();
  }
};

inline constexpr std::size_t kMinPieceSamples = 64;
inline constexpr double kMassTolerance = 1e-12;
inline constexpr double kQuadTolerance = 1e-12;

/// Probability measure on the real line: finitely many atoms plus
/// piecewise-linear density pieces on disjoint intervals.
class Measure1D {
 public:
  Measure1D() = default;

  Measure1D(std::vector<Atom> atoms, std::vector<DensityPiece> pieces = {})
      : atoms_(std::move(atoms)), pieces_(std::move(pieces)) {
    std::sort(atoms_.begin(), atoms_.end(), [](const Atom& l, const Atom& r) { return l.x < r.x; });
    std::sort(pieces_.begin(), pieces_.end(),
              [](const DensityPiece& l, const DensityPiece& r) { return l.a < r.a; });
    validate();
  }

  static Measure1D from_atoms(std::initializer_list<std::pair<double, double>> xw) {
    std::vector<Atom> a;
    for (auto [x, w] : xw) a.push_back({x, w});
    return Measure1D(std::move(a));
  }

  /// Samples `p` at n uniform nodes of [a,b] and rescales to unit mass.
  static Measure1D from_density(const std::function<double(double)>& p, double a, double b,
                                std::size_t n) {
    DensityPiece piece{a, b, std::vector<double>(n)};
    for (std::size_t k = 0; k < n; ++k) piece.samples[k] = std::max(0.0, p(piece.node(k)));
    const double m = piece.mass();
    if (!(m > 0)) fail(ErrorKind::InvalidMeasure, "density has zero mass");
    for (double& s : piece.samples) s /= m;
    return Measure1D({}, {std::move(piece)});
  }

  const std::vector<Atom>& atoms() const { return atoms_; }
  const std::vector<DensityPiece>& pieces() const { return pieces_; }
  bool empty() const { return atoms_.empty() && pieces_.empty(); }

  double total_mass() const {
    double m = 0;
    for (const auto& at : atoms_) m += at.w;
    for (const auto& p : pieces_) m += p.mass();
    return m;
  }

  double support_min() const {
    double v = kInf;
    if (!atoms_.empty()) v = atoms_.front().x;
    if (!pieces_.empty()) v = std::min(v, pieces_.front().a);
    return v;
  }
  double support_max() const {
    double v = -kInf;
    for (const auto& at : atoms_) v = std::max(v, at.x);
    for (const auto& p : pieces_) v = std::max(v, p.b);
    return v;
  }

  /// True when u is an atom or lies in the closure of a density piece.
  bool in_support(double u) const {
    for (const auto& at : atoms_)
      if (at.x == u) return true;
    for (const auto& p : pieces_)
      if (u >= p.a && u <= p.b) return true;
    return false;
  }

  /// \int f dmu over the density pieces only; `split` is an abscissa where f
  /// is nearly singular and quadrature should break.
  template <class F>
  double integrate_pieces(F&& f, double split = kNaN) const {
    double total = 0;
    for (const auto& p : pieces_) {
      const double h = p.step();
      for (std::size_t k = 0; k + 1 < p.samples.size(); ++k) {
        const double s0 = p.samples[k], s1 = p.samples[k + 1];
        if (s0 == 0 && s1 == 0) continue;
        const double x0 = p.node(k), x1 = p.node(k + 1);
        auto g = [&](double u) { return f(u) * (s0 + (s1 - s0) * (u - x0) / h); };
        const double tol = kQuadTolerance * h / (p.b - p.a);
        if (split > x0 && split < x1) {
          total += integrate_gk(g, x0, split, tol / 2) + integrate_gk(g, split, x1, tol / 2);
        } else {
          total += integrate_gk(g, x0, x1, tol);
        }
      }
    }
    return total;
  }

  template <class F>
  double integrate(F&& f, double split = kNaN) const {
    double total = 0;
    for (const auto& at : atoms_) total += at.w * f(at.x);
    return total + integrate_pieces(f, split);
  }

 private:
  void validate() const {
    if (empty()) fail(ErrorKind::InvalidMeasure, "measure has no atoms and no pieces");
    for (const auto& at : atoms_)
      if (!(at.w > 0) || !std::isfinite(at.x))
        fail(ErrorKind::InvalidMeasure, "atom weights must be positive and locations finite");
    for (std::size_t i = 0; i < pieces_.size(); ++i) {
      const auto& p = pieces_[i];
      if (!(p.b > p.a)) fail(ErrorKind::InvalidMeasure, "piece interval must have a < b");
      if (p.samples.size() < kMinPieceSamples)
        fail(ErrorKind::InvalidMeasure, "density piece needs at least 64 samples");
      for (double s : p.samples)
        if (!(s >= 0) || !std::isfinite(s)) fail(ErrorKind::InvalidMeasure, "negative density sample");
      if (i > 0 && p.a < pieces_[i - 1].b)
        fail(ErrorKind::InvalidMeasure, "density pieces overlap");
    }
    const double m = total_mass();
    if (std::abs(m - 1.0) > kMassTolerance)
      fail(ErrorKind::InvalidMeasure, "total mass is " + std::to_string(m) + ", expected 1");
  }

  std::vector<Atom> atoms_;
  std::vector<DensityPiece> pieces_;
};

/// G(z) = \int dmu(u) / (z - u). Real z must avoid the support.
inline cplx cauchy_transform(const Measure1D& mu, cplx z) {
  if (z.imag() == 0.0 && mu.in_support(z.real()))
    fail(ErrorKind::PoleOnContour, "real argument lies in the support");
  cplx g = 0;
  for (const auto& at : mu.atoms()) g += at.w / (z - at.x);
  const double x = z.real(), y = z.imag();
  const double re = mu.integrate_pieces([&](double u) { return (x - u) / ((x - u) * (x - u) + y * y); }, x);
  const double im = mu.integrate_pieces([&](double u) { return -y / ((x - u) * (x - u) + y * y); }, x);
  return g + cplx(re, im);
}

/// Symmetric version of a measure on [0, inf): mass split evenly between u and -u.
inline Measure1D symmetrize(const Measure1D& mu) {
  std::vector<Atom> atoms;
  for (const auto& at : mu.atoms()) {
    if (at.x < 0) fail(ErrorKind::InvalidArgument, "symmetrize expects a measure on [0, inf)");
    if (at.x == 0) {
      atoms.push_back(at);
    } else {
      atoms.push_back({at.x, at.w / 2});
      atoms.push_back({-at.x, at.w / 2});
    }
  }
  std::vector<DensityPiece> pieces;
  for (const auto& p : mu.pieces()) {
    if (p.a < 0) fail(ErrorKind::InvalidArgument, "symmetrize expects a measure on [0, inf)");
    const std::size_t n = p.samples.size();
    if (p.a == 0) {
      DensityPiece both{-p.b, p.b, std::vector<double>(2 * n - 1)};
      for (std::size_t k = 0; k < n; ++k) {
        both.samples[n - 1 + k] = p.samples[k] / 2;
        both.samples[n - 1 - k] = p.samples[k] / 2;
      }
      pieces.push_back(std::move(both));
    } else {
      DensityPiece pos{p.a, p.b, p.samples}, neg{-p.b, -p.a, std::vector<double>(n)};
      for (std::size_t k = 0; k < n; ++k) {
        pos.samples[k] /= 2;
        neg.samples[n - 1 - k] = p.samples[k] / 2;
      }
      pieces.push_back(std::move(pos));
      pieces.push_back(std::move(neg));
    }
  }
  return Measure1D(std::move(atoms), std::move(pieces));
}

}  // namespace brownlab
