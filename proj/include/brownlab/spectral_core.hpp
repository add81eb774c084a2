#pragma once

#include <cmath>
#include <memory>
#include <optional>
#include <variant>
#include <vector>

#include <Eigen/SVD>

#include "brownlab/closed_forms.hpp"
#include "brownlab/error.hpp"
#include "brownlab/measure.hpp"
#include "brownlab/operator_model.hpp"

namespace brownlab {

namespace detail {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

// Normal operators with finitely many eigenvalues, Zero included.
inline std::vector<std::pair<cplx, double>> planar_atoms(const OperatorModel& op) {
  if (const auto* p = std::get_if<PlanarAtomic>(&op)) return p->atoms;
  if (std::holds_alternative<Zero>(op)) return {{cplx(0), 1.0}};
  return {};
}

// Singular data of lambda - A.
struct SvdData {
  Eigen::VectorXd sigma;
  Eigen::VectorXcd uv_diag;  // (U^* V)_ii
  Eigen::MatrixXd vu_abs2;   // |(V^* U)_ij|^2
};

inline std::shared_ptr<const SvdData> svd_of(const Eigen::MatrixXcd& a, cplx lambda) {
  const long n = a.rows();
  const Eigen::MatrixXcd m = lambda * Eigen::MatrixXcd::Identity(n, n) - a;
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  auto d = std::make_shared<SvdData>();
  d->sigma = svd.singularValues();
  const Eigen::MatrixXcd uv = svd.matrixU().adjoint() * svd.matrixV();
  d->uv_diag = uv.diagonal();
  d->vu_abs2 = uv.adjoint().cwiseAbs2();
  return d;
}

inline void merge_equal(std::vector<Atom>& atoms) {
  std::sort(atoms.begin(), atoms.end(), [](const Atom& l, const Atom& r) { return l.x < r.x; });
  std::vector<Atom> out;
  for (const auto& a : atoms) {
    if (!out.empty() && a.x - out.back().x <= 1e-15 * std::max(1.0, a.x)) {
      out.back().w += a.w;
    } else {
      out.push_back(a);
    }
  }
  atoms = std::move(out);
}

}  // namespace detail

/// x0 - lambda for one fixed lambda. Matrix singular data is computed once here
/// and reused for every w.
class ShiftedOperator {
 public:
  ShiftedOperator(const OperatorModel& op, cplx lambda) : op_(&op), lambda_(lambda) {
    if (const auto* m = std::get_if<FiniteMatrix>(&op)) svd_ = detail::svd_of(m->a, lambda);
    planar_ = detail::planar_atoms(op);
  }

  cplx lambda() const { return lambda_; }
  const OperatorModel& op() const { return *op_; }

  /// f1 at w = 0, or nullopt when the integral diverges.
  std::optional<double> f1_at_zero() const {
    try {
      return f1(0.0);
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::DivergentIntegral) return std::nullopt;
      throw;
    }
  }

  double f1(double w) const { return f1_f3(w, false).first; }

  /// (f1, f3); f3 only when asked.
  std::pair<double, double> f1_f3(double w, bool want_f3 = true) const {
    const double w2 = w * w;
    return std::visit(
        detail::overloaded{
            [&](const SelfAdjoint& s) {
              check_selfadjoint_finite(s.mu, w);
              const double a = lambda_.real(), b2 = lambda_.imag() * lambda_.imag() + w2;
              auto inv = [&](double u) { return 1 / ((a - u) * (a - u) + b2); };
              const double f1 = s.mu.integrate(inv, a);
              const double f3 = want_f3 ? s.mu.integrate([&](double u) { return inv(u) * inv(u); }, a) : 0.0;
              return std::pair{f1, f3};
            },
            [&](const FiniteMatrix&) {
              double f1 = 0, f3 = 0;
              for (long i = 0; i < svd_->sigma.size(); ++i) {
                const double d = svd_->sigma[i] * svd_->sigma[i] + w2;
                if (d == 0) fail(ErrorKind::DivergentIntegral, "lambda - A is singular and w = 0");
                f1 += 1 / d;
                f3 += 1 / (d * d);
              }
              const double n = static_cast<double>(svd_->sigma.size());
              return std::pair{f1 / n, f3 / n};
            },
            [&](const HaarUnitary&) {
              if (!want_f3) return std::pair{haar_f1(lambda_, w), 0.0};
              const auto f = haar_functionals(lambda_, w);
              return std::pair{f.f1, f.f3};
            },
            [&](const QuasiNilpotentDT&) {
              if (!want_f3) return std::pair{dt_f1(lambda_, w), 0.0};
              const auto f = dt_functionals(lambda_, w);
              return std::pair{f.f1, f.f3};
            },
            [&](const auto&) {
              double f1 = 0, f3 = 0;
              for (const auto& [z, m] : planar_) {
                const double d = std::norm(lambda_ - z) + w2;
                if (d == 0) fail(ErrorKind::DivergentIntegral, "atom at lambda and w = 0");
                f1 += m / d;
                f3 += m / (d * d);
              }
              return std::pair{f1, f3};
            },
        },
        *op_);
  }

  ResolventFunctionals functionals(double w) const {
    const double w2 = w * w;
    return std::visit(
        detail::overloaded{
            [&](const SelfAdjoint& s) {
              check_selfadjoint_finite(s.mu, w);
              const double a = lambda_.real(), b = lambda_.imag(), b2 = b * b + w2;
              auto inv = [&](double u) { return 1 / ((a - u) * (a - u) + b2); };
              ResolventFunctionals f;
              f.f1 = s.mu.integrate(inv, a);
              f.f3 = s.mu.integrate([&](double u) { return inv(u) * inv(u); }, a);
              const double g1 = s.mu.integrate([&](double u) { return (a - u) * inv(u); }, a);
              const double g2 = s.mu.integrate([&](double u) { return (a - u) * inv(u) * inv(u); }, a);
              f.f2 = cplx(g1, -b * f.f1);
              f.f5 = cplx(g2, b * f.f3);
              f.f4 = f.f3;
              return f;
            },
            [&](const FiniteMatrix&) {
              const auto& d = *svd_;
              const long n = d.sigma.size();
              Eigen::VectorXd D(n);
              for (long i = 0; i < n; ++i) {
                const double q = d.sigma[i] * d.sigma[i] + w2;
                if (q == 0) fail(ErrorKind::DivergentIntegral, "lambda - A is singular and w = 0");
                D[i] = 1 / q;
              }
              ResolventFunctionals f;
              for (long i = 0; i < n; ++i) {
                f.f1 += D[i];
                f.f3 += D[i] * D[i];
                f.f2 += d.sigma[i] * D[i] * d.uv_diag[i];
                f.f5 += d.sigma[i] * D[i] * D[i] * std::conj(d.uv_diag[i]);
              }
              f.f4 = D.dot(d.vu_abs2 * D);
              const double nn = static_cast<double>(n);
              f.f1 /= nn;
              f.f2 /= nn;
              f.f3 /= nn;
              f.f4 /= nn;
              f.f5 /= nn;
              return f;
            },
            [&](const HaarUnitary&) { return haar_functionals(lambda_, w); },
            [&](const QuasiNilpotentDT&) { return dt_functionals(lambda_, w); },
            [&](const auto&) {
              ResolventFunctionals f;
              for (const auto& [z, m] : planar_) {
                const cplx x = lambda_ - z;
                const double q = std::norm(x) + w2;
                if (q == 0) fail(ErrorKind::DivergentIntegral, "atom at lambda and w = 0");
                f.f1 += m / q;
                f.f2 += m * std::conj(x) / q;
                f.f3 += m / (q * q);
                f.f5 += m * x / (q * q);
              }
              f.f4 = f.f3;
              return f;
            },
        },
        *op_);
  }

  /// \int log(u^2 + w^2) d mu_{|x0 - lambda|}(u).
  double log_det(double w) const {
    const double w2 = w * w;
    return std::visit(
        detail::overloaded{
            [&](const SelfAdjoint& s) {
              const double a = lambda_.real(), b2 = lambda_.imag() * lambda_.imag() + w2;
              double v = 0;
              for (const auto& at : s.mu.atoms()) {
                const double q = (a - at.x) * (a - at.x) + b2;
                if (q == 0) fail(ErrorKind::NegativeInfinity, "atom at lambda and w = 0");
                v += at.w * std::log(q);
              }
              return v + s.mu.integrate_pieces([&](double u) { return std::log((a - u) * (a - u) + b2); }, a);
            },
            [&](const FiniteMatrix&) {
              double v = 0;
              for (long i = 0; i < svd_->sigma.size(); ++i) {
                const double q = svd_->sigma[i] * svd_->sigma[i] + w2;
                if (q == 0) fail(ErrorKind::NegativeInfinity, "lambda - A is singular and w = 0");
                v += std::log(q);
              }
              return v / static_cast<double>(svd_->sigma.size());
            },
            [&](const HaarUnitary&) { return haar_log_det(lambda_, w); },
            [&](const QuasiNilpotentDT&) { return dt_log_det(lambda_, w); },
            [&](const auto&) {
              double v = 0;
              for (const auto& [z, m] : planar_) {
                const double q = std::norm(lambda_ - z) + w2;
                if (q == 0) fail(ErrorKind::NegativeInfinity, "atom at lambda and w = 0");
                v += m * std::log(q);
              }
              return v;
            },
        },
        *op_);
  }

  /// Law of |x0 - lambda|. Density pieces are discretised (8-point Gauss per segment).
  Measure1D singular_measure() const {
    std::vector<Atom> atoms;
    std::visit(detail::overloaded{
                   [&](const SelfAdjoint& s) {
                     const double a = lambda_.real(), b2 = lambda_.imag() * lambda_.imag();
                     auto push = [&](double u, double m) { atoms.push_back({std::sqrt((u - a) * (u - a) + b2), m}); };
                     for (const auto& at : s.mu.atoms()) push(at.x, at.w);
                     static const double gx[] = {-0.9602898564975363, -0.7966664774136267, -0.5255324099163290,
                                                 -0.1834346424956498, 0.1834346424956498,  0.5255324099163290,
                                                 0.7966664774136267,  0.9602898564975363};
                     static const double gw[] = {0.1012285362903763, 0.2223810344533745, 0.3137066458778873,
                                                 0.3626837833783620, 0.3626837833783620, 0.3137066458778873,
                                                 0.2223810344533745, 0.1012285362903763};
                     for (const auto& p : s.mu.pieces()) {
                       const double h = p.step();
                       for (std::size_t k = 0; k + 1 < p.samples.size(); ++k) {
                         const double x0 = p.node(k), s0 = p.samples[k], s1 = p.samples[k + 1];
                         for (int g = 0; g < 8; ++g) {
                           const double f = 0.5 * (gx[g] + 1);
                           const double m = 0.5 * h * gw[g] * (s0 + (s1 - s0) * f);
                           if (m > 0) push(x0 + f * h, m);
                         }
                       }
                     }
                   },
                   [&](const FiniteMatrix&) {
                     const double m = 1.0 / static_cast<double>(svd_->sigma.size());
                     for (long i = 0; i < svd_->sigma.size(); ++i) atoms.push_back({svd_->sigma[i], m});
                   },
                   [&](const HaarUnitary&) {
                     fail(ErrorKind::DispatchToClosedForm, "Haar unitary uses closed-form functionals");
                   },
                   [&](const QuasiNilpotentDT&) {
                     fail(ErrorKind::DispatchToClosedForm, "DT operator uses closed-form functionals");
                   },
                   [&](const auto&) {
                     for (const auto& [z, m] : planar_) atoms.push_back({std::abs(lambda_ - z), m});
                   },
               },
               *op_);
    detail::merge_equal(atoms);
    // Renormalise away rounding in the Gauss weights.
    double tot = 0;
    for (const auto& a : atoms) tot += a.w;
    for (auto& a : atoms) a.w /= tot;
    return Measure1D(std::move(atoms));
  }

 private:
  void check_selfadjoint_finite(const Measure1D& mu, double w) const {
    if (w != 0 || lambda_.imag() != 0) return;
    const double a = lambda_.real();
    for (const auto& at : mu.atoms())
      if (at.x == a) fail(ErrorKind::DivergentIntegral, "atom at lambda and w = 0");
    for (const auto& p : mu.pieces())
      if (a >= p.a && a <= p.b) fail(ErrorKind::DivergentIntegral, "lambda inside a density piece and w = 0");
  }

  const OperatorModel* op_;
  cplx lambda_;
  std::shared_ptr<const detail::SvdData> svd_;
  std::vector<std::pair<cplx, double>> planar_;
};

inline Measure1D shifted_singular_measure(const OperatorModel& op, cplx lambda) {
  return ShiftedOperator(op, lambda).singular_measure();
}

inline ResolventFunctionals resolvent_functionals(const OperatorModel& op, cplx lambda, double w) {
  if (!(w >= 0)) fail(ErrorKind::InvalidArgument, "w must be >= 0");
  return ShiftedOperator(op, lambda).functionals(w);
}

inline double log_fk_det_shifted(const OperatorModel& op, cplx lambda, double w) {
  if (!(w >= 0)) fail(ErrorKind::InvalidArgument, "w must be >= 0");
  return ShiftedOperator(op, lambda).log_det(w);
}

}  // namespace brownlab
