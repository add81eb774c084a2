#pragma once

#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "brownlab/error.hpp"
#include "brownlab/measure.hpp"

namespace brownlab {

/// x0 selfadjoint with spectral distribution mu.
struct SelfAdjoint {
  Measure1D mu;
};

/// Normal x0 with finitely many eigenvalues in the plane.
struct PlanarAtomic {
  std::vector<std::pair<cplx, double>> atoms;  // (location, weight)
};

/// N x N matrix with the normalised trace tr/N.
struct FiniteMatrix {
  Eigen::MatrixXcd a;
};

struct Zero {};
struct HaarUnitary {};
/// Dykema-Haagerup quasi-nilpotent operator.
struct QuasiNilpotentDT {};

using OperatorModel = std::variant<SelfAdjoint, PlanarAtomic, FiniteMatrix, Zero, HaarUnitary, QuasiNilpotentDT>;

inline PlanarAtomic make_planar(std::vector<std::pair<cplx, double>> atoms) {
  double m = 0;
  for (const auto& [z, w] : atoms) {
    if (!(w > 0)) fail(ErrorKind::InvalidMeasure, "planar atom weights must be positive");
    m += w;
  }
  if (std::abs(m - 1) > kMassTolerance) fail(ErrorKind::InvalidMeasure, "planar atom weights must sum to 1");
  return PlanarAtomic{std::move(atoms)};
}

inline FiniteMatrix make_matrix(Eigen::MatrixXcd a) {
  if (a.rows() != a.cols() || a.rows() == 0) fail(ErrorKind::InvalidArgument, "matrix must be square and non-empty");
  if (!a.allFinite()) fail(ErrorKind::InvalidArgument, "matrix entries must be finite");
  return FiniteMatrix{std::move(a)};
}

inline std::string model_name(const OperatorModel& op) {
  static const char* names[] = {"selfadjoint", "planar", "matrix", "zero", "haar_unitary", "dt"};
  return names[op.index()];
}

inline bool is_normal(const OperatorModel& op) {
  if (const auto* m = std::get_if<FiniteMatrix>(&op)) {
    const Eigen::MatrixXcd c = m->a * m->a.adjoint() - m->a.adjoint() * m->a;
    return c.norm() <= 1e-12 * std::max(1.0, m->a.squaredNorm());
  }
  return !std::holds_alternative<QuasiNilpotentDT>(op);
}

inline Measure1D measure_from_json(const nlohmann::json& j) {
  std::vector<Atom> atoms;
  std::vector<DensityPiece> pieces;
  if (j.contains("atoms"))
    for (const auto& a : j.at("atoms")) {
      if (!a.is_array() || a.size() != 2) fail(ErrorKind::ConfigError, "atoms must be [x, weight] pairs");
      atoms.push_back({a[0].get<double>(), a[1].get<double>()});
    }
  if (j.contains("pieces"))
    for (const auto& p : j.at("pieces"))
      pieces.push_back({p.at("a").get<double>(), p.at("b").get<double>(), p.at("samples").get<std::vector<double>>()});
  return Measure1D(std::move(atoms), std::move(pieces));
}

/// Parses {"type": "selfadjoint"|"planar"|"matrix"|"zero"|"haar_unitary"|"dt", ...}.
inline OperatorModel operator_from_json(const nlohmann::json& j) {
  try {
    const auto type = j.at("type").get<std::string>();
    if (type == "selfadjoint") return SelfAdjoint{measure_from_json(j)};
    if (type == "planar") {
      std::vector<std::pair<cplx, double>> atoms;
      for (const auto& a : j.at("atoms")) {
        if (!a.is_array() || a.size() != 3) fail(ErrorKind::ConfigError, "planar atoms must be [re, im, weight]");
        atoms.emplace_back(cplx(a[0].get<double>(), a[1].get<double>()), a[2].get<double>());
      }
      return make_planar(std::move(atoms));
    }
    if (type == "matrix") {
      const auto n = j.at("n").get<long>();
      const auto re = j.at("entries_re").get<std::vector<double>>();
      auto im = j.value("entries_im", std::vector<double>(re.size(), 0.0));
      if (n <= 0 || re.size() != static_cast<std::size_t>(n * n) || im.size() != re.size())
        fail(ErrorKind::ConfigError, "matrix needs n*n real and imaginary entries");
      Eigen::MatrixXcd a(n, n);
      for (long r = 0; r < n; ++r)
        for (long c = 0; c < n; ++c) a(r, c) = cplx(re[r * n + c], im[r * n + c]);
      return make_matrix(std::move(a));
    }
    if (type == "zero") return Zero{};
    if (type == "haar_unitary") return HaarUnitary{};
    if (type == "dt") return QuasiNilpotentDT{};
    fail(ErrorKind::ConfigError, "unknown operator type '" + type + "'");
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::ConfigError, std::string("bad operator description: ") + e.what());
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::ConfigError) throw;
    fail(ErrorKind::ConfigError, e.what());
  }
}

inline nlohmann::json operator_to_json(const OperatorModel& op) {
  nlohmann::json j;
  j["type"] = model_name(op);
  if (const auto* s = std::get_if<SelfAdjoint>(&op)) {
    j["atoms"] = nlohmann::json::array();
    for (const auto& a : s->mu.atoms()) j["atoms"].push_back({a.x, a.w});
    for (const auto& p : s->mu.pieces()) j["pieces"].push_back({{"a", p.a}, {"b", p.b}, {"samples", p.samples}});
  } else if (const auto* p = std::get_if<PlanarAtomic>(&op)) {
    j["atoms"] = nlohmann::json::array();
    for (const auto& [z, w] : p->atoms) j["atoms"].push_back({z.real(), z.imag(), w});
  } else if (const auto* m = std::get_if<FiniteMatrix>(&op)) {
    const long n = m->a.rows();
    std::vector<double> re, im;
    for (long r = 0; r < n; ++r)
      for (long c = 0; c < n; ++c) {
        re.push_back(m->a(r, c).real());
        im.push_back(m->a(r, c).imag());
      }
    j["n"] = n;
    j["entries_re"] = re;
    j["entries_im"] = im;
  }
  return j;
}

}  // namespace brownlab
