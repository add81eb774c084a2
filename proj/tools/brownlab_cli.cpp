#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "brownlab/brown_circular.hpp"
#include "brownlab/operator_model.hpp"
#include "brownlab/pushforward.hpp"
#include "brownlab/randmat.hpp"
#include "brownlab/selfadjoint.hpp"
#include "brownlab/special_operators.hpp"
#include "cli_io.hpp"

using namespace brownlab;
using nlohmann::json;

namespace {

// 0 silent, 1 progress (default), 2 debug.
int log_level() {
  static const int level = [] {
    const char* v = std::getenv("BROWNLAB_LOG");
    if (!v) return 1;
    const std::string s(v);
    if (s == "0" || s == "quiet" || s == "off") return 0;
    if (s == "2" || s == "debug") return 2;
    return 1;
  }();
  return level;
}
void info(const std::string& m) {
  if (log_level() >= 1) std::cerr << "[brownlab] " << m << '\n';
}
void debug(const std::string& m) {
  if (log_level() >= 2) std::cerr << "[brownlab:debug] " << m << '\n';
}

struct Flags {
  std::optional<std::string> config, out, grid;
  std::optional<double> t, gamma_re, gamma_im, eps;
  std::optional<std::size_t> n;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> threads;
  bool svg = false;
  std::vector<std::string> files;  // compare only
};

struct RunConfig {
  OperatorModel op = Zero{};
  double t = 1;
  cplx gamma = 0;
  double eps = 0;
  GridSpec grid;
  std::string out = "brownlab";
  std::uint64_t seed = 0;
  std::size_t n = 0;
  unsigned threads = 1;
  bool svg = false;
  int bins = 0;
};

GridSpec parse_grid(const std::string& s) {
  std::vector<double> v;
  std::stringstream ss(s);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    try {
      v.push_back(std::stod(cell));
    } catch (const std::exception&) {
      fail(ErrorKind::ConfigError, "--grid expects NX,NY,XMIN,XMAX,YMIN,YMAX");
    }
  }
  if (v.size() != 6) fail(ErrorKind::ConfigError, "--grid expects NX,NY,XMIN,XMAX,YMIN,YMAX");
  return {v[2], v[3], v[4], v[5], static_cast<int>(v[0]), static_cast<int>(v[1])};
}

// Half-width that holds the Brown measure of x0 + g_{t,gamma}.
double default_extent(const OperatorModel& op, double t, cplx gamma) {
  const double spread = std::sqrt(t) + std::abs(gamma) / std::sqrt(t);
  double b = 1;
  if (const auto* s = std::get_if<SelfAdjoint>(&op)) b = std::max(std::abs(s->mu.support_min()), std::abs(s->mu.support_max()));
  if (const auto* p = std::get_if<PlanarAtomic>(&op))
    for (const auto& [z, w] : p->atoms) b = std::max(b, std::abs(z));
  if (const auto* m = std::get_if<FiniteMatrix>(&op)) b = Eigen::JacobiSVD<Eigen::MatrixXcd>(m->a).singularValues()(0);
  if (std::holds_alternative<Zero>(op)) b = 0;
  return 1.1 * (b + spread);
}

RunConfig load_config(const Flags& f) {
  RunConfig c;
  json j = json::object();
  if (f.config) {
    std::ifstream in(*f.config);
    if (!in) fail(ErrorKind::ConfigError, "cannot read config " + *f.config);
    try {
      j = json::parse(in);
    } catch (const json::exception& e) {
      fail(ErrorKind::ConfigError, std::string("config is not valid JSON: ") + e.what());
    }
  }
  std::optional<GridSpec> grid;
  try {
    if (j.contains("operator")) c.op = operator_from_json(j.at("operator"));
    c.t = j.value("t", c.t);
    if (j.contains("gamma")) {
      const auto& g = j.at("gamma");
      c.gamma = g.is_array() ? cplx(g.at(0).get<double>(), g.at(1).get<double>())
                             : cplx(g.value("re", 0.0), g.value("im", 0.0));
    }
    c.eps = j.value("eps", c.eps);
    if (j.contains("grid")) {
      const auto& g = j.at("grid");
      grid = GridSpec{g.at("xmin").get<double>(), g.at("xmax").get<double>(), g.at("ymin").get<double>(),
                      g.at("ymax").get<double>(), g.at("nx").get<int>(), g.at("ny").get<int>()};
    }
    c.out = j.value("output", c.out);
    c.seed = j.value("seed", c.seed);
    c.n = j.value("n", c.n);
    c.threads = j.value("threads", 0u);
    c.svg = j.value("svg", false);
    c.bins = j.value("bins", 0);
  } catch (const json::exception& e) {
    fail(ErrorKind::ConfigError, std::string("bad config field: ") + e.what());
  }

  if (f.t) c.t = *f.t;
  if (f.gamma_re) c.gamma.real(*f.gamma_re);
  if (f.gamma_im) c.gamma.imag(*f.gamma_im);
  if (f.eps) c.eps = *f.eps;
  if (f.grid) grid = parse_grid(*f.grid);
  if (f.out) c.out = *f.out;
  if (f.seed) c.seed = *f.seed;
  if (f.n) c.n = *f.n;
  if (f.threads) c.threads = *f.threads;
  if (f.svg) c.svg = true;
  if (c.threads == 0) c.threads = std::max(1u, std::thread::hardware_concurrency());

  if (!(c.t > 0) || !std::isfinite(c.t)) fail(ErrorKind::ConfigError, "t must be positive");
  if (std::abs(c.gamma) > c.t) fail(ErrorKind::ConfigError, "|gamma| must not exceed t");
  if (!(c.eps >= 0)) fail(ErrorKind::ConfigError, "eps must be non-negative");
  if (c.bins < 0) fail(ErrorKind::ConfigError, "bins must be non-negative");
  if (grid) {
    c.grid = *grid;
  } else {
    const double r = default_extent(c.op, c.t, c.gamma);
    c.grid = {-r, r, -r, r, 101, 101};
  }
  if (c.grid.nx < 2 || c.grid.ny < 2 || !(c.grid.xmax > c.grid.xmin) || !(c.grid.ymax > c.grid.ymin))
    fail(ErrorKind::ConfigError, "grid needs resolution >= 2 and non-empty bounds");
  debug("operator " + model_name(c.op) + ", t " + cli::num(c.t) + ", threads " + std::to_string(c.threads));
  return c;
}

json grid_json(const GridSpec& g) {
  return {{"nx", g.nx}, {"ny", g.ny}, {"xmin", g.xmin}, {"xmax", g.xmax}, {"ymin", g.ymin}, {"ymax", g.ymax}};
}

std::string path(const RunConfig& c, const std::string& suffix) { return c.out + "_" + suffix; }

void wrote(const std::string& p) { info("wrote " + p); }

// Mass landing in each cell of `grid`, as a density; NaN where nothing lands.
DensityGrid transported_grid(const PushforwardField& f, double src_cell_area, const GridSpec& grid) {
  DensityGrid g;
  g.grid = grid;
  g.values.assign(grid.size(), 0.0);
  g.mask.assign(grid.size(), 0);
  g.cell_area = grid.dx() * grid.dy();
  for (const auto& p : f.points) {
    const int i = static_cast<int>(std::floor((p.z.real() - grid.xmin) / grid.dx()));
    const int j = static_cast<int>(std::floor((p.z.imag() - grid.ymin) / grid.dy()));
    if (i < 0 || j < 0 || i >= grid.nx || j >= grid.ny) continue;
    const std::size_t k = static_cast<std::size_t>(j) * grid.nx + i;
    g.values[k] += p.src * src_cell_area / g.cell_area;
    g.mask[k] = 1;
  }
  for (std::size_t k = 0; k < g.values.size(); ++k) {
    if (g.mask[k]) {
      g.mass += g.values[k] * g.cell_area;
    } else {
      g.values[k] = kNaN;
    }
  }
  return g;
}

std::vector<double> histogram(const std::vector<cplx>& pts, const GridSpec& grid) {
  std::vector<double> h(grid.size(), kNaN);
  for (const auto& z : pts) {
    const int i = static_cast<int>(std::floor((z.real() - grid.xmin) / grid.dx()));
    const int j = static_cast<int>(std::floor((z.imag() - grid.ymin) / grid.dy()));
    if (i < 0 || j < 0 || i >= grid.nx || j >= grid.ny) continue;
    double& v = h[static_cast<std::size_t>(j) * grid.nx + i];
    v = std::isnan(v) ? 1 : v + 1;
  }
  return h;
}

void svg(const RunConfig& c, const std::string& suffix, const std::vector<double>& v, const GridSpec& g) {
  if (!c.svg) return;
  cli::write_svg_heatmap(path(c, suffix), v, g.nx, g.ny, g.xmin, g.xmax, g.ymin, g.ymax);
  wrote(path(c, suffix));
}

void write_profile(const RunConfig& c, const SelfAdjoint& s) {
  const BianeMaps m(s.mu, c.t);
  const bool degenerate = std::abs(std::abs(c.gamma) - c.t) <= 1e-15 * c.t;
  auto prof = biane_profile(m, degenerate ? cplx(0) : c.gamma);
  if (degenerate) std::fill(prof.delta.begin(), prof.delta.end(), kNaN);
  cli::CsvWriter csv(path(c, "profile.csv"), {"a", "v", "psi", "h", "delta"});
  for (std::size_t k = 0; k < prof.a.size(); ++k) csv.row({prof.a[k], prof.v[k], prof.psi[k], prof.h[k], prof.delta[k]});
  wrote(path(c, "profile.csv"));
}

int cmd_domain(const RunConfig& c) {
  const auto& g = c.grid;
  std::vector<SubordinationResult> w0(g.size());
  std::vector<double> weps(g.size(), kNaN);
  parallel_for(g.size(), c.threads, [&](std::size_t k) {
    const ShiftedOperator x(c.op, g.point(static_cast<int>(k % g.nx), static_cast<int>(k / g.nx)));
    w0[k] = solve_w0(x, c.t);
    if (c.eps > 0) weps[k] = solve_w(x, c.t, c.eps).w;
  });
  std::vector<std::string> header{"x", "y", "in_xi", "w0"};
  if (c.eps > 0) header.push_back("w_eps");
  {
    cli::CsvWriter csv(path(c, "domain.csv"), header);
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i) {
        const std::size_t k = static_cast<std::size_t>(j) * g.nx + i;
        const double in = w0[k].in_xi ? 1 : 0;
        if (c.eps > 0) {
          csv.row({g.x(i), g.y(j), in, w0[k].w, weps[k]});
        } else {
          csv.row({g.x(i), g.y(j), in, w0[k].w});
        }
      }
  }
  wrote(path(c, "domain.csv"));

  std::size_t inside = 0;
  double max_res = 0;
  int max_it = 0;
  std::vector<double> shade(g.size(), kNaN);
  for (std::size_t k = 0; k < g.size(); ++k) {
    if (!w0[k].in_xi) continue;
    ++inside;
    shade[k] = w0[k].w;
    max_res = std::max(max_res, w0[k].residual);
    max_it = std::max(max_it, w0[k].iterations);
  }
  const json summary{{"operator", operator_to_json(c.op)},
                     {"t", c.t},
                     {"grid", grid_json(g)},
                     {"cells_inside", inside},
                     {"area_inside", static_cast<double>(inside) * g.dx() * g.dy()},
                     {"diagnostics", {{"max_residual", max_res}, {"max_iterations", max_it}}}};
  cli::write_json(path(c, "domain.json"), summary);
  wrote(path(c, "domain.json"));
  svg(c, "domain.svg", shade, g);
  if (const auto* s = std::get_if<SelfAdjoint>(&c.op)) write_profile(c, *s);
  return 0;
}

void write_density(const RunConfig& c, const DensityGrid& d, const std::string& stem) {
  const auto& g = d.grid;
  {
    cli::CsvWriter csv(path(c, stem + ".csv"), {"x", "y", "in_xi", "density"});
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i) csv.row({g.x(i), g.y(j), d.inside(i, j) ? 1.0 : 0.0, d.at(i, j)});
  }
  wrote(path(c, stem + ".csv"));
  json values = json::array();
  for (double v : d.values) values.push_back(cli::jnum(v));
  const json j{{"grid", grid_json(g)}, {"cell_area", d.cell_area}, {"mass", d.mass},
               {"mask", d.mask},       {"values", values}};
  cli::write_json(path(c, stem + ".json"), j);
  wrote(path(c, stem + ".json"));
  svg(c, stem + ".svg", d.values, g);
}

int cmd_density(const RunConfig& c) {
  const auto d = density_grid(c.op, c.t, c.grid, c.threads);
  info("grid mass " + cli::num(d.mass));
  write_density(c, d, "density");
  return 0;
}

int cmd_pushforward(const RunConfig& c) {
  const EllipticParams e(c.t, c.gamma);
  const auto src = density_grid(c.op, c.t, c.grid, c.threads);
  const auto field = pushforward_density(c.op, e, src, c.threads);
  {
    cli::CsvWriter csv(path(c, "pushforward.csv"), {"lx", "ly", "zx", "zy", "jac", "src", "dst"});
    for (const auto& p : field.points)
      csv.row({p.lambda.real(), p.lambda.imag(), p.z.real(), p.z.imag(), p.jac, p.src, p.dst});
  }
  wrote(path(c, "pushforward.csv"));
  json summary{{"t", c.t},
               {"gamma", {c.gamma.real(), c.gamma.imag()}},
               {"grid", grid_json(c.grid)},
               {"source_mass", field.source_mass},
               {"transported_mass", field.transported_mass},
               {"singular_cells", field.singular_cells}};
  if (field.needs_point_cloud()) {
    const std::size_t n = c.n ? c.n : 20000;
    info(std::to_string(field.singular_cells) + " singular cells, switching to a point cloud of " + std::to_string(n));
    const auto pc = pushforward_pointcloud(c.op, e, src, n, c.seed, c.threads);
    {
      cli::CsvWriter csv(path(c, "pointcloud.csv"), {"re", "im"});
      for (const auto& z : pc.image) csv.row({z.real(), z.imag()});
    }
    wrote(path(c, "pointcloud.csv"));
    summary["mode"] = "pointcloud";
    summary["samples"] = n;
    summary["acceptance_rate"] = pc.acceptance_rate;
    svg(c, "pushforward.svg", histogram(pc.image, c.grid), c.grid);
  } else {
    summary["mode"] = "field";
    svg(c, "pushforward.svg", transported_grid(field, src.cell_area, c.grid).values, c.grid);
  }
  cli::write_json(path(c, "pushforward.json"), summary);
  wrote(path(c, "pushforward.json"));
  return 0;
}

// Radial CDF of the Brown measure of x0 + c_t, where one is known in closed form.
std::function<double(double)> radial_cdf(const OperatorModel& op, double t) {
  if (std::holds_alternative<Zero>(op)) return [t](double r) { return std::min(1.0, r * r / t); };
  if (std::holds_alternative<HaarUnitary>(op)) return [t](double r) { return haar_cdf(r, t); };
  if (std::holds_alternative<QuasiNilpotentDT>(op))
    return [t](double r) { return std::min(1.0, r * r * std::log1p(1 / t)); };
  return {};
}

int cmd_closed_form(const RunConfig& c) {
  if (const auto* s = std::get_if<SelfAdjoint>(&c.op)) {
    write_profile(c, *s);
    return 0;
  }
  const auto cdf = radial_cdf(c.op, c.t);
  if (!cdf) fail(ErrorKind::ConfigError, "no closed form for operator type " + model_name(c.op));
  double lo = 0, hi = std::sqrt(c.t);
  json summary{{"operator", model_name(c.op)}, {"t", c.t}, {"gamma", {c.gamma.real(), c.gamma.imag()}}};
  if (std::holds_alternative<HaarUnitary>(c.op)) {
    lo = haar_inner_radius(c.t);
    hi = haar_outer_radius(c.t);
    summary["inner_radius"] = lo;
  } else if (std::holds_alternative<QuasiNilpotentDT>(c.op)) {
    hi = dt_radius(c.t);
    summary["density"] = dt_density(c.t);
  } else {
    summary["density"] = 1 / (kPi * c.t);
  }
  summary["outer_radius"] = hi;
  const int rows = c.n ? static_cast<int>(c.n) : 64;
  {
    cli::CsvWriter csv(path(c, "closed_form.csv"), {"r", "cdf", "major", "minor"});
    for (int k = 0; k < rows; ++k) {
      // r = 0 is skipped when the support reaches the origin.
      const double r = lo == 0 || rows == 1 ? hi * (k + 1) / rows : lo + (hi - lo) * k / (rows - 1);
      const auto ax = phi_rdiag(r, cdf(r), c.gamma);
      csv.row({r, cdf(r), ax.major, ax.minor});
    }
  }
  wrote(path(c, "closed_form.csv"));
  const auto outer = phi_rdiag(hi, 1.0, c.gamma);
  summary["outer_axes"] = {{"major", outer.major}, {"minor", outer.minor}};
  cli::write_json(path(c, "closed_form.json"), summary);
  wrote(path(c, "closed_form.json"));
  return 0;
}

// n x n realisation of x0 with the same spectral data.
Eigen::MatrixXcd x0_matrix(const RunConfig& c, std::size_t n) {
  const long N = static_cast<long>(n);
  auto diag_from = [&](const std::vector<std::pair<cplx, double>>& atoms) {
    Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(N, N);
    long k = 0;
    double acc = 0;
    for (const auto& [z, w] : atoms) {
      acc += w;
      const long upto = std::min(N, static_cast<long>(std::llround(acc * static_cast<double>(n))));
      for (; k < upto; ++k) a(k, k) = z;
    }
    for (; k < N; ++k) a(k, k) = atoms.back().first;
    return a;
  };
  if (std::holds_alternative<Zero>(c.op)) return Eigen::MatrixXcd::Zero(N, N);
  if (const auto* s = std::get_if<SelfAdjoint>(&c.op)) {
    if (!s->mu.pieces().empty()) fail(ErrorKind::ConfigError, "simulate needs a purely atomic selfadjoint law");
    std::vector<std::pair<cplx, double>> atoms;
    for (const auto& a : s->mu.atoms()) atoms.emplace_back(a.x, a.w);
    return diag_from(atoms);
  }
  if (const auto* p = std::get_if<PlanarAtomic>(&c.op)) return diag_from(p->atoms);
  if (const auto* m = std::get_if<FiniteMatrix>(&c.op)) {
    const long b = m->a.rows();
    if (N % b != 0) fail(ErrorKind::ConfigError, "n must be a multiple of the matrix size");
    Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(N, N);
    for (long k = 0; k < N; k += b) a.block(k, k, b, b) = m->a;
    return a;
  }
  EnsembleSpec spec;
  spec.n = n;
  spec.seed = c.seed;
  spec.kind = std::holds_alternative<HaarUnitary>(c.op) ? EnsembleKind::HaarUnitary : EnsembleKind::DtUpper;
  return sample(spec);
}

int cmd_simulate(const RunConfig& c) {
  const std::size_t n = c.n ? c.n : 512;
  EnsembleSpec noise;
  noise.n = n;
  noise.t = c.t;
  noise.gamma = c.gamma;
  noise.seed = c.seed;
  noise.kind = c.gamma == cplx(0) ? EnsembleKind::Ginibre : EnsembleKind::Elliptic;
  const Eigen::MatrixXcd a = x0_matrix(c, n) + sample(noise);
  const auto eigs = eigenvalues(a);
  {
    cli::CsvWriter csv(path(c, "eigs.csv"), {"re", "im"});
    for (const auto& z : eigs) csv.row({z.real(), z.imag()});
  }
  wrote(path(c, "eigs.csv"));

  const auto src = density_grid(c.op, c.t, c.grid, c.threads);
  DensityGrid theory = src;
  std::function<double(double)> cdf;
  if (c.gamma == cplx(0)) {
    cdf = radial_cdf(c.op, c.t);
  } else {
    const auto field = pushforward_density(c.op, EllipticParams(c.t, c.gamma), src, c.threads);
    theory = transported_grid(field, src.cell_area, c.grid);
  }
  const auto rep = esd_compare(eigs, theory, cdf, c.bins);
  info("binned_tv " + cli::num(rep.binned_tv) + (cdf ? ", radial_ks " + cli::num(rep.radial_ks) : ""));
  const json j{{"n", rep.n},
               {"seed", c.seed},
               {"t", c.t},
               {"gamma", {c.gamma.real(), c.gamma.imag()}},
               {"bins", rep.bins},
               {"binned_tv", cli::jnum(rep.binned_tv)},
               {"radial_ks", cli::jnum(rep.radial_ks)},
               {"box", {{"xmin", rep.xmin}, {"xmax", rep.xmax}, {"ymin", rep.ymin}, {"ymax", rep.ymax}}},
               {"theory_mass", theory.mass}};
  cli::write_json(path(c, "esd.json"), j);
  wrote(path(c, "esd.json"));
  svg(c, "eigs.svg", histogram(eigs, c.grid), c.grid);
  return 0;
}

int cmd_compare(const Flags& f) {
  if (f.files.size() != 2) fail(ErrorKind::ConfigError, "compare needs exactly two CSV files");
  const auto j = cli::compare_tables(cli::read_csv(f.files[0]), cli::read_csv(f.files[1]));
  std::cout << j.dump(2) << '\n';
  if (f.out) {
    cli::write_json(*f.out + "_compare.json", j);
    wrote(*f.out + "_compare.json");
  }
  return 0;
}

void add_common(CLI::App* s, Flags& f) {
  s->add_option("--config", f.config, "JSON run configuration");
  s->add_option("--out", f.out, "Output path prefix");
  s->add_option("--t", f.t, "Variance of the circular part");
  s->add_option("--gamma-re", f.gamma_re, "Re gamma");
  s->add_option("--gamma-im", f.gamma_im, "Im gamma");
  s->add_option("--eps", f.eps, "Regularisation epsilon");
  s->add_option("--grid", f.grid, "NX,NY,XMIN,XMAX,YMIN,YMAX");
  s->add_option("--n", f.n, "Matrix size, sample count or table rows");
  s->add_option("--seed", f.seed, "Random seed");
  s->add_option("--threads", f.threads, "Worker threads (default: hardware)");
  s->add_flag("--svg", f.svg, "Also write SVG heatmaps");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Brown measures of x0 plus circular and elliptic elements"};
  app.require_subcommand(1);
  Flags f;
  auto* domain = app.add_subcommand("domain", "Xi_t mask and, for selfadjoint x0, the v_t profile");
  auto* density = app.add_subcommand("density", "Brown density grid for x0 + c_t");
  auto* push = app.add_subcommand("pushforward", "Density of x0 + g_{t,gamma} via the pushforward map");
  auto* closed = app.add_subcommand("closed-form", "Tabulate closed forms for the operator");
  auto* simulate = app.add_subcommand("simulate", "Random-matrix eigenvalues compared with theory");
  auto* compare = app.add_subcommand("compare", "Difference metrics between two CSV files");
  for (auto* s : {domain, density, push, closed, simulate}) add_common(s, f);
  compare->add_option("files", f.files, "Two CSV files")->expected(2)->required();
  compare->add_option("--out", f.out, "Output path prefix");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (compare->parsed()) return cmd_compare(f);
    const RunConfig c = load_config(f);
    if (domain->parsed()) return cmd_domain(c);
    if (density->parsed()) return cmd_density(c);
    if (push->parsed()) return cmd_pushforward(c);
    if (closed->parsed()) return cmd_closed_form(c);
    if (simulate->parsed()) return cmd_simulate(c);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.is_config() ? 2 : 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
  return 2;
}
