#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "brownlab/error.hpp"

namespace brownlab::cli {

/// 17 significant digits; NaN becomes the empty string (CSV convention).
inline std::string num(double v) {
  if (std::isnan(v)) return {};
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

/// NaN and infinities serialise as null.
inline nlohmann::json jnum(double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); }

inline std::ofstream open_out(const std::string& path) {
  const auto parent = std::filesystem::path(path).parent_path();
  if (!parent.empty()) std::filesystem::create_directories(parent);
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) fail(ErrorKind::ConfigError, "cannot write " + path);
  return f;
}

class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::vector<std::string>& header) : f_(open_out(path)) {
    row_strings(header);
  }
  void row(std::initializer_list<double> values) {
    bool first = true;
    for (double v : values) {
      if (!first) f_ << ',';
      f_ << num(v);
      first = false;
    }
    f_ << '\n';
  }

 private:
  void row_strings(const std::vector<std::string>& s) {
    for (std::size_t k = 0; k < s.size(); ++k) f_ << (k ? "," : "") << s[k];
    f_ << '\n';
  }
  std::ofstream f_;
};

inline void write_json(const std::string& path, const nlohmann::json& j) {
  auto f = open_out(path);
  f << j.dump(2) << '\n';
}

// ---------------------------------------------------------------------------
// CSV reading for `compare`.

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;  // empty fields read as NaN
};

inline Table read_csv(const std::string& path) {
  std::ifstream f(path);
  if (!f) fail(ErrorKind::ConfigError, "cannot read " + path);
  Table t;
  std::string line;
  auto split = [](const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string cell;
    while (std::getline(ss, cell, ',')) out.push_back(cell);
    if (!s.empty() && s.back() == ',') out.emplace_back();
    return out;
  };
  if (!std::getline(f, line)) fail(ErrorKind::ConfigError, path + " is empty");
  t.header = split(line);
  while (std::getline(f, line)) {
    if (line.empty()) continue;
    const auto cells = split(line);
    if (cells.size() != t.header.size()) fail(ErrorKind::ConfigError, path + ": ragged row");
    std::vector<double> r;
    for (const auto& c : cells) {
      if (c.empty()) {
        r.push_back(std::numeric_limits<double>::quiet_NaN());
        continue;
      }
      try {
        std::size_t used = 0;
        r.push_back(std::stod(c, &used));
        if (used != c.size()) throw std::invalid_argument(c);
      } catch (const std::exception&) {
        fail(ErrorKind::ConfigError, path + ": non-numeric field '" + c + "'");
      }
    }
    t.rows.push_back(std::move(r));
  }
  return t;
}

/// Per-column max/mean absolute differences, plus the number of rows where
/// exactly one side is empty.
inline nlohmann::json compare_tables(const Table& a, const Table& b) {
  if (a.header != b.header) fail(ErrorKind::ConfigError, "CSV headers differ");
  if (a.rows.size() != b.rows.size()) fail(ErrorKind::ConfigError, "CSV row counts differ");
  nlohmann::json out;
  out["rows"] = a.rows.size();
  double worst = 0;
  for (std::size_t c = 0; c < a.header.size(); ++c) {
    double mx = 0, sum = 0;
    std::size_t both = 0, one = 0;
    for (std::size_t r = 0; r < a.rows.size(); ++r) {
      const double x = a.rows[r][c], y = b.rows[r][c];
      if (std::isnan(x) != std::isnan(y)) {
        ++one;
      } else if (!std::isnan(x)) {
        const double d = std::abs(x - y);
        mx = std::max(mx, d);
        sum += d;
        ++both;
      }
    }
    worst = std::max(worst, mx);
    out["columns"][a.header[c]] = {{"max_abs_diff", mx},
                                   {"mean_abs_diff", both ? sum / static_cast<double>(both) : 0.0},
                                   {"empty_mismatch", one}};
  }
  out["max_abs_diff"] = worst;
  return out;
}

// ---------------------------------------------------------------------------
// SVG heatmap.

namespace detail {
// Anchor colours of the viridis map, every 1/8.
inline constexpr std::array<std::array<double, 3>, 9> kViridisAnchors{{
    {68, 1, 84}, {71, 44, 122}, {59, 81, 139}, {44, 113, 142}, {33, 144, 141},
    {39, 173, 129}, {92, 200, 99}, {170, 220, 50}, {253, 231, 37},
}};

constexpr std::array<std::array<unsigned char, 3>, 256> make_table() {
  std::array<std::array<unsigned char, 3>, 256> t{};
  for (int k = 0; k < 256; ++k) {
    const double s = k / 255.0 * 8;
    const int i = s >= 8 ? 7 : static_cast<int>(s);
    const double f = s - i;
    for (int c = 0; c < 3; ++c)
      t[k][c] = static_cast<unsigned char>(kViridisAnchors[i][c] * (1 - f) + kViridisAnchors[i + 1][c] * f + 0.5);
  }
  return t;
}
}  // namespace detail

inline constexpr auto kViridis = detail::make_table();

/// Cells with NaN are left transparent. Row j = 0 is the bottom edge.
inline void write_svg_heatmap(const std::string& path, const std::vector<double>& v, int nx, int ny, double xmin,
                              double xmax, double ymin, double ymax) {
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (double x : v)
    if (std::isfinite(x)) lo = std::min(lo, x), hi = std::max(hi, x);
  const int px = std::max(1, 600 / std::max(nx, ny));
  auto f = open_out(path);
  f << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << nx * px << "\" height=\"" << ny * px
    << "\" shape-rendering=\"crispEdges\">\n";
  f << "<desc>x [" << num(xmin) << ", " << num(xmax) << "] y [" << num(ymin) << ", " << num(ymax) << "] value ["
    << num(lo) << ", " << num(hi) << "]</desc>\n";
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      const double x = v[static_cast<std::size_t>(j) * nx + i];
      if (!std::isfinite(x)) continue;
      const bool flat = hi - lo <= 1e-9 * std::abs(hi);
      const int k = flat ? 128 : std::clamp(static_cast<int>((x - lo) / (hi - lo) * 255 + 0.5), 0, 255);
      char col[8];
      std::snprintf(col, sizeof col, "#%02x%02x%02x", kViridis[k][0], kViridis[k][1], kViridis[k][2]);
      f << "<rect x=\"" << i * px << "\" y=\"" << (ny - 1 - j) * px << "\" width=\"" << px << "\" height=\"" << px
        << "\" fill=\"" << col << "\"/>\n";
    }
  f << "</svg>\n";
}

}  // namespace brownlab::cli
