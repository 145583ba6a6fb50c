#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

#include "jamscan/cyclo/coherence.hpp"
#include "jamscan/cyclo/profile.hpp"
#include "jamscan/io/bytes.hpp"
#include "jamscan/localize/fusion.hpp"

namespace jamscan::io {

// Dense real grid with one axis value per row and per column.
struct Grid2D {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> row_axis;
  std::vector<double> col_axis;
  std::vector<double> values;  // row-major

  double at(std::size_t r, std::size_t c) const { return values[r * cols + c]; }
};

inline void validate(const Grid2D& g) {
  if (g.row_axis.size() != g.rows || g.col_axis.size() != g.cols || g.values.size() != g.rows * g.cols)
    throw InputError("grid axes or values do not match its dimensions");
}

// rows: spectral frequency (Hz); cols: normalized cyclic frequency.
inline Grid2D to_grid(const cyclo::SpectralCorrelation& s) {
  return {s.rows, s.cols, s.freq_axis, s.alpha_axis, s.values};
}

inline Grid2D to_grid(const cyclo::CoherenceMap& m) { return {m.rows, m.cols, m.freq_axis, m.alpha_axis, m.values}; }

// One row; the row axis holds the source tow.
inline Grid2D to_grid(const cyclo::AlphaProfile& p) {
  return {1, p.size(), {p.source_tow}, p.alpha_axis, p.values};
}

// rows: northing of cell centres; cols: easting of cell centres.
inline Grid2D to_grid(const localize::Heatmap& h) {
  Grid2D g{h.grid.rows, h.grid.cols, {}, {}, h.values};
  for (std::size_t r = 0; r < g.rows; ++r) g.row_axis.push_back(h.grid.cell_center(r, 0).y);
  for (std::size_t c = 0; c < g.cols; ++c) g.col_axis.push_back(h.grid.cell_center(0, c).x);
  return g;
}

// "JSGRID01" | u64 rows | u64 cols | rows x f64 | cols x f64 | rows*cols x f64, little-endian.
inline constexpr char kGridMagic[8] = {'J', 'S', 'G', 'R', 'I', 'D', '0', '1'};

inline Bytes write_grid(const Grid2D& g) {
  validate(g);
  ByteWriter out;
  out.raw(kGridMagic, 8);
  out.put<std::uint64_t>(g.rows);
  out.put<std::uint64_t>(g.cols);
  for (double v : g.row_axis) out.put<double>(v);
  for (double v : g.col_axis) out.put<double>(v);
  for (double v : g.values) out.put<double>(v);
  return out.take();
}

inline Grid2D parse_grid(const Bytes& bytes) {
  if (bytes.size() < 8 || std::memcmp(bytes.data(), kGridMagic, 8) != 0) throw FormatError("not a grid file: bad magic");
  ByteReader in(bytes);
  char magic[8];
  in.raw(magic, 8);
  Grid2D g;
  const auto rows = in.get<std::uint64_t>();
  const auto cols = in.get<std::uint64_t>();
  // guard the size arithmetic before allocating
  const std::uint64_t avail = in.remaining() / 8;
  if (rows > avail || cols > avail || (cols != 0 && rows > avail / cols) || rows + cols + rows * cols > avail)
    throw CorruptionError("grid body is truncated");
  g.rows = static_cast<std::size_t>(rows);
  g.cols = static_cast<std::size_t>(cols);
  g.row_axis.resize(g.rows);
  g.col_axis.resize(g.cols);
  g.values.resize(g.rows * g.cols);
  for (auto& v : g.row_axis) v = in.get<double>();
  for (auto& v : g.col_axis) v = in.get<double>();
  for (auto& v : g.values) v = in.get<double>();
  if (in.remaining() != 0) throw CorruptionError("trailing bytes after the grid body");
  return g;
}

// First line: an empty corner cell followed by the column axis; then one line
// per row, led by its axis value. Values use 17 significant digits.
inline std::string write_grid_csv(const Grid2D& g) {
  validate(g);
  std::string out;
  char buf[32];
  auto num = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    out += buf;
  };
  out += "axis";
  for (double v : g.col_axis) {
    out += ',';
    num(v);
  }
  out += '\n';
  for (std::size_t r = 0; r < g.rows; ++r) {
    num(g.row_axis[r]);
    for (std::size_t c = 0; c < g.cols; ++c) {
      out += ',';
      num(g.at(r, c));
    }
    out += '\n';
  }
  return out;
}

// Binary PPM (P6) rendering, min-max scaled through a black-red-yellow-white
// ramp. With `north_up` the last row is drawn at the top, which suits heatmaps
// whose row axis is northing.
inline Bytes render_ppm(const Grid2D& g, bool north_up = true) {
  validate(g);
  if (g.rows == 0 || g.cols == 0) throw InputError("cannot render an empty grid");
  const auto [lo_it, hi_it] = std::minmax_element(g.values.begin(), g.values.end());
  const double lo = *lo_it, span = *hi_it - *lo_it;
  const std::string head = "P6\n" + std::to_string(g.cols) + " " + std::to_string(g.rows) + "\n255\n";
  Bytes out(head.begin(), head.end());
  out.reserve(out.size() + 3 * g.values.size());
  auto channel = [](double t) { return static_cast<std::uint8_t>(std::lround(255.0 * std::clamp(t, 0.0, 1.0))); };
  for (std::size_t i = 0; i < g.rows; ++i) {
    const std::size_t r = north_up ? g.rows - 1 - i : i;
    for (std::size_t c = 0; c < g.cols; ++c) {
      const double t = span > 0.0 ? (g.at(r, c) - lo) / span : 0.0;
      out.push_back(channel(3.0 * t));
      out.push_back(channel(3.0 * t - 1.0));
      out.push_back(channel(3.0 * t - 2.0));
    }
  }
  return out;
}

}  // namespace jamscan::io
