#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "jamscan/localize/fusion.hpp"

namespace jamscan::localize {

using Polyline = std::vector<Point>;

struct SourceEstimate {
  Point centroid;
  Point peak;
  std::vector<Polyline> contour;  // closed loops repeat their first point
  double level = 0.0;             // rescaled likelihood of the contour
  double confidence = 0.0;        // share of rescaled mass inside the contour
  std::size_t cells = 0;          // cells in the super-level set
};

namespace detail {

// Marching squares over cell centres at `level`. Saddles are split by the
// mean of the four corners. Segments are chained into polylines.
inline std::vector<Polyline> iso_contour(const std::vector<double>& v, const GridSpec& g, double level) {
  const std::size_t rows = g.rows, cols = g.cols;
  std::vector<std::pair<Point, Point>> segs;
  if (rows < 2 || cols < 2) return {};
  auto value = [&](std::size_t r, std::size_t c) { return v[r * cols + c]; };
  auto lerp = [&](std::size_t r0, std::size_t c0, std::size_t r1, std::size_t c1) {
    const double a = value(r0, c0), b = value(r1, c1);
    const double t = a == b ? 0.5 : (level - a) / (b - a);
    const Point p0 = g.cell_center(r0, c0), p1 = g.cell_center(r1, c1);
    return Point{p0.x + t * (p1.x - p0.x), p0.y + t * (p1.y - p0.y)};
  };
  for (std::size_t r = 0; r + 1 < rows; ++r) {
    for (std::size_t c = 0; c + 1 < cols; ++c) {
      // corners: 0 = (r, c), 1 = (r, c+1), 2 = (r+1, c+1), 3 = (r+1, c)
      const int idx = (value(r, c) >= level ? 1 : 0) | (value(r, c + 1) >= level ? 2 : 0) |
                      (value(r + 1, c + 1) >= level ? 4 : 0) | (value(r + 1, c) >= level ? 8 : 0);
      if (idx == 0 || idx == 15) continue;
      const Point bottom = lerp(r, c, r, c + 1);
      const Point right = lerp(r, c + 1, r + 1, c + 1);
      const Point top = lerp(r + 1, c, r + 1, c + 1);
      const Point left = lerp(r, c, r + 1, c);
      const double centre = 0.25 * (value(r, c) + value(r, c + 1) + value(r + 1, c + 1) + value(r + 1, c));
      switch (idx) {
        case 1: case 14: segs.emplace_back(left, bottom); break;
        case 2: case 13: segs.emplace_back(bottom, right); break;
        case 3: case 12: segs.emplace_back(left, right); break;
        case 4: case 11: segs.emplace_back(right, top); break;
        case 6: case 9: segs.emplace_back(bottom, top); break;
        case 7: case 8: segs.emplace_back(left, top); break;
        case 5:
          if (centre >= level) { segs.emplace_back(left, top); segs.emplace_back(bottom, right); }
          else { segs.emplace_back(left, bottom); segs.emplace_back(right, top); }
          break;
        case 10:
          if (centre >= level) { segs.emplace_back(left, bottom); segs.emplace_back(right, top); }
          else { segs.emplace_back(left, top); segs.emplace_back(bottom, right); }
          break;
        default: break;
      }
    }
  }

  // chain segments sharing endpoints
  using Key = std::pair<std::int64_t, std::int64_t>;
  const double q = g.cell_size * 1e-6;
  auto key = [&](Point p) { return Key{std::llround(p.x / q), std::llround(p.y / q)}; };
  std::multimap<Key, std::size_t> ends;
  for (std::size_t i = 0; i < segs.size(); ++i) {
    ends.emplace(key(segs[i].first), i);
    ends.emplace(key(segs[i].second), i);
  }
  std::vector<char> used(segs.size(), 0);
  auto take_next = [&](Point tail) -> std::optional<Point> {
    auto range = ends.equal_range(key(tail));
    for (auto it = range.first; it != range.second; ++it) {
      const std::size_t i = it->second;
      if (used[i]) continue;
      used[i] = 1;
      return key(segs[i].first) == key(tail) ? segs[i].second : segs[i].first;
    }
    return std::nullopt;
  };
  std::vector<Polyline> out;
  for (std::size_t i = 0; i < segs.size(); ++i) {
    if (used[i]) continue;
    used[i] = 1;
    Polyline line{segs[i].first, segs[i].second};
    while (auto nxt = take_next(line.back())) line.push_back(*nxt);
    Polyline head;
    while (auto prv = take_next(head.empty() ? line.front() : head.back())) head.push_back(*prv);
    if (!head.empty()) {
      std::reverse(head.begin(), head.end());
      head.insert(head.end(), line.begin(), line.end());
      line.swap(head);
    }
    out.push_back(std::move(line));
  }
  return out;
}

}  // namespace detail

inline constexpr double kDefaultSourceQuantile = 0.999;

// Min-max rescales the map to [0, 1], keeps the cells at or above the
// `quantile` of the rescaled values and returns their likelihood-weighted
// centroid, the argmax cell (lowest index on ties) and the contour of that
// super-level set. A map without contrast (all equal, including all zero)
// has no source.
inline std::optional<SourceEstimate> extract_source(const Heatmap& map, double quantile = kDefaultSourceQuantile) {
  if (!(quantile > 0.0 && quantile < 1.0)) throw DomainError("source quantile must lie in (0, 1)");
  if (map.values.empty()) return std::nullopt;
  const auto [mn_it, mx_it] = std::minmax_element(map.values.begin(), map.values.end());
  const double mn = *mn_it, mx = *mx_it;
  if (!(mx > mn) || !std::isfinite(mx - mn)) return std::nullopt;

  std::vector<double> r(map.values.size());
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = (map.values[i] - mn) / (mx - mn);
  std::vector<double> sorted = r;
  const auto k = static_cast<std::size_t>(std::floor(quantile * static_cast<double>(sorted.size() - 1)));
  std::nth_element(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(k), sorted.end());
  double level = sorted[k];
  // keep the set non-trivial when most of the map sits at the minimum
  if (!(level > 0.0)) level = std::numeric_limits<double>::min();

  SourceEstimate est;
  est.level = level;
  const auto& g = map.grid;
  const std::size_t peak = static_cast<std::size_t>(std::max_element(r.begin(), r.end()) - r.begin());
  est.peak = g.cell_center(peak / g.cols, peak % g.cols);

  double wsum = 0.0, total = 0.0, sx = 0.0, sy = 0.0;
  for (std::size_t i = 0; i < r.size(); ++i) {
    total += r[i];
    if (r[i] < level) continue;
    const Point p = g.cell_center(i / g.cols, i % g.cols);
    wsum += r[i];
    sx += r[i] * p.x;
    sy += r[i] * p.y;
    ++est.cells;
  }
  est.centroid = {sx / wsum, sy / wsum};
  est.confidence = total > 0.0 ? wsum / total : 0.0;
  est.contour = detail::iso_contour(r, g, level);
  return est;
}

}  // namespace jamscan::localize
