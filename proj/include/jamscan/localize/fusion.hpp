#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "jamscan/localize/pattern.hpp"

namespace jamscan::localize {

// Axis-aligned grid; cell (r, c) is centred at
// (origin.x + (c + 0.5) cell_size, origin.y + (r + 0.5) cell_size).
struct GridSpec {
  Point origin{-1500.0, -1500.0};  // south-west corner
  double cell_size = 10.0;
  std::size_t rows = 300;          // northward
  std::size_t cols = 300;          // eastward

  Point cell_center(std::size_t r, std::size_t c) const {
    return {origin.x + (static_cast<double>(c) + 0.5) * cell_size, origin.y + (static_cast<double>(r) + 0.5) * cell_size};
  }
  double width() const { return static_cast<double>(cols) * cell_size; }
  double height() const { return static_cast<double>(rows) * cell_size; }
  bool contains(Point p) const {
    return p.x >= origin.x && p.y >= origin.y && p.x <= origin.x + width() && p.y <= origin.y + height();
  }
};

inline void validate(const GridSpec& g) {
  if (!(g.cell_size > 0.0) || !std::isfinite(g.cell_size)) throw DomainError("grid cell size must be positive");
  if (g.rows == 0 || g.cols == 0) throw DomainError("grid must have at least one cell");
  if (!std::isfinite(g.origin.x) || !std::isfinite(g.origin.y)) throw DomainError("grid origin must be finite");
}

// Square grid of `cells` x `cells` centred on `center`.
inline GridSpec centered_grid(Point center, double cell_size, std::size_t cells) {
  const double half = 0.5 * cell_size * static_cast<double>(cells);
  return {{center.x - half, center.y - half}, cell_size, cells, cells};
}

struct Heatmap {
  GridSpec grid;
  std::vector<double> values;  // row-major, rows x cols
  std::size_t scans_accumulated = 0;
  bool finalized = false;

  double at(std::size_t r, std::size_t c) const { return values[r * grid.cols + c]; }
  double& at(std::size_t r, std::size_t c) { return values[r * grid.cols + c]; }
};

enum class FusionMode {
  Weighted,  // each heading contributes energy x gain
  Binary,    // each flagged heading contributes gain
};

inline FusionMode fusion_mode_from_string(std::string_view s) {
  if (s == "weighted") return FusionMode::Weighted;
  if (s == "binary") return FusionMode::Binary;
  throw ConfigurationError("unknown fusion mode '" + std::string(s) + "'");
}

inline std::string_view to_string(FusionMode m) { return m == FusionMode::Binary ? "binary" : "weighted"; }

// Running sum of scans; finalize() divides by the number of scans.
class HeatmapAccumulator {
 public:
  HeatmapAccumulator(GridSpec grid, RadiationPattern pattern, FusionMode mode = FusionMode::Weighted)
      : pattern_(std::move(pattern)), mode_(mode) {
    validate(grid);
    map_.grid = grid;
    map_.values.assign(grid.rows * grid.cols, 0.0);
  }

  void add(const ScanPose& pose) {
    validate(pose);
    if (map_.finalized) throw InputError("heatmap already finalized");
    const auto& g = map_.grid;
    if (!g.contains(pose.position)) throw DomainError("scan pose lies outside the grid");

    std::vector<double> weight(pose.headings.size());
    bool any = false;
    for (std::size_t h = 0; h < weight.size(); ++h) {
      const bool on = pose.mask.empty() || pose.mask[h] != 0;
      weight[h] = on ? (mode_ == FusionMode::Weighted ? pose.energies[h] : 1.0) : 0.0;
      any = any || weight[h] != 0.0;
    }
    ++map_.scans_accumulated;
    if (!any) return;

    for (std::size_t r = 0; r < g.rows; ++r) {
      for (std::size_t c = 0; c < g.cols; ++c) {
        const double b = bearing(pose.position, g.cell_center(r, c));
        double acc = 0.0;
        for (std::size_t h = 0; h < weight.size(); ++h)
          if (weight[h] != 0.0) acc += weight[h] * pattern_.gain(pose.headings[h] - b);
        map_.at(r, c) += acc;
      }
    }
  }

  Heatmap finalize() {
    if (map_.scans_accumulated == 0) throw InputError("no scans to fuse");
    Heatmap out = map_;
    const double inv = 1.0 / static_cast<double>(out.scans_accumulated);
    for (auto& v : out.values) v *= inv;
    out.finalized = true;
    return out;
  }

 private:
  Heatmap map_;
  RadiationPattern pattern_;
  FusionMode mode_;
};

// Per cell: (1/N) sum over scans and headings of weight x SRP(heading -
// bearing(pose -> cell)). Masked-out headings contribute nothing.
inline Heatmap fuse_scans(std::span<const ScanPose> poses, const RadiationPattern& pattern, const GridSpec& grid,
                          FusionMode mode = FusionMode::Weighted) {
  if (poses.empty()) throw InputError("fusion needs at least one scan pose");
  HeatmapAccumulator acc(grid, pattern, mode);
  for (const auto& p : poses) acc.add(p);
  return acc.finalize();
}

}  // namespace jamscan::localize
