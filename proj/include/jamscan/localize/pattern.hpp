#pragma once

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include "jamscan/core/types.hpp"

namespace jamscan::localize {

// Normalized, symmetric antenna gain versus relative bearing. Either the
// parametric cosine-power lobe or a tabulated cut (e.g. a manufacturer
// pattern) that is symmetrized and linearly interpolated.
class RadiationPattern {
 public:
  RadiationPattern() = default;

  double gain(double delta_psi) const {
    const double a = std::abs(wrap_angle(delta_psi));
    if (table_.empty()) {
      const double c = std::cos(a);
      const double lobe = c > 0.0 ? std::pow(c, exponent_) : 0.0;
      return std::max(lobe, backlobe_floor_);
    }
    const double pos = a / table_step_;
    const auto i = static_cast<std::size_t>(pos);
    if (i + 1 >= table_.size()) return table_.back();
    const double t = pos - static_cast<double>(i);
    return table_[i] * (1.0 - t) + table_[i + 1] * t;
  }

  double operator()(double delta_psi) const { return gain(delta_psi); }

  double beamwidth_rad() const { return beamwidth_rad_; }
  double backlobe_floor() const { return backlobe_floor_; }
  double exponent() const { return exponent_; }
  bool tabulated() const { return !table_.empty(); }

  friend RadiationPattern make_pattern(double beamwidth_rad, double backlobe_floor);
  friend RadiationPattern make_tabulated_pattern(std::vector<std::pair<double, double>> points,
                                                 double backlobe_floor);

 private:
  double beamwidth_rad_ = kPi / 3.0;
  double backlobe_floor_ = 0.0;
  double exponent_ = 1.0;
  std::vector<double> table_;  // gain on [0, pi]
  double table_step_ = 0.0;
};

// Cosine-power main lobe cos(d)^k with cos(beamwidth/2)^k = 1/2, clamped
// from below at the back-lobe floor.
inline RadiationPattern make_pattern(double beamwidth_rad, double backlobe_floor) {
  if (!(beamwidth_rad > 0.0 && beamwidth_rad < kPi))
    throw ConfigurationError("beamwidth must lie in (0, pi)");
  if (!(backlobe_floor >= 0.0 && backlobe_floor < 1.0))
    throw ConfigurationError("backlobe floor must lie in [0, 1)");
  RadiationPattern p;
  p.beamwidth_rad_ = beamwidth_rad;
  p.backlobe_floor_ = backlobe_floor;
  p.exponent_ = std::log(0.5) / std::log(std::cos(beamwidth_rad / 2.0));
  return p;
}

// Builds a pattern from (angle rad, gain) samples. Angles may cover either
// side; each cut is folded onto |angle| and the two sides averaged. The
// result is rescaled so gain(0) = 1.
inline RadiationPattern make_tabulated_pattern(std::vector<std::pair<double, double>> points,
                                               double backlobe_floor = 0.0) {
  if (points.size() < 2) throw ConfigurationError("tabulated pattern needs at least two points");
  if (!(backlobe_floor >= 0.0 && backlobe_floor < 1.0))
    throw ConfigurationError("backlobe floor must lie in [0, 1)");
  for (auto& [a, g] : points) {
    if (!std::isfinite(a) || !std::isfinite(g) || g < 0.0)
      throw ConfigurationError("tabulated pattern needs finite angles and non-negative gains");
    a = wrap_angle(a);
  }
  // boresight and the back direction belong to both cuts; a cut without
  // samples strictly between them is left out
  auto side = [&](int sign) {
    std::vector<std::pair<double, double>> s;
    bool interior = false;
    for (const auto& [a, g] : points) {
      const bool edge = a == 0.0 || a == -kPi;
      if (edge || (sign > 0) == (a > 0.0)) s.emplace_back(std::abs(a), g);
      interior = interior || (!edge && (sign > 0) == (a > 0.0));
    }
    if (!interior) s.clear();
    std::sort(s.begin(), s.end());
    return s;
  };
  auto pos = side(+1);
  auto neg = side(-1);
  if (pos.empty() && neg.empty()) {
    // only boresight and back samples
    for (const auto& [a, g] : points) pos.emplace_back(std::abs(a), g);
    std::sort(pos.begin(), pos.end());
  }
  auto interp = [](const std::vector<std::pair<double, double>>& s, double a, double& out) {
    if (s.empty()) return false;
    if (a <= s.front().first) { out = s.front().second; return true; }
    if (a >= s.back().first) { out = s.back().second; return true; }
    auto it = std::lower_bound(s.begin(), s.end(), std::make_pair(a, -1.0));
    const auto& hi = *it;
    const auto& lo = *(it - 1);
    const double t = hi.first > lo.first ? (a - lo.first) / (hi.first - lo.first) : 0.0;
    out = lo.second * (1.0 - t) + hi.second * t;
    return true;
  };

  constexpr std::size_t kSamples = 3601;
  RadiationPattern p;
  p.table_step_ = kPi / static_cast<double>(kSamples - 1);
  p.table_.resize(kSamples);
  for (std::size_t i = 0; i < kSamples; ++i) {
    const double a = static_cast<double>(i) * p.table_step_;
    double gp = 0.0, gn = 0.0;
    const bool hp = interp(pos, a, gp);
    const bool hn = interp(neg, a, gn);
    p.table_[i] = hp && hn ? 0.5 * (gp + gn) : (hp ? gp : gn);
  }
  const double g0 = p.table_.front();
  if (!(g0 > 0.0)) throw ConfigurationError("tabulated pattern has zero boresight gain");
  for (auto& g : p.table_) g = std::max(g / g0, backlobe_floor);
  p.table_.front() = 1.0;
  p.backlobe_floor_ = backlobe_floor;
  // half-power beamwidth of the table
  p.beamwidth_rad_ = kPi * 2.0;
  for (std::size_t i = 1; i < kSamples; ++i) {
    if (p.table_[i] <= 0.5) {
      p.beamwidth_rad_ = 2.0 * static_cast<double>(i) * p.table_step_;
      break;
    }
  }
  p.exponent_ = 0.0;
  return p;
}

struct Point {
  double x = 0.0;  // east, m
  double y = 0.0;  // north, m
};

inline double distance(Point a, Point b) { return std::hypot(a.x - b.x, a.y - b.y); }

// Compass bearing from `from` to `to`: north-referenced, clockwise positive,
// in [-pi, pi). Coincident points give 0.
inline double bearing(Point from, Point to) {
  const double dx = to.x - from.x;
  const double dy = to.y - from.y;
  if (dx == 0.0 && dy == 0.0) return 0.0;
  return wrap_angle(std::atan2(dx, dy));
}

// One hover scan: where the antenna was and what each heading measured.
struct ScanPose {
  Point position;
  std::vector<double> headings;      // rad, compass convention
  std::vector<double> energies;      // band energy per heading
  std::vector<std::uint8_t> mask;    // optional per-heading detection flag (empty = all valid)
};

inline void validate(const ScanPose& pose) {
  if (pose.headings.size() != pose.energies.size())
    throw InputError("scan pose: headings and energies differ in length");
  if (!pose.mask.empty() && pose.mask.size() != pose.headings.size())
    throw InputError("scan pose: mask length differs from headings");
  for (double e : pose.energies)
    if (!(e >= 0.0) || !std::isfinite(e)) throw InputError("scan pose: energies must be finite and >= 0");
  for (double h : pose.headings)
    if (!std::isfinite(h)) throw InputError("scan pose: headings must be finite");
}

// Evenly spaced headings covering [-pi, pi).
inline std::vector<double> uniform_headings(std::size_t count, double first = -kPi) {
  std::vector<double> h(count);
  for (std::size_t i = 0; i < count; ++i)
    h[i] = wrap_angle(first + kTwoPi * static_cast<double>(i) / static_cast<double>(count));
  return h;
}

}  // namespace jamscan::localize
