#pragma once

#include <cmath>
#include <vector>

#include "jamscan/localize/pattern.hpp"
#include "jamscan/synth/waveform.hpp"

namespace jamscan::synth {

// Hover location and the headings flown there.
struct PoseSpec {
  localize::Point position;
  std::vector<double> headings;
};

struct MissionScenario {
  localize::Point jammer_position;
  WaveformSpec jammer_spec;
  double noise_floor = 1.0;  // linear energy per sample
  std::vector<PoseSpec> scan_poses;
  double pathloss_exponent = 2.0;
};

inline void validate(const MissionScenario& sc) {
  validate(sc.jammer_spec);
  if (!(sc.noise_floor >= 0.0) || !std::isfinite(sc.noise_floor))
    throw SpecificationError("noise_floor must be finite and >= 0");
  if (!(sc.pathloss_exponent > 0.0)) throw SpecificationError("pathloss_exponent must be > 0");
  for (const auto& p : sc.scan_poses) {
    if (p.headings.empty()) throw SpecificationError("every scan pose needs at least one heading");
    for (double h : p.headings)
      if (!std::isfinite(h)) throw SpecificationError("headings must be finite");
  }
}

// Mean received jammer power at a pose/heading: P d^-n g(bearing - heading).
// The free-space power law is simulation plumbing only.
inline double received_jammer_power(const MissionScenario& sc, const localize::RadiationPattern& pattern,
                                     localize::Point pose, double heading) {
  const double d = localize::distance(pose, sc.jammer_position);
  if (d == 0.0) throw DegenerateGeometryError("scan pose coincides with the jammer position");
  const double gain = pattern.gain(localize::bearing(pose, sc.jammer_position) - heading);
  return sc.jammer_spec.linear_power() * std::pow(d, -sc.pathloss_exponent) * gain;
}

// Expected per-heading band energy for every pose of the scenario.
inline std::vector<localize::ScanPose> simulate_scan(const MissionScenario& sc,
                                                     const localize::RadiationPattern& pattern) {
  validate(sc);
  std::vector<localize::ScanPose> out;
  out.reserve(sc.scan_poses.size());
  for (const auto& p : sc.scan_poses) {
    localize::ScanPose pose;
    pose.position = p.position;
    pose.headings = p.headings;
    pose.energies.reserve(p.headings.size());
    for (double h : p.headings)
      pose.energies.push_back(received_jammer_power(sc, pattern, p.position, h) + sc.noise_floor);
    out.push_back(std::move(pose));
  }
  return out;
}

}  // namespace jamscan::synth
