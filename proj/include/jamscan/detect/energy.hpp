#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <string_view>
#include <vector>

#include "jamscan/core/types.hpp"
#include "jamscan/cyclo/profile.hpp"

namespace jamscan::detect {

enum class Decision { H0_benign, H1_jamming };

inline std::string_view to_string(Decision d) { return d == Decision::H1_jamming ? "H1_jamming" : "H0_benign"; }

inline Decision decision_from_string(std::string_view s) {
  if (s == "H1_jamming") return Decision::H1_jamming;
  if (s == "H0_benign") return Decision::H0_benign;
  throw FormatError("unknown decision '" + std::string(s) + "'");
}

// How the energy and profile tests are combined.
enum class Policy { Either, Both };

inline Policy policy_from_string(std::string_view s) {
  if (s == "either") return Policy::Either;
  if (s == "both") return Policy::Both;
  throw ConfigurationError("unknown detection policy '" + std::string(s) + "'");
}

inline std::string_view to_string(Policy p) { return p == Policy::Both ? "both" : "either"; }

struct Thresholds {
  double energy = 0.0;
  double profile = 0.0;
};

struct DetectionReport {
  Decision decision = Decision::H0_benign;
  double band_energy = 0.0;
  double profile_max = 0.0;
  double threshold_energy = 0.0;
  double threshold_profile = 0.0;
  double tow = 0.0;
  Band band = Band::L1;
};

// Mean per-sample energy of the block.
inline double band_energy(const IqSnapshot& snap) {
  if (snap.empty()) throw InsufficientDataError("band energy of an empty snapshot");
  double acc = 0.0;
  for (const auto& s : snap.samples) acc += std::norm(s);
  return acc / static_cast<double>(snap.size());
}

// H1 only when the statistic is strictly above the threshold.
inline Decision energy_decide(double e, double threshold) {
  if (!(threshold > 0.0) || !std::isfinite(threshold))
    throw ConfigurationError("detection threshold must be positive and finite");
  return e > threshold ? Decision::H1_jamming : Decision::H0_benign;
}

inline Decision combine(Decision energy, Decision profile, Policy policy) {
  const bool a = energy == Decision::H1_jamming;
  const bool b = profile == Decision::H1_jamming;
  const bool h1 = policy == Policy::Both ? (a && b) : (a || b);
  return h1 ? Decision::H1_jamming : Decision::H0_benign;
}

inline DetectionReport detect(const IqSnapshot& snap, const cyclo::AlphaProfile& profile, const Thresholds& th,
                              Policy policy = Policy::Either) {
  DetectionReport r;
  r.band_energy = band_energy(snap);
  r.profile_max = profile.max();
  r.threshold_energy = th.energy;
  r.threshold_profile = th.profile;
  r.tow = snap.tow;
  r.band = snap.band;
  r.decision = combine(energy_decide(r.band_energy, th.energy), energy_decide(r.profile_max, th.profile), policy);
  return r;
}

// Threshold = margin x the largest benign value.
inline double calibrate_threshold(std::span<const double> benign, double margin) {
  if (benign.empty()) throw CalibrationError("no benign data to calibrate from");
  if (!(margin >= 1.0) || !std::isfinite(margin)) throw CalibrationError("calibration margin must be >= 1");
  const double mx = *std::max_element(benign.begin(), benign.end());
  if (!std::isfinite(mx) || mx < 0.0) throw CalibrationError("benign statistics must be finite and non-negative");
  return margin * mx;
}

inline Thresholds calibrate_thresholds(std::span<const cyclo::AlphaProfile> benign,
                                       std::span<const double> benign_energies, double margin) {
  if (benign.empty()) throw CalibrationError("no benign profiles to calibrate from");
  std::vector<double> maxima;
  maxima.reserve(benign.size());
  for (const auto& p : benign) maxima.push_back(p.max());
  Thresholds t;
  t.profile = calibrate_threshold(maxima, margin);
  t.energy = calibrate_threshold(benign_energies, margin);
  if (!(t.profile > 0.0) || !(t.energy > 0.0)) throw CalibrationError("benign data calibrates to a zero threshold");
  return t;
}

}  // namespace jamscan::detect
