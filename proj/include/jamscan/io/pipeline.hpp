#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <vector>

#include "jamscan/cyclo/autocorr.hpp"
#include "jamscan/cyclo/coherence.hpp"
#include "jamscan/cyclo/fam.hpp"
#include "jamscan/cyclo/profile.hpp"
#include "jamscan/detect/classify.hpp"
#include "jamscan/detect/energy.hpp"
#include "jamscan/detect/peaks.hpp"
#include "jamscan/detect/tracker.hpp"
#include "jamscan/io/iq_file.hpp"
#include "jamscan/io/mission.hpp"
#include "jamscan/localize/fusion.hpp"
#include "jamscan/localize/source.hpp"
#include "jamscan/synth/prn.hpp"
#include "jamscan/synth/scenario.hpp"
#include "jamscan/synth/waveform.hpp"

namespace jamscan::io {

struct PipelineResult {
  detect::Thresholds thresholds;
  double peak_threshold = 0.0;
  std::vector<detect::DetectionReport> reports;
  std::vector<detect::JammerClass> classes;  // one per snapshot
  std::vector<detect::PeakTrack> tracks;
  detect::JammerClass final_class;
  std::vector<localize::ScanPose> poses;
  std::optional<localize::Heatmap> heatmap;
  std::optional<localize::SourceEstimate> estimate;

  bool jamming() const {
    return std::any_of(reports.begin(), reports.end(),
                       [](const auto& r) { return r.decision == detect::Decision::H1_jamming; });
  }
};

namespace detail {

inline std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t index, std::uint64_t salt) {
  return synth::detail::splitmix64(seed * 0x9E3779B97F4A7C15ULL + index * 0xD1B54A32D192ED03ULL + salt);
}

}  // namespace detail

// Snapshot stream described by the mission's stream section: AWGN
// throughout, the jammer from `benign_leading` on. The jammer keeps one PRN
// and one time line across snapshots.
inline std::vector<IqSnapshot> simulate_stream(const MissionFile& m) {
  const auto& st = m.stream;
  auto spec = m.scenario.jammer_spec;
  if (st.jnr_db) spec.power_dbm = *st.jnr_db + (st.noise_sigma2 > 0.0 ? linear_to_db(st.noise_sigma2) : 0.0);
  const bool present = std::isfinite(spec.power_dbm);
  std::vector<IqSnapshot> out;
  out.reserve(st.snapshots);
  for (std::size_t i = 0; i < st.snapshots; ++i) {
    const double tow = st.start_tow + static_cast<double>(i) * st.cadence_s;
    IqSnapshot s = (present && i >= st.benign_leading)
                       ? synth::synth_waveform(spec, static_cast<double>(st.snapshot_len) / st.sample_rate_hz,
                                               st.sample_rate_hz, st.seed, tow)
                       : synth::silence(st.snapshot_len, st.sample_rate_hz, tow);
    s = synth::add_awgn(std::move(s), st.noise_sigma2, detail::stream_seed(st.seed, i, 1));
    s.tow = tow;
    s.center_freq_hz = st.center_freq_hz;
    s.band = st.band;
    out.push_back(std::move(s));
  }
  return out;
}

struct Calibration {
  detect::Thresholds thresholds;
  double peak_threshold = 0.0;
};

// Thresholds from benign snapshots: margin x the largest benign energy,
// alpha-profile maximum and surface maximum.
inline Calibration calibrate_from(const std::vector<IqSnapshot>& benign, const cyclo::FamParams& fam, double margin) {
  if (benign.empty()) throw CalibrationError("no benign snapshots to calibrate from");
  std::vector<cyclo::AlphaProfile> profiles;
  std::vector<double> energies, surface;
  for (const auto& s : benign) {
    const auto scd = cyclo::fam_scd(s, fam);
    profiles.push_back(cyclo::alpha_profile(scd));
    energies.push_back(detect::band_energy(s));
    surface.push_back(scd.max_value());
  }
  Calibration c;
  c.thresholds = detect::calibrate_thresholds(profiles, energies, margin);
  c.peak_threshold = detect::calibrate_threshold(surface, margin);
  return c;
}

inline std::vector<IqSnapshot> simulate_benign(const MissionFile& m, const CalibrationConfig& c) {
  std::vector<IqSnapshot> out;
  out.reserve(c.benign_snapshots);
  for (std::size_t i = 0; i < c.benign_snapshots; ++i)
    out.push_back(synth::noise_snapshot(m.stream.snapshot_len, m.stream.sample_rate_hz, m.stream.noise_sigma2,
                                        detail::stream_seed(c.seed, i, 2)));
  return out;
}

// Majority label over the H1 snapshots; ties go to the more specific label.
inline detect::Label vote(const std::vector<detect::JammerClass>& classes,
                          const std::vector<detect::DetectionReport>& reports) {
  using detect::Label;
  constexpr std::array<Label, 5> priority = {Label::COMPOUND, Label::BPSK_PRN, Label::CHIRP, Label::SWEPT,
                                             Label::CW_TONE};
  std::array<std::size_t, 6> counts{};
  for (std::size_t i = 0; i < classes.size(); ++i)
    if (reports[i].decision == detect::Decision::H1_jamming && classes[i].label != Label::NONE)
      ++counts[static_cast<std::size_t>(classes[i].label)];
  Label best = Label::NONE;
  std::size_t best_n = 0;
  for (Label l : priority) {
    const std::size_t n = counts[static_cast<std::size_t>(l)];
    if (n > best_n) {
      best = l;
      best_n = n;
    }
  }
  return best;
}

// Detection, tracking and classification over the snapshot stream (the IQ
// file when given, otherwise the simulated stream), then scan fusion and
// source extraction when the scenario carries poses and jamming was found.
inline PipelineResult run_pipeline(const MissionFile& m, const std::optional<IqFile>& input = std::nullopt) {
  PipelineResult res;
  const auto snaps = input ? input->snapshots : simulate_stream(m);

  if (m.detection.thresholds) {
    res.thresholds = *m.detection.thresholds;
    res.peak_threshold = m.detection.peak_threshold.value_or(0.0);
  } else if (m.detection.calibration) {
    const auto& c = *m.detection.calibration;
    Calibration cal;
    if (input) {
      if (c.benign_records == 0)
        throw CalibrationRequiredError("input file given without thresholds or designated benign records");
      if (c.benign_records > snaps.size()) throw CalibrationError("more benign records requested than present");
      cal = calibrate_from({snaps.begin(), snaps.begin() + static_cast<std::ptrdiff_t>(c.benign_records)}, m.fam,
                           c.margin);
    } else {
      cal = calibrate_from(simulate_benign(m, c), m.fam, c.margin);
    }
    res.thresholds = cal.thresholds;
    res.peak_threshold = m.detection.peak_threshold.value_or(cal.peak_threshold);
  } else {
    throw CalibrationRequiredError("mission has neither detection thresholds nor a calibration section");
  }

  detect::PeakTracker tracker({m.tracking.gate_hz, m.tracking.coast_frames});
  auto opts = m.classifier;
  for (const auto& s : snaps) {
    validate(s);
    const auto scd = cyclo::fam_scd(s, m.fam);
    const auto profile = cyclo::alpha_profile(scd);
    const auto report = detect::detect(s, profile, res.thresholds, m.detection.policy);
    const bool h1 = report.decision == detect::Decision::H1_jamming;

    std::vector<detect::Peak> peaks;
    if (h1) {
      const double floor = std::max(res.peak_threshold, m.tracking.peak_floor * scd.max_value());
      peaks = detect::find_peaks(scd, floor);
      if (peaks.size() > m.tracking.max_peaks) peaks.resize(m.tracking.max_peaks);
    }
    tracker.update(peaks, s.tow);

    const auto coh = cyclo::coherence(scd);
    const auto ac = cyclo::cyclic_autocorr(s);
    // the detector has already decided; the classifier only labels
    opts.profile_threshold = h1 ? -std::numeric_limits<double>::infinity() : std::numeric_limits<double>::infinity();
    res.classes.push_back(detect::classify(tracker.tracks(), profile, coh, ac, opts));
    res.reports.push_back(report);
  }
  res.tracks = tracker.tracks();
  res.final_class.label = vote(res.classes, res.reports);
  for (std::size_t i = res.classes.size(); i-- > 0;) {
    if (res.reports[i].decision == detect::Decision::H1_jamming && res.classes[i].label == res.final_class.label) {
      res.final_class.evidence = res.classes[i].evidence;
      break;
    }
  }

  if (!m.scenario.scan_poses.empty() && res.jamming()) {
    const auto pattern = m.pattern.build();
    res.poses = synth::simulate_scan(m.scenario, pattern);
    if (m.localization.mask_margin) {
      const double bar = *m.localization.mask_margin * m.scenario.noise_floor;
      for (auto& p : res.poses) {
        p.mask.resize(p.energies.size());
        for (std::size_t h = 0; h < p.energies.size(); ++h) p.mask[h] = p.energies[h] > bar ? 1 : 0;
      }
    }
    res.heatmap = localize::fuse_scans(res.poses, pattern, m.grid, m.localization.mode);
    res.estimate = localize::extract_source(*res.heatmap, m.localization.quantile);
  }
  return res;
}

// Every output of a run as JSON Lines records: detections and classes
// interleaved per snapshot, then tracks, the final class and the source.
inline std::vector<Json> pipeline_records(const PipelineResult& r) {
  std::vector<Json> out;
  for (std::size_t i = 0; i < r.reports.size(); ++i) {
    out.push_back(to_json(r.reports[i]));
    out.push_back(to_json(r.classes[i], r.reports[i].tow, r.reports[i].band));
  }
  const Band band = r.reports.empty() ? Band::L1 : r.reports.front().band;
  for (const auto& t : r.tracks) out.push_back(to_json(t, band));
  Json fin = to_json(r.final_class, r.reports.empty() ? 0.0 : r.reports.back().tow, band);
  fin["type"] = "final_class";
  out.push_back(std::move(fin));
  if (r.estimate) out.push_back(to_json(*r.estimate));
  else out.push_back(no_source_json());
  return out;
}

}  // namespace jamscan::io
