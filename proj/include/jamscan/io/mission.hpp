#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "jamscan/cyclo/fam.hpp"
#include "jamscan/detect/classify.hpp"
#include "jamscan/detect/energy.hpp"
#include "jamscan/detect/tracker.hpp"
#include "jamscan/io/bytes.hpp"
#include "jamscan/io/records.hpp"
#include "jamscan/localize/fusion.hpp"
#include "jamscan/localize/source.hpp"
#include "jamscan/synth/scenario.hpp"

namespace jamscan::io {

struct PatternConfig {
  double beamwidth_rad = kPi / 3.0;
  double backlobe_floor = 0.01;
  std::vector<std::pair<double, double>> table;  // (rad, gain); overrides the parametric lobe when set

  localize::RadiationPattern build() const {
    return table.empty() ? localize::make_pattern(beamwidth_rad, backlobe_floor)
                         : localize::make_tabulated_pattern(table, backlobe_floor);
  }
};

// Simulated snapshot stream used when no IQ file is given.
struct StreamConfig {
  double sample_rate_hz = 15e6;
  double center_freq_hz = 1575.42e6;
  Band band = Band::L1;
  std::size_t snapshot_len = 4096;
  std::size_t snapshots = 10;
  std::size_t benign_leading = 0;  // leading snapshots without the jammer
  double cadence_s = 2.0;          // 0.5 Hz
  double start_tow = 0.0;
  double noise_sigma2 = 1.0;
  std::optional<double> jnr_db;    // overrides the jammer power for the stream
  std::uint64_t seed = 1;
};

// Benign calibration: either simulated AWGN snapshots or the first records
// of the input file.
struct CalibrationConfig {
  std::size_t benign_snapshots = 100;
  std::size_t benign_records = 0;
  double margin = 1.0;
  std::uint64_t seed = 7;
};

struct DetectionConfig {
  std::optional<detect::Thresholds> thresholds;
  std::optional<double> peak_threshold;
  std::optional<CalibrationConfig> calibration;
  detect::Policy policy = detect::Policy::Either;
};

struct TrackingConfig {
  double gate_hz = 1e6;
  int coast_frames = 2;
  double peak_floor = 0.1;     // peaks below this fraction of the snapshot's strongest are ignored
  std::size_t max_peaks = 16;
};

struct LocalizationConfig {
  double quantile = localize::kDefaultSourceQuantile;
  localize::FusionMode mode = localize::FusionMode::Weighted;
  std::optional<double> mask_margin;  // flag a heading when energy > margin x noise floor
};

struct MissionFile {
  synth::MissionScenario scenario;
  PatternConfig pattern;
  cyclo::FamParams fam;
  DetectionConfig detection;
  detect::ClassifierOptions classifier;
  TrackingConfig tracking;
  localize::GridSpec grid;
  LocalizationConfig localization;
  StreamConfig stream;
};

namespace detail {

inline double deg(double d) { return d * kPi / 180.0; }
inline double to_deg(double r) { return r * 180.0 / kPi; }

inline localize::Point point_from(const Json& j) {
  if (!j.is_array() || j.size() != 2) throw SpecificationError("a position must be [x, y]");
  return {j[0].get<double>(), j[1].get<double>()};
}

template <typename T>
void read_opt(const Json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

}  // namespace detail

inline synth::WaveformSpec waveform_from_json(const Json& j) {
  synth::WaveformSpec s;
  s.kind = synth::waveform_kind_from_string(j.at("kind").get<std::string>());
  detail::read_opt(j, "center_offset_hz", s.center_offset_hz);
  detail::read_opt(j, "bandwidth_hz", s.bandwidth_hz);
  if (j.contains("sweep_time_s")) s.sweep_time_s = j.at("sweep_time_s").get<double>();
  if (j.contains("chip_rate_cps")) s.chip_rate_cps = j.at("chip_rate_cps").get<double>();
  if (j.contains("prn_length")) s.prn_length = j.at("prn_length").get<std::size_t>();
  if (j.contains("power_dbm")) {
    const auto& p = j.at("power_dbm");
    s.power_dbm = p.is_null() ? -std::numeric_limits<double>::infinity() : p.get<double>();
  }
  detail::read_opt(j, "phase_offset_rad", s.phase_offset_rad);
  if (j.contains("sweep_shape")) {
    const auto shape = j.at("sweep_shape").get<std::string>();
    if (shape == "sawtooth") s.sweep_shape = synth::SweepShape::Sawtooth;
    else if (shape == "triangle") s.sweep_shape = synth::SweepShape::Triangle;
    else throw SpecificationError("unknown sweep shape '" + shape + "'");
  }
  synth::validate(s);
  return s;
}

inline Json to_json(const synth::WaveformSpec& s) {
  Json j{{"kind", synth::to_string(s.kind)},
         {"center_offset_hz", s.center_offset_hz},
         {"bandwidth_hz", s.bandwidth_hz},
         {"phase_offset_rad", s.phase_offset_rad},
         {"sweep_shape", s.sweep_shape == synth::SweepShape::Triangle ? "triangle" : "sawtooth"}};
  j["power_dbm"] = std::isfinite(s.power_dbm) ? Json(s.power_dbm) : Json(nullptr);
  if (s.sweep_time_s) j["sweep_time_s"] = *s.sweep_time_s;
  if (s.chip_rate_cps) j["chip_rate_cps"] = *s.chip_rate_cps;
  if (s.prn_length) j["prn_length"] = *s.prn_length;
  return j;
}

// Parses and validates a mission. Missing optional sections take defaults;
// the scenario section is required. Any structural problem is a
// configuration error.
inline MissionFile mission_from_json(const Json& j) {
  MissionFile m;
  try {
    if (!j.is_object()) throw SpecificationError("mission must be a JSON object");
    const auto& sc = j.at("scenario");
    m.scenario.jammer_spec = waveform_from_json(sc.at("jammer"));
    if (sc.contains("jammer_position")) m.scenario.jammer_position = detail::point_from(sc.at("jammer_position"));
    detail::read_opt(sc, "noise_floor", m.scenario.noise_floor);
    detail::read_opt(sc, "pathloss_exponent", m.scenario.pathloss_exponent);
    if (sc.contains("poses")) {
      for (const auto& p : sc.at("poses")) {
        synth::PoseSpec ps;
        ps.position = detail::point_from(p.at("position"));
        if (p.contains("headings_deg")) {
          for (const auto& h : p.at("headings_deg")) ps.headings.push_back(wrap_angle(detail::deg(h.get<double>())));
        } else {
          const auto count = p.value("heading_count", std::size_t{36});
          if (count == 0) throw SpecificationError("heading_count must be positive");
          ps.headings = localize::uniform_headings(count);
        }
        m.scenario.scan_poses.push_back(std::move(ps));
      }
    }
    synth::validate(m.scenario);

    if (j.contains("pattern")) {
      const auto& p = j.at("pattern");
      if (p.contains("beamwidth_deg")) m.pattern.beamwidth_rad = detail::deg(p.at("beamwidth_deg").get<double>());
      detail::read_opt(p, "backlobe_floor", m.pattern.backlobe_floor);
      if (p.contains("table_deg"))
        for (const auto& row : p.at("table_deg"))
          m.pattern.table.emplace_back(detail::deg(row.at(0).get<double>()), row.at(1).get<double>());
    }
    (void)m.pattern.build();

    if (j.contains("fam")) {
      detail::read_opt(j.at("fam"), "window_len", m.fam.window_len);
      detail::read_opt(j.at("fam"), "hop", m.fam.hop);
    }
    cyclo::validate(m.fam);

    if (j.contains("detection")) {
      const auto& d = j.at("detection");
      if (d.contains("thresholds")) {
        const auto& t = d.at("thresholds");
        m.detection.thresholds = detect::Thresholds{t.at("energy").get<double>(), t.at("profile").get<double>()};
        if (t.contains("peak")) m.detection.peak_threshold = t.at("peak").get<double>();
        if (!(m.detection.thresholds->energy > 0.0) || !(m.detection.thresholds->profile > 0.0))
          throw ConfigurationError("thresholds must be positive");
      }
      if (d.contains("calibration")) {
        CalibrationConfig c;
        const auto& cj = d.at("calibration");
        detail::read_opt(cj, "benign_snapshots", c.benign_snapshots);
        detail::read_opt(cj, "benign_records", c.benign_records);
        detail::read_opt(cj, "margin", c.margin);
        detail::read_opt(cj, "seed", c.seed);
        if (!(c.margin >= 1.0)) throw CalibrationError("calibration margin must be >= 1");
        m.detection.calibration = c;
      }
      if (d.contains("policy")) m.detection.policy = detect::policy_from_string(d.at("policy").get<std::string>());
    }

    if (j.contains("classifier")) {
      const auto& c = j.at("classifier");
      detail::read_opt(c, "drift_bins", m.classifier.drift_bins);
      detail::read_opt(c, "narrowband_bins", m.classifier.narrowband_bins);
      detail::read_opt(c, "comb_z", m.classifier.comb_z);
      detail::read_opt(c, "comb_coherence", m.classifier.comb_coherence);
    }

    if (j.contains("tracking")) {
      const auto& t = j.at("tracking");
      detail::read_opt(t, "gate_hz", m.tracking.gate_hz);
      detail::read_opt(t, "coast_frames", m.tracking.coast_frames);
      detail::read_opt(t, "peak_floor", m.tracking.peak_floor);
      detail::read_opt(t, "max_peaks", m.tracking.max_peaks);
      if (!(m.tracking.gate_hz > 0.0) || m.tracking.coast_frames < 0 || !(m.tracking.peak_floor >= 0.0))
        throw ConfigurationError("invalid tracking section");
    }

    if (j.contains("grid")) {
      const auto& g = j.at("grid");
      if (g.contains("origin")) m.grid.origin = detail::point_from(g.at("origin"));
      detail::read_opt(g, "cell_size", m.grid.cell_size);
      detail::read_opt(g, "rows", m.grid.rows);
      detail::read_opt(g, "cols", m.grid.cols);
    }
    localize::validate(m.grid);

    if (j.contains("localization")) {
      const auto& l = j.at("localization");
      detail::read_opt(l, "quantile", m.localization.quantile);
      if (l.contains("mode")) m.localization.mode = localize::fusion_mode_from_string(l.at("mode").get<std::string>());
      if (l.contains("mask_margin")) m.localization.mask_margin = l.at("mask_margin").get<double>();
      if (!(m.localization.quantile > 0.0 && m.localization.quantile < 1.0))
        throw DomainError("localization quantile must lie in (0, 1)");
    }

    if (j.contains("stream")) {
      const auto& s = j.at("stream");
      detail::read_opt(s, "sample_rate_hz", m.stream.sample_rate_hz);
      detail::read_opt(s, "center_freq_hz", m.stream.center_freq_hz);
      if (s.contains("band")) m.stream.band = band_from_string(s.at("band").get<std::string>());
      detail::read_opt(s, "snapshot_len", m.stream.snapshot_len);
      detail::read_opt(s, "snapshots", m.stream.snapshots);
      detail::read_opt(s, "benign_leading", m.stream.benign_leading);
      detail::read_opt(s, "cadence_s", m.stream.cadence_s);
      detail::read_opt(s, "start_tow", m.stream.start_tow);
      detail::read_opt(s, "noise_sigma2", m.stream.noise_sigma2);
      if (s.contains("jnr_db")) m.stream.jnr_db = s.at("jnr_db").get<double>();
      detail::read_opt(s, "seed", m.stream.seed);
      if (!(m.stream.sample_rate_hz > 0.0) || !(m.stream.cadence_s > 0.0) || !(m.stream.noise_sigma2 >= 0.0))
        throw DomainError("invalid stream section");
      if (m.stream.snapshot_len < m.fam.window_len)
        throw DomainError("stream snapshot_len must be at least the FAM window length");
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigurationError(std::string("mission file: ") + e.what());
  }
  return m;
}

inline MissionFile parse_mission(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigurationError(std::string("mission file is not valid JSON: ") + e.what());
  }
  return mission_from_json(j);
}

inline MissionFile load_mission(const std::string& path) {
  std::string text;
  try {
    text = read_text(path);
  } catch (const InputError& e) {
    throw ConfigurationError(e.what());
  }
  return parse_mission(text);
}

}  // namespace jamscan::io
