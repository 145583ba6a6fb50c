#pragma once

#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "jamscan/detect/classify.hpp"
#include "jamscan/detect/energy.hpp"
#include "jamscan/detect/tracker.hpp"
#include "jamscan/localize/pattern.hpp"
#include "jamscan/localize/source.hpp"

namespace jamscan::io {

using Json = nlohmann::json;

inline Json to_json(const detect::DetectionReport& r) {
  return Json{{"type", "detection"},
              {"decision", detect::to_string(r.decision)},
              {"band_energy", r.band_energy},
              {"profile_max", r.profile_max},
              {"threshold_energy", r.threshold_energy},
              {"threshold_profile", r.threshold_profile},
              {"tow", r.tow},
              {"band", to_string(r.band)}};
}

inline detect::DetectionReport detection_from_json(const Json& j) {
  try {
    detect::DetectionReport r;
    r.decision = detect::decision_from_string(j.at("decision").get<std::string>());
    r.band_energy = j.at("band_energy").get<double>();
    r.profile_max = j.at("profile_max").get<double>();
    r.threshold_energy = j.at("threshold_energy").get<double>();
    r.threshold_profile = j.at("threshold_profile").get<double>();
    r.tow = j.at("tow").get<double>();
    r.band = band_from_string(j.at("band").get<std::string>());
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("malformed detection record: ") + e.what());
  } catch (const ConfigurationError& e) {
    throw FormatError(std::string("malformed detection record: ") + e.what());
  }
}

inline Json to_json(const detect::JammerClass& c, double tow, Band band) {
  Json ev = Json::object();
  for (const auto& [k, v] : c.evidence) ev[k] = v;
  return Json{{"type", "class"}, {"label", detect::to_string(c.label)}, {"evidence", ev}, {"tow", tow},
              {"band", to_string(band)}};
}

inline detect::JammerClass class_from_json(const Json& j) {
  try {
    detect::JammerClass c;
    c.label = detect::label_from_string(j.at("label").get<std::string>());
    for (const auto& [k, v] : j.at("evidence").items()) c.evidence[k] = v.get<double>();
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("malformed class record: ") + e.what());
  }
}

inline Json to_json(const detect::Peak& p) {
  return Json{{"magnitude", p.magnitude}, {"freq_center_hz", p.freq_center_hz}, {"alpha_center", p.alpha_center},
              {"row", p.row}, {"col", p.col}};
}

inline Json to_json(const detect::PeakTrack& t, Band band) {
  Json hist = Json::array();
  for (const auto& pt : t.history) {
    Json e = to_json(pt.peak);
    e["tow"] = pt.tow;
    hist.push_back(std::move(e));
  }
  return Json{{"type", "track"}, {"track_id", t.track_id}, {"status", detect::to_string(t.status)},
              {"band", to_string(band)}, {"history", hist}};
}

inline Json to_json(const localize::Point& p) { return Json::array({p.x, p.y}); }

inline Json to_json(const localize::SourceEstimate& s) {
  Json contour = Json::array();
  for (const auto& line : s.contour) {
    Json l = Json::array();
    for (const auto& p : line) l.push_back(to_json(p));
    contour.push_back(std::move(l));
  }
  return Json{{"type", "source"}, {"centroid", to_json(s.centroid)}, {"peak", to_json(s.peak)},
              {"confidence", s.confidence}, {"level", s.level}, {"cells", s.cells}, {"contour", contour}};
}

inline Json no_source_json() { return Json{{"type", "source"}, {"centroid", nullptr}}; }

// Headings are stored in degrees, like the mission file.
inline Json to_json(const localize::ScanPose& p) {
  Json h = Json::array();
  for (double v : p.headings) h.push_back(v * 180.0 / kPi);
  Json j{{"position", to_json(p.position)}, {"headings_deg", h}, {"energies", p.energies}};
  if (!p.mask.empty()) j["mask"] = p.mask;
  return j;
}

inline localize::ScanPose pose_from_json(const Json& j) {
  try {
    localize::ScanPose p;
    const auto& pos = j.at("position");
    if (!pos.is_array() || pos.size() != 2) throw FormatError("pose position must be [x, y]");
    p.position = {pos[0].get<double>(), pos[1].get<double>()};
    for (const auto& h : j.at("headings_deg")) p.headings.push_back(wrap_angle(h.get<double>() * kPi / 180.0));
    p.energies = j.at("energies").get<std::vector<double>>();
    if (j.contains("mask")) p.mask = j.at("mask").get<std::vector<std::uint8_t>>();
    localize::validate(p);
    return p;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("malformed pose record: ") + e.what());
  }
}

inline Json poses_to_json(const std::vector<localize::ScanPose>& poses) {
  Json arr = Json::array();
  for (const auto& p : poses) arr.push_back(to_json(p));
  return Json{{"poses", arr}};
}

inline std::vector<localize::ScanPose> poses_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("poses") || !j.at("poses").is_array())
    throw FormatError("pose file must be an object with a 'poses' array");
  std::vector<localize::ScanPose> out;
  for (const auto& p : j.at("poses")) out.push_back(pose_from_json(p));
  return out;
}

// One compact JSON document per line.
inline std::string to_json_lines(const std::vector<Json>& records) {
  std::string out;
  for (const auto& r : records) {
    out += r.dump();
    out += '\n';
  }
  return out;
}

inline std::vector<Json> parse_json_lines(const std::string& text) {
  std::vector<Json> out;
  std::istringstream in(text);
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(Json::parse(line));
    } catch (const nlohmann::json::exception& e) {
      throw FormatError("line " + std::to_string(n) + ": " + e.what());
    }
  }
  return out;
}

}  // namespace jamscan::io
