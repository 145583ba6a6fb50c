#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "jamscan/core/errors.hpp"
#include "jamscan/detect/peaks.hpp"

namespace jamscan::detect {

enum class TrackStatus { Active, Coasting, Closed };

inline std::string_view to_string(TrackStatus s) {
  switch (s) {
    case TrackStatus::Active: return "active";
    case TrackStatus::Coasting: return "coasting";
    case TrackStatus::Closed: return "closed";
  }
  return "closed";
}

struct TrackPoint {
  double tow = 0.0;
  Peak peak;
};

struct PeakTrack {
  int track_id = 0;
  std::vector<TrackPoint> history;
  TrackStatus status = TrackStatus::Active;
  int misses = 0;  // consecutive updates without a peak

  double last_tow() const { return history.empty() ? -std::numeric_limits<double>::infinity() : history.back().tow; }
  double last_freq() const { return history.back().peak.freq_center_hz; }
  bool open() const { return status != TrackStatus::Closed; }

  double total_magnitude() const {
    double s = 0.0;
    for (const auto& p : history) s += p.peak.magnitude;
    return s;
  }

  // Mean absolute change of the centre frequency between updates.
  double mean_step_hz() const {
    if (history.size() < 2) return 0.0;
    double s = 0.0;
    for (std::size_t i = 1; i < history.size(); ++i)
      s += std::abs(history[i].peak.freq_center_hz - history[i - 1].peak.freq_center_hz);
    return s / static_cast<double>(history.size() - 1);
  }

  // +1 / -1 when the centre frequency never decreases / increases and moves
  // overall, 0 otherwise.
  int monotone_direction() const {
    if (history.size() < 2) return 0;
    bool up = true, down = true;
    for (std::size_t i = 1; i < history.size(); ++i) {
      const double d = history[i].peak.freq_center_hz - history[i - 1].peak.freq_center_hz;
      if (d < 0.0) up = false;
      if (d > 0.0) down = false;
    }
    const double net = history.back().peak.freq_center_hz - history.front().peak.freq_center_hz;
    if (up && net > 0.0) return 1;
    if (down && net < 0.0) return -1;
    return 0;
  }
};

struct TrackerOptions {
  double gate_hz = 100e3;
  int coast_frames = 2;
};

// Extends `tracks` with the peaks observed at `tow`.
//
// Pairs of (open track, peak) inside the gate are assigned greedily by
// increasing frequency distance. A leftover peak inside the gate of some open
// track is a duplicate of that emitter and is dropped; one outside every gate
// opens a new track. Tracks that got nothing coast for `coast_frames`
// updates, then close.
inline void track_peaks(std::vector<PeakTrack>& tracks, const std::vector<Peak>& peaks, double tow,
                        const TrackerOptions& opt, int& next_id) {
  if (!(opt.gate_hz > 0.0)) throw ConfigurationError("association gate must be positive");
  if (opt.coast_frames < 0) throw ConfigurationError("coast length must be non-negative");
  if (!std::isfinite(tow)) throw SequencingError("non-finite timestamp");
  for (const auto& t : tracks) {
    if (!t.history.empty() && !(tow > t.last_tow())) throw SequencingError("snapshot timestamps must strictly increase");
  }

  struct Candidate {
    double dist;
    std::size_t track;
    std::size_t peak;
  };
  std::vector<Candidate> cand;
  for (std::size_t t = 0; t < tracks.size(); ++t) {
    if (!tracks[t].open() || tracks[t].history.empty()) continue;
    for (std::size_t p = 0; p < peaks.size(); ++p) {
      const double d = std::abs(peaks[p].freq_center_hz - tracks[t].last_freq());
      if (d <= opt.gate_hz) cand.push_back({d, t, p});
    }
  }
  std::stable_sort(cand.begin(), cand.end(), [](const Candidate& a, const Candidate& b) { return a.dist < b.dist; });

  std::vector<char> track_used(tracks.size(), 0), peak_used(peaks.size(), 0);
  for (const auto& c : cand) {
    if (track_used[c.track] || peak_used[c.peak]) continue;
    track_used[c.track] = 1;
    peak_used[c.peak] = 1;
    tracks[c.track].history.push_back({tow, peaks[c.peak]});
  }

  const std::size_t existing = tracks.size();
  for (std::size_t p = 0; p < peaks.size(); ++p) {
    if (peak_used[p]) continue;
    bool claimed = false;
    for (const auto& t : tracks) {
      if (!t.open() || t.history.empty()) continue;
      if (std::abs(peaks[p].freq_center_hz - t.last_freq()) <= opt.gate_hz) {
        claimed = true;
        break;
      }
    }
    if (claimed) continue;
    PeakTrack nt;
    nt.track_id = next_id++;
    nt.history.push_back({tow, peaks[p]});
    tracks.push_back(std::move(nt));
  }

  for (std::size_t t = 0; t < existing; ++t) {
    auto& tr = tracks[t];
    if (!tr.open()) continue;
    if (track_used[t]) {
      tr.status = TrackStatus::Active;
      tr.misses = 0;
    } else {
      ++tr.misses;
      tr.status = tr.misses > opt.coast_frames ? TrackStatus::Closed : TrackStatus::Coasting;
    }
  }
}

// Value-returning form; new track ids continue after the largest existing one.
inline std::vector<PeakTrack> track_peaks(std::vector<PeakTrack> tracks, const std::vector<Peak>& peaks, double tow,
                                          double gate_hz, int coast_frames = 2) {
  int next_id = 0;
  for (const auto& t : tracks) next_id = std::max(next_id, t.track_id + 1);
  track_peaks(tracks, peaks, tow, TrackerOptions{gate_hz, coast_frames}, next_id);
  return tracks;
}

// Stateful wrapper holding the tracks of one band.
class PeakTracker {
 public:
  explicit PeakTracker(TrackerOptions opt = {}) : opt_(opt) {}

  void update(const std::vector<Peak>& peaks, double tow) {
    if (last_tow_ && !(tow > *last_tow_)) throw SequencingError("snapshot timestamps must strictly increase");
    track_peaks(tracks_, peaks, tow, opt_, next_id_);
    last_tow_ = tow;
  }

  const std::vector<PeakTrack>& tracks() const { return tracks_; }
  const TrackerOptions& options() const { return opt_; }

 private:
  TrackerOptions opt_;
  std::vector<PeakTrack> tracks_;
  std::optional<double> last_tow_;
  int next_id_ = 0;
};

// Track carrying the largest summed magnitude; ties go to the older track.
inline const PeakTrack* dominant_track(const std::vector<PeakTrack>& tracks) {
  const PeakTrack* best = nullptr;
  for (const auto& t : tracks) {
    if (t.history.empty()) continue;
    if (!best || t.total_magnitude() > best->total_magnitude()) best = &t;
  }
  return best;
}

// Tracks whose summed magnitude is at least `ratio` of the strongest one.
inline std::vector<const PeakTrack*> dominant_tracks(const std::vector<PeakTrack>& tracks, double ratio = 0.25) {
  std::vector<const PeakTrack*> out;
  const PeakTrack* top = dominant_track(tracks);
  if (!top) return out;
  const double bar = ratio * top->total_magnitude();
  for (const auto& t : tracks)
    if (!t.history.empty() && t.total_magnitude() >= bar) out.push_back(&t);
  return out;
}

}  // namespace jamscan::detect
