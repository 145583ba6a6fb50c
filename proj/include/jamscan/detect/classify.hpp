#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "jamscan/cyclo/autocorr.hpp"
#include "jamscan/cyclo/coherence.hpp"
#include "jamscan/cyclo/profile.hpp"
#include "jamscan/detect/tracker.hpp"

namespace jamscan::detect {

enum class Label { NONE, CW_TONE, CHIRP, SWEPT, BPSK_PRN, COMPOUND };

inline std::string_view to_string(Label l) {
  switch (l) {
    case Label::NONE: return "NONE";
    case Label::CW_TONE: return "CW_TONE";
    case Label::CHIRP: return "CHIRP";
    case Label::SWEPT: return "SWEPT";
    case Label::BPSK_PRN: return "BPSK_PRN";
    case Label::COMPOUND: return "COMPOUND";
  }
  return "NONE";
}

inline Label label_from_string(std::string_view s) {
  for (Label l : {Label::NONE, Label::CW_TONE, Label::CHIRP, Label::SWEPT, Label::BPSK_PRN, Label::COMPOUND})
    if (to_string(l) == s) return l;
  throw FormatError("unknown jammer class '" + std::string(s) + "'");
}

struct JammerClass {
  Label label = Label::NONE;
  std::map<std::string, double> evidence;
};

struct ClassifierOptions {
  double profile_threshold = 0.0;  // calibrated detection threshold on max D(alpha)
  double drift_bins = 2.0;         // per-snapshot drift separating CW from SWEPT
  double narrowband_bins = 8.0;    // occupied width of a tone
  double comb_z = 8.0;             // robust z-score each of the first two teeth must reach
  double comb_coherence = 0.25;    // PSD-weighted coherence at the fundamental tooth
  std::size_t comb_guard_bins = 4; // coarse f bins around alpha = 0 left out of the comb search
  double cluster_level = 0.1;      // PSD cluster membership, fraction of the peak excess
  double cluster_peak = 0.25;      // a cluster counts when its peak reaches this fraction
  double sweep_level = 0.5;        // autocorrelation return level for a sweep period
};

struct CombEvidence {
  double spacing_cols = 0.0;  // alpha columns, refined
  double spacing_norm = 0.0;  // normalized to the sample rate
  double spacing_hz = 0.0;
  double strength = 0.0;      // weaker of the first two teeth, robust z
  double coherence = 0.0;     // PSD-weighted coherence around the first tooth
  std::size_t tooth = 0;      // column of the first tooth
};

namespace detail {

inline double median_of(std::vector<double> v) {
  if (v.empty()) return 0.0;
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
  double m = v[mid];
  if (v.size() % 2 == 0) {
    const double lo = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
    m = 0.5 * (m + lo);
  }
  return m;
}

// Offset of the vertex of the parabola through (-1, a), (0, b), (1, c).
inline double parabolic_offset(double a, double b, double c) {
  const double den = a - 2.0 * b + c;
  if (!(std::abs(den) > 0.0)) return 0.0;
  return std::clamp(0.5 * (a - c) / den, -0.5, 0.5);
}

}  // namespace detail

// Excess of the profile over its running median, in robust z units. Columns
// inside the guard around alpha = 0 are zero.
inline std::vector<double> profile_excess(const cyclo::AlphaProfile& profile, std::size_t guard_cols,
                                          std::size_t half_window) {
  const std::size_t n = profile.size();
  std::vector<double> resid(n, 0.0);
  if (n <= guard_cols + 2) return resid;
  std::vector<double> win;
  for (std::size_t c = guard_cols; c < n; ++c) {
    const std::size_t lo = c >= guard_cols + half_window ? c - half_window : guard_cols;
    const std::size_t hi = std::min(n - 1, c + half_window);
    win.assign(profile.values.begin() + static_cast<std::ptrdiff_t>(lo),
               profile.values.begin() + static_cast<std::ptrdiff_t>(hi + 1));
    resid[c] = profile.values[c] - detail::median_of(win);
  }
  std::vector<double> tail(resid.begin() + static_cast<std::ptrdiff_t>(guard_cols), resid.end());
  const double med = detail::median_of(tail);
  for (auto& t : tail) t = std::abs(t - med);
  const double sigma = 1.4826 * detail::median_of(tail);
  for (std::size_t c = guard_cols; c < n; ++c) resid[c] = sigma > 0.0 ? (resid[c] - med) / sigma : 0.0;
  return resid;
}

// Uniform alpha comb anchored at the alpha = 0 ridge. Every spacing s past
// the guard is scored by the weaker of the teeth at s and 2s (each allowed
// one column of slack); the best score wins. The spacing is then refined from
// the sub-column positions of both teeth.
inline CombEvidence comb_analysis(const cyclo::AlphaProfile& profile, const cyclo::CoherenceMap& coh,
                                  const ClassifierOptions& opt = {}) {
  CombEvidence ev;
  const std::size_t n = profile.size();
  if (coh.psd.empty() || n == 0) return ev;
  const std::size_t cols_per_bin = std::max<std::size_t>(n / coh.psd.size(), 1);
  const std::size_t guard = std::max<std::size_t>(opt.comb_guard_bins * cols_per_bin, 2);
  if (n < 2 * guard + 4) return ev;
  const auto z = profile_excess(profile, guard, 2 * cols_per_bin);

  auto tooth_at = [&](std::size_t c) {
    std::size_t best = c;
    for (std::size_t d = c > 0 ? c - 1 : c; d <= std::min(n - 1, c + 1); ++d)
      if (z[d] > z[best]) best = d;
    return best;
  };

  double best_score = -1.0;
  std::size_t best_s = 0;
  for (std::size_t s = guard; 2 * s + 1 < n; ++s) {
    const double score = std::min(z[tooth_at(s)], z[tooth_at(2 * s)]);
    if (score > best_score) {
      best_score = score;
      best_s = s;
    }
  }
  if (best_s == 0) return ev;

  auto refined = [&](std::size_t c) {
    if (c == 0 || c + 1 >= n) return static_cast<double>(c);
    return static_cast<double>(c) + detail::parabolic_offset(profile.values[c - 1], profile.values[c], profile.values[c + 1]);
  };
  const std::size_t t1 = tooth_at(best_s);
  const std::size_t t2 = tooth_at(2 * best_s);
  ev.tooth = t1;
  ev.spacing_cols = (refined(t1) + 2.0 * refined(t2)) / 5.0;
  ev.spacing_norm = ev.spacing_cols * profile.alpha_bin();
  ev.spacing_hz = ev.spacing_norm * profile.sample_rate_hz;
  ev.strength = best_score;

  ev.coherence = std::max({coh.column_coherence(t1 - 1), coh.column_coherence(t1), coh.column_coherence(t1 + 1)});
  return ev;
}

struct SpectralOccupancy {
  std::size_t occupied_bins = 0;  // PSD bins above the membership level
  std::size_t clusters = 0;       // circular runs of such bins whose peak is significant
};

// Occupancy of the frame-averaged PSD above its noise floor, taken as the
// 10th percentile of the bins. A PSD with no contrast over that floor (less
// than 2:1) counts as one cluster filling the band.
inline SpectralOccupancy spectral_occupancy(const std::vector<double>& psd, double level, double peak_level) {
  SpectralOccupancy out;
  const std::size_t n = psd.size();
  if (n == 0) return out;
  std::vector<double> sorted = psd;
  std::sort(sorted.begin(), sorted.end());
  const double floor = sorted[n / 10];
  const double top = sorted.back() - floor;
  if (!(top > 0.0)) return out;
  if (top < floor) {
    out.occupied_bins = n;
    out.clusters = 1;
    return out;
  }
  std::vector<char> member(n);
  for (std::size_t k = 0; k < n; ++k) {
    member[k] = (psd[k] - floor) > level * top;
    out.occupied_bins += member[k] ? 1 : 0;
  }
  if (out.occupied_bins == n) {
    out.clusters = 1;
    return out;
  }
  // close gaps of up to two bins so ripple inside one emission does not split it
  std::vector<char> grown(n), closed(n);
  for (std::size_t k = 0; k < n; ++k) grown[k] = member[(k + n - 1) % n] || member[k] || member[(k + 1) % n];
  for (std::size_t k = 0; k < n; ++k) closed[k] = grown[(k + n - 1) % n] && grown[k] && grown[(k + 1) % n];
  for (std::size_t k = 0; k < n; ++k) closed[k] = closed[k] || member[k];
  member.swap(closed);
  if (std::all_of(member.begin(), member.end(), [](char c) { return c != 0; })) {
    out.clusters = 1;
    return out;
  }
  // start scanning just after a non-member bin so wrapped runs stay whole
  std::size_t start = 0;
  while (member[start]) ++start;
  double run_peak = -1.0;
  for (std::size_t i = 1; i <= n; ++i) {
    const std::size_t k = (start + i) % n;
    if (member[k]) {
      run_peak = std::max(run_peak, psd[k] - floor);
    } else if (run_peak >= 0.0) {
      if (run_peak >= peak_level * top) ++out.clusters;
      run_peak = -1.0;
    }
  }
  return out;
}

// Rule-based label from the evidence of one snapshot and the tracks seen so
// far. Rules in order: nothing above threshold, several spectral clusters,
// measurable sweep period, alpha comb, frequency drift, narrow occupancy.
inline JammerClass classify(const std::vector<PeakTrack>& tracks, const cyclo::AlphaProfile& profile,
                            const cyclo::CoherenceMap& coh, const cyclo::AutocorrResult& ac,
                            const ClassifierOptions& opt = {}) {
  JammerClass out;
  auto& ev = out.evidence;

  const double bin_hz = coh.bin_hz > 0.0 ? coh.bin_hz : 1.0;
  double latest = -std::numeric_limits<double>::infinity();
  for (const auto& t : tracks)
    if (!t.history.empty()) latest = std::max(latest, t.last_tow());
  std::size_t peak_count = 0;
  for (const auto& t : tracks)
    if (!t.history.empty() && t.last_tow() == latest) ++peak_count;
  const PeakTrack* dom = dominant_track(tracks);
  const double drift = dom ? dom->mean_step_hz() / bin_hz : 0.0;

  const auto occ = spectral_occupancy(coh.psd, opt.cluster_level, opt.cluster_peak);
  const auto comb = comb_analysis(profile, coh, opt);
  const auto period = cyclo::sweep_period(ac, opt.sweep_level);
  const double pmax = profile.max();
  std::size_t peak_col = 0;
  if (!profile.values.empty())
    peak_col = static_cast<std::size_t>(std::max_element(profile.values.begin(), profile.values.end()) - profile.values.begin());

  ev["peak_count"] = static_cast<double>(peak_count);
  ev["track_count"] = static_cast<double>(tracks.size());
  ev["drift_bins_per_snapshot"] = drift;
  ev["comb_spacing_alpha"] = comb.spacing_norm;
  ev["comb_spacing_hz"] = comb.spacing_hz;
  ev["comb_strength"] = comb.strength;
  ev["comb_coherence"] = comb.coherence;
  ev["sweep_period_samples"] = period ? period->refined_lag : 0.0;
  ev["sweep_period_s"] = period ? period->period_s : 0.0;
  ev["autocorr_stat"] = ac.statistic;
  ev["autocorr_best_lag"] = static_cast<double>(ac.best_lag);
  ev["occupied_bw_bins"] = static_cast<double>(occ.occupied_bins);
  ev["occupied_bw_hz"] = static_cast<double>(occ.occupied_bins) * bin_hz;
  ev["spectral_clusters"] = static_cast<double>(occ.clusters);
  ev["profile_max"] = pmax;
  ev["profile_peak_alpha"] = peak_col < profile.alpha_axis.size() ? profile.alpha_axis[peak_col] : 0.0;

  // a cyclic feature at alpha needs spectral support at f +- alpha/2
  const bool comb_ok = comb.strength >= opt.comb_z && comb.coherence >= opt.comb_coherence &&
                       comb.spacing_hz <= static_cast<double>(occ.occupied_bins) * bin_hz;

  if (!(pmax > opt.profile_threshold)) out.label = Label::NONE;
  else if (occ.clusters >= 2) out.label = Label::COMPOUND;
  else if (period) out.label = Label::CHIRP;
  else if (comb_ok) out.label = Label::BPSK_PRN;
  else if (drift > opt.drift_bins) out.label = Label::SWEPT;
  else if (static_cast<double>(occ.occupied_bins) <= opt.narrowband_bins) out.label = Label::CW_TONE;
  else out.label = Label::SWEPT;
  return out;
}

}  // namespace jamscan::detect
