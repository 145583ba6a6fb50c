#pragma once

#include <algorithm>
#include <cstddef>
#include <vector>

#include "jamscan/cyclo/fam.hpp"
#include "jamscan/cyclo/profile.hpp"

namespace jamscan::detect {

struct Peak {
  double magnitude = 0.0;
  double freq_center_hz = 0.0;  // 0 for profile peaks
  double alpha_center = 0.0;    // normalized cyclic frequency
  std::size_t row = 0;          // f bin
  std::size_t col = 0;          // alpha bin
};

namespace detail {

// A cell is a peak when it beats every neighbour with a lower linear index
// and is not beaten by any neighbour with a higher one. Strict maxima pass;
// on a plateau only the lowest-index cell survives.
inline bool is_local_max(const std::vector<double>& v, std::size_t rows, std::size_t cols, std::size_t r,
                         std::size_t c, bool diagonal) {
  const double x = v[r * cols + c];
  for (int dr = -1; dr <= 1; ++dr) {
    for (int dc = -1; dc <= 1; ++dc) {
      if (dr == 0 && dc == 0) continue;
      if (!diagonal && dr != 0 && dc != 0) continue;
      const long rr = static_cast<long>(r) + dr;
      const long cc = static_cast<long>(c) + dc;
      if (rr < 0 || cc < 0 || rr >= static_cast<long>(rows) || cc >= static_cast<long>(cols)) continue;
      const double y = v[static_cast<std::size_t>(rr) * cols + static_cast<std::size_t>(cc)];
      const bool lower = dr < 0 || (dr == 0 && dc < 0);
      if (lower ? y >= x : y > x) return false;
    }
  }
  return true;
}

inline void sort_peaks(std::vector<Peak>& peaks) {
  std::stable_sort(peaks.begin(), peaks.end(), [](const Peak& a, const Peak& b) {
    if (a.magnitude != b.magnitude) return a.magnitude > b.magnitude;
    if (a.row != b.row) return a.row < b.row;
    return a.col < b.col;
  });
}

}  // namespace detail

// Local maxima of the surface over its 8-neighbourhood with magnitude >=
// threshold, strongest first.
inline std::vector<Peak> find_peaks(const cyclo::SpectralCorrelation& scd, double threshold) {
  std::vector<Peak> out;
  for (std::size_t r = 0; r < scd.rows; ++r) {
    for (std::size_t c = 0; c < scd.cols; ++c) {
      const double x = scd.at(r, c);
      if (!(x >= threshold)) continue;
      if (!detail::is_local_max(scd.values, scd.rows, scd.cols, r, c, true)) continue;
      out.push_back({x, scd.freq_axis[r], scd.alpha_axis[c], r, c});
    }
  }
  detail::sort_peaks(out);
  return out;
}

// Same rule on a profile, with the two adjacent columns as neighbours.
inline std::vector<Peak> find_peaks(const cyclo::AlphaProfile& profile, double threshold) {
  std::vector<Peak> out;
  const std::size_t n = profile.size();
  for (std::size_t c = 0; c < n; ++c) {
    const double x = profile.values[c];
    if (!(x >= threshold)) continue;
    if (!detail::is_local_max(profile.values, 1, n, 0, c, false)) continue;
    out.push_back({x, 0.0, profile.alpha_axis[c], 0, c});
  }
  detail::sort_peaks(out);
  return out;
}

}  // namespace jamscan::detect
