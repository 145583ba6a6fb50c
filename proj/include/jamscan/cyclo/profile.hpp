#pragma once

#include <algorithm>
#include <vector>

#include "jamscan/cyclo/fam.hpp"

namespace jamscan::cyclo {

// Spectral correlation collapsed along spectral frequency, one value per
// cyclic-frequency column.
struct AlphaProfile {
  std::vector<double> values;
  std::vector<double> alpha_axis;  // normalized
  double sample_rate_hz = 0.0;
  double source_tow = 0.0;

  std::size_t size() const { return values.size(); }
  double max() const { return values.empty() ? 0.0 : *std::max_element(values.begin(), values.end()); }
  double alpha_bin() const { return alpha_axis.size() > 1 ? alpha_axis[1] - alpha_axis[0] : 0.0; }
};

// D(alpha) = (1/N') sum_f |S(f, alpha)|. The surface is a magnitude, so the
// sum runs over magnitudes.
inline AlphaProfile alpha_profile(const SpectralCorrelation& scd) {
  AlphaProfile out;
  out.alpha_axis = scd.alpha_axis;
  out.sample_rate_hz = scd.sample_rate_hz;
  out.source_tow = scd.source_tow;
  out.values.assign(scd.cols, 0.0);
  for (std::size_t r = 0; r < scd.rows; ++r) {
    const double* row = scd.values.data() + r * scd.cols;
    for (std::size_t c = 0; c < scd.cols; ++c) out.values[c] += row[c];
  }
  const double inv = 1.0 / static_cast<double>(scd.params.window_len);
  for (auto& v : out.values) v *= inv;
  return out;
}

}  // namespace jamscan::cyclo
