#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "jamscan/cyclo/fam.hpp"

namespace jamscan::cyclo {

// Spectral coherence on the grid of its source correlation.
struct CoherenceMap {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> values;  // [0, 1], zero outside the correlation support
  std::vector<double> freq_axis;
  std::vector<double> alpha_axis;
  std::vector<double> denom;   // sqrt(S0(k1) S0(k2)) of each cell, zero outside the support
  std::vector<double> psd;     // copy of the source PSD
  double sample_rate_hz = 0.0;
  double bin_hz = 0.0;

  double at(std::size_t r, std::size_t c) const { return values[r * cols + c]; }

  // Coherence of a whole alpha column, each cell weighted by its PSD support.
  double column_coherence(std::size_t c) const {
    double num = 0.0, den = 0.0;
    for (std::size_t r = 0; r < rows; ++r) {
      num += values[r * cols + c] * denom[r * cols + c];
      den += denom[r * cols + c];
    }
    return den > 0.0 ? num / den : 0.0;
  }
};

// |S(f, a)| / sqrt(S0(f + a/2) S0(f - a/2)) where the two PSD values are
// those of the channel pair that produced the cell. The denominator is
// floored at 1e-12 of the surface maximum.
inline CoherenceMap coherence(const SpectralCorrelation& scd) {
  CoherenceMap out;
  out.rows = scd.rows;
  out.cols = scd.cols;
  out.freq_axis = scd.freq_axis;
  out.alpha_axis = scd.alpha_axis;
  out.psd = scd.psd;
  out.sample_rate_hz = scd.sample_rate_hz;
  out.bin_hz = scd.bin_hz();
  out.values.assign(scd.values.size(), 0.0);
  out.denom.assign(scd.values.size(), 0.0);

  const double floor = 1e-12 * scd.max_value();
  if (!(floor > 0.0)) return out;
  for (std::size_t r = 0; r < scd.rows; ++r) {
    for (std::size_t c = 0; c < scd.cols; ++c) {
      const auto pair = scd.pair_at(r, c);
      if (!pair) continue;
      const double denom = std::max(std::sqrt(scd.psd_at(pair->k1) * scd.psd_at(pair->k2)), floor);
      const double v = scd.at(r, c) / denom;
      // bounded by 1 (Cauchy-Schwarz) up to rounding
      out.values[r * out.cols + c] = std::clamp(v, 0.0, 1.0);
      out.denom[r * out.cols + c] = denom;
    }
  }
  return out;
}

}  // namespace jamscan::cyclo
