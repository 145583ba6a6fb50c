#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <span>
#include <vector>

#include "jamscan/core/types.hpp"
#include "jamscan/cyclo/fft.hpp"

namespace jamscan::cyclo {

// Channelizer geometry: N' samples per frame, hop L between frame starts.
struct FamParams {
  std::size_t window_len = 256;
  std::size_t hop = 64;
};

inline void validate(const FamParams& p) {
  if (p.window_len < 2 || !is_power_of_two(p.window_len))
    throw ConfigurationError("FAM window length must be a power of two > 1");
  if (p.hop == 0 || p.hop >= p.window_len) throw ConfigurationError("FAM hop must satisfy 0 < L < N'");
}

inline std::size_t frame_count(std::size_t n, const FamParams& p) {
  return n < p.window_len ? 0 : (n - p.window_len) / p.hop + 1;
}

// Row-major P x N' view of overlapping frames.
struct FrameMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<Complex> data;

  std::span<const Complex> row(std::size_t i) const { return {data.data() + i * cols, cols}; }
};

// Row i holds samples [iL, iL + N'); the tail that does not fill a frame is dropped.
inline FrameMatrix channelize(const IqSnapshot& snap, const FamParams& params) {
  validate(params);
  if (snap.size() < params.window_len)
    throw InsufficientDataError("snapshot shorter than the FAM window");
  FrameMatrix m;
  m.rows = frame_count(snap.size(), params);
  m.cols = params.window_len;
  m.data.resize(m.rows * m.cols);
  for (std::size_t i = 0; i < m.rows; ++i)
    std::copy_n(snap.samples.begin() + static_cast<std::ptrdiff_t>(i * params.hop), m.cols,
                m.data.begin() + static_cast<std::ptrdiff_t>(i * m.cols));
  return m;
}

// Symmetric Hamming taper.
inline std::vector<double> hamming(std::size_t n) {
  std::vector<double> w(n, 1.0);
  if (n < 2) return w;
  for (std::size_t i = 0; i < n; ++i)
    w[i] = 0.54 - 0.46 * std::cos(kTwoPi * static_cast<double>(i) / static_cast<double>(n - 1));
  return w;
}

// Magnitude of the non-conjugate spectral correlation on a dense (f, alpha)
// grid, alpha >= 0.
//
// Rows are spectral frequency on a half-bin grid, f = (row - N')/2 * fs/N'.
// Columns are normalized cyclic frequency, alpha = col / (M L), where M is the
// across-frame transform length. Each cell is owned by one channel pair
// (k1, k2) with f = (k1 + k2) / 2N', alpha = (k1 - k2)/N' + q/(M L); the
// cells with q = 0 are the plain frame average of the compensated products.
// Cells whose pair falls outside the band are zero and not in the support.
struct SpectralCorrelation {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> values;
  std::vector<double> freq_axis;   // Hz
  std::vector<double> alpha_axis;  // normalized to the sample rate
  std::vector<double> psd;         // N' bins, index k + N'/2, frame-averaged periodogram
  FamParams params;
  std::size_t frames = 0;          // P
  std::size_t transform_len = 0;   // M
  std::size_t cols_per_bin = 0;    // K = M L / N'
  double sample_rate_hz = 0.0;
  double source_tow = 0.0;
  Band band = Band::L1;

  struct Pair {
    int k1;  // signed bin, [-N'/2, N'/2)
    int k2;
    int q;   // across-frame bin offset
  };

  double at(std::size_t r, std::size_t c) const { return values[r * cols + c]; }
  double& at(std::size_t r, std::size_t c) { return values[r * cols + c]; }

  double alpha_hz(std::size_t c) const { return alpha_axis[c] * sample_rate_hz; }
  double bin_hz() const { return sample_rate_hz / static_cast<double>(params.window_len); }
  double alpha_bin_hz() const { return sample_rate_hz / static_cast<double>(transform_len * params.hop); }

  std::optional<Pair> pair_at(std::size_t r, std::size_t c) const {
    const auto np = static_cast<long>(params.window_len);
    const auto k = static_cast<long>(cols_per_bin);
    const long s = static_cast<long>(r) - np;
    const long parity = ((s % 2) + 2) % 2;
    const long a = static_cast<long>(c);
    const long d = parity + 2 * ((a - parity * k + k) / (2 * k));
    const long q = a - d * k;
    const long k1 = (s + d) / 2;
    const long k2 = (s - d) / 2;
    const long half_m = static_cast<long>(transform_len) / 2;
    if (k1 < -np / 2 || k1 >= np / 2 || k2 < -np / 2 || k2 >= np / 2) return std::nullopt;
    if (q < -half_m || q >= half_m) return std::nullopt;
    return Pair{static_cast<int>(k1), static_cast<int>(k2), static_cast<int>(q)};
  }

  bool in_support(std::size_t r, std::size_t c) const { return pair_at(r, c).has_value(); }

  double max_value() const { return values.empty() ? 0.0 : *std::max_element(values.begin(), values.end()); }

  // PSD bin value for signed bin k.
  double psd_at(int k) const { return psd[static_cast<std::size_t>(k + static_cast<int>(params.window_len / 2))]; }

  // Row holding the alpha = 0 periodogram value of signed bin k.
  std::size_t row_of_bin(int k) const {
    return static_cast<std::size_t>(2 * k + static_cast<int>(params.window_len));
  }
};

// FFT accumulation method. Frames are Hamming-tapered and transformed; each
// bin is phase-compensated by exp(-j 2 pi k i L / N') so all frames share the
// absolute time origin; conjugate products of bin pairs are averaged over the
// P frames through an M-point transform (M >= P, zero-padded). Values are
// scaled by 1 / sum(w^2), so white noise of variance s2 has PSD ~ s2.
inline SpectralCorrelation fam_scd(const IqSnapshot& snap, const FamParams& params) {
  const FrameMatrix frames = channelize(snap, params);
  const std::size_t np = params.window_len;
  const std::size_t p = frames.rows;
  const std::size_t half = np / 2;

  const auto w = hamming(np);
  const double w_energy = std::inner_product(w.begin(), w.end(), w.begin(), 0.0);

  std::vector<Complex> buf(p * np);
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t m = 0; m < np; ++m) buf[i * np + m] = frames.data[i * np + m] * w[m];
  std::vector<Complex> spec(p * np);
  {
    FftPlan plan(static_cast<int>(np), static_cast<int>(p), buf.data(), spec.data());
    plan.execute(buf.data(), spec.data());
  }

  // shifted[i][k + N'/2] = compensated bin k of frame i
  std::vector<Complex> shifted(p * np);
  for (std::size_t i = 0; i < p; ++i) {
    const double delay = static_cast<double>(i * params.hop);
    for (std::size_t j = 0; j < np; ++j) {
      const long k = j < half ? static_cast<long>(j) : static_cast<long>(j) - static_cast<long>(np);
      // reduce k * iL mod N' exactly before taking the phase
      const auto cyc = static_cast<long>((static_cast<long long>(k) * static_cast<long long>(delay)) %
                                         static_cast<long long>(np));
      const double phase = -kTwoPi * static_cast<double>(cyc) / static_cast<double>(np);
      shifted[i * np + static_cast<std::size_t>(k + static_cast<long>(half))] = spec[i * np + j] * std::polar(1.0, phase);
    }
  }

  SpectralCorrelation out;
  out.params = params;
  out.frames = p;
  out.sample_rate_hz = snap.sample_rate_hz;
  out.source_tow = snap.tow;
  out.band = snap.band;

  const std::size_t coarse = np / std::gcd(np, params.hop);
  const std::size_t m_len = std::max(next_power_of_two(p), std::max<std::size_t>(coarse, 2));
  const std::size_t k_cols = m_len * params.hop / np;
  out.transform_len = m_len;
  out.cols_per_bin = k_cols;
  out.rows = 2 * np - 1;
  out.cols = np * k_cols;
  out.values.assign(out.rows * out.cols, 0.0);

  out.freq_axis.resize(out.rows);
  for (std::size_t r = 0; r < out.rows; ++r)
    out.freq_axis[r] = 0.5 * (static_cast<double>(r) - static_cast<double>(np)) * out.bin_hz();
  out.alpha_axis.resize(out.cols);
  for (std::size_t c = 0; c < out.cols; ++c)
    out.alpha_axis[c] = static_cast<double>(c) / static_cast<double>(m_len * params.hop);

  const double scale = 1.0 / (static_cast<double>(p) * w_energy);
  out.psd.assign(np, 0.0);
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t k = 0; k < np; ++k) out.psd[k] += std::norm(shifted[i * np + k]);
  for (auto& v : out.psd) v *= scale;

  // bin-major copy so each pair reads two contiguous runs
  std::vector<Complex> by_bin(np * p);
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t b = 0; b < np; ++b) by_bin[b * p + i] = shifted[i * np + b];

  std::vector<Complex> z(m_len), zf(m_len);
  FftPlan across(static_cast<int>(m_len), 1, z.data(), zf.data());
  const long kc = static_cast<long>(k_cols);
  const long half_m = static_cast<long>(m_len) / 2;
  const long q_lo = std::max(-kc, -half_m);
  const long q_hi = std::min(kc, half_m);
  for (std::size_t d = 0; d < np; ++d) {
    for (std::size_t b2 = 0; b2 + d < np; ++b2) {
      const std::size_t b1 = b2 + d;
      const Complex* x1 = by_bin.data() + b1 * p;
      const Complex* x2 = by_bin.data() + b2 * p;
      for (std::size_t i = 0; i < p; ++i) z[i] = x1[i] * std::conj(x2[i]);
      std::fill(z.begin() + static_cast<std::ptrdiff_t>(p), z.end(), Complex{});
      across.execute(z.data(), zf.data());
      const std::size_t row = b1 + b2;  // (k1 + k2) + N' with k = b - N'/2
      double* dst = out.values.data() + row * out.cols;
      for (long q = q_lo; q < q_hi; ++q) {
        const long a = static_cast<long>(d) * kc + q;
        if (a < 0 || a >= static_cast<long>(out.cols)) continue;
        const auto qi = static_cast<std::size_t>((q + static_cast<long>(m_len)) % static_cast<long>(m_len));
        dst[a] = std::abs(zf[qi]) * scale;
      }
    }
  }
  return out;
}

}  // namespace jamscan::cyclo
