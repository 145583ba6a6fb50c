#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <vector>

#include "jamscan/core/types.hpp"
#include "jamscan/cyclo/fft.hpp"

namespace jamscan::cyclo {

struct AutocorrResult {
  // |C_X(tau)| for tau = 0 .. N/2, each lag normalized by its overlap count
  // N - tau. Negative lags mirror positive ones.
  std::vector<double> magnitudes;
  double statistic = 0.0;       // D_c, max over the non-zero lags
  std::ptrdiff_t best_lag = 0;  // smallest positive lag reaching D_c
  double sample_rate_hz = 0.0;
};

// Lags within this relative distance of the maximum count as ties.
inline constexpr double kAutocorrTieTolerance = 1e-9;

inline AutocorrResult cyclic_autocorr(const IqSnapshot& snap) {
  const std::size_t n = snap.size();
  if (n < 4) throw InsufficientDataError("cyclic autocorrelation needs at least 4 samples");
  const std::size_t nfft = next_power_of_two(2 * n);
  std::vector<Complex> buf(nfft), spec(nfft);
  std::copy(snap.samples.begin(), snap.samples.end(), buf.begin());
  FftPlan fwd(static_cast<int>(nfft), 1, buf.data(), spec.data(), FftDirection::Forward);
  FftPlan inv(static_cast<int>(nfft), 1, spec.data(), buf.data(), FftDirection::Backward);
  fwd.execute(buf.data(), spec.data());
  for (auto& v : spec) v = std::norm(v);
  inv.execute(spec.data(), buf.data());

  AutocorrResult out;
  out.sample_rate_hz = snap.sample_rate_hz;
  const std::size_t max_lag = n / 2;
  out.magnitudes.resize(max_lag + 1);
  for (std::size_t tau = 0; tau <= max_lag; ++tau)
    out.magnitudes[tau] = std::abs(buf[tau]) / (static_cast<double>(nfft) * static_cast<double>(n - tau));

  double best = 0.0;
  for (std::size_t tau = 1; tau <= max_lag; ++tau) best = std::max(best, out.magnitudes[tau]);
  out.statistic = best;
  for (std::size_t tau = 1; tau <= max_lag; ++tau) {
    if (out.magnitudes[tau] >= best * (1.0 - kAutocorrTieTolerance)) {
      out.best_lag = static_cast<std::ptrdiff_t>(tau);
      break;
    }
  }
  return out;
}

struct SweepPeriod {
  std::size_t lag = 0;        // integer lag of the repetition peak
  double refined_lag = 0.0;   // parabolic refinement, samples
  double period_s = 0.0;
  double relative_height = 0.0;  // peak / zero-lag value
};

// D_c below this fraction of C(0) means the block is mostly white noise and
// has no usable repetition structure.
inline constexpr double kSweepMinCorrelation = 0.25;

// Repetition period of the signal. The reference is D_c, which white noise
// barely touches. The lobe around zero lag must fall below `level` x D_c and
// the strongest lag after that dip must climb back above it. Noise, pure
// tones and PRNs longer than N/2 return nullopt.
inline std::optional<SweepPeriod> sweep_period(const AutocorrResult& ac, double level = 0.5) {
  const auto& m = ac.magnitudes;
  if (m.size() < 3 || !(m[0] > 0.0)) return std::nullopt;
  const double ref = ac.statistic;
  if (ref < kSweepMinCorrelation * m[0]) return std::nullopt;
  const double floor = level * ref;
  std::size_t start = 1;
  while (start < m.size() && m[start] >= floor) ++start;
  if (start >= m.size()) return std::nullopt;
  double best = 0.0;
  for (std::size_t t = start; t < m.size(); ++t) best = std::max(best, m[t]);
  if (best < floor) return std::nullopt;
  std::size_t lag = start;
  for (std::size_t t = start; t < m.size(); ++t) {
    if (m[t] >= best * (1.0 - kAutocorrTieTolerance)) {
      lag = t;
      break;
    }
  }
  SweepPeriod sp;
  sp.lag = lag;
  sp.refined_lag = static_cast<double>(lag);
  if (lag + 1 < m.size()) {
    const double y0 = m[lag - 1], y1 = m[lag], y2 = m[lag + 1];
    const double den = y0 - 2.0 * y1 + y2;
    if (den < 0.0) sp.refined_lag += std::clamp(0.5 * (y0 - y2) / den, -0.5, 0.5);
  }
  sp.period_s = sp.refined_lag / ac.sample_rate_hz;
  sp.relative_height = best / m[0];
  return sp;
}

}  // namespace jamscan::cyclo
