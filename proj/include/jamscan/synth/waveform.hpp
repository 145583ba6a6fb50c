#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <string_view>

#include "jamscan/core/types.hpp"
#include "jamscan/synth/prn.hpp"

namespace jamscan::synth {

enum class WaveformKind { CW, CHIRP, SWEPT, BPSK_PRN };

// Instantaneous-frequency law of CHIRP and SWEPT waveforms within one period.
enum class SweepShape { Sawtooth, Triangle };

inline std::string_view to_string(WaveformKind k) {
  switch (k) {
    case WaveformKind::CW: return "CW";
    case WaveformKind::CHIRP: return "CHIRP";
    case WaveformKind::SWEPT: return "SWEPT";
    case WaveformKind::BPSK_PRN: return "BPSK_PRN";
  }
  return "CW";
}

inline WaveformKind waveform_kind_from_string(std::string_view s) {
  if (s == "CW") return WaveformKind::CW;
  if (s == "CHIRP") return WaveformKind::CHIRP;
  if (s == "SWEPT") return WaveformKind::SWEPT;
  if (s == "BPSK_PRN") return WaveformKind::BPSK_PRN;
  throw SpecificationError("unknown waveform kind '" + std::string(s) + "'");
}

struct WaveformSpec {
  WaveformKind kind = WaveformKind::CW;
  double center_offset_hz = 0.0;
  double bandwidth_hz = 0.0;
  std::optional<double> sweep_time_s;       // CHIRP and SWEPT only
  std::optional<double> chip_rate_cps;      // BPSK_PRN only
  std::optional<std::size_t> prn_length;    // BPSK_PRN only
  double power_dbm = 0.0;                   // relative scale, 0 dB -> unit power
  double phase_offset_rad = 0.0;
  SweepShape sweep_shape = SweepShape::Sawtooth;

  double linear_power() const { return db_to_linear(power_dbm); }
};

inline bool is_swept(WaveformKind k) { return k == WaveformKind::CHIRP || k == WaveformKind::SWEPT; }

// Field-combination checks that do not depend on a sample rate.
inline void validate(const WaveformSpec& spec) {
  const bool swept = is_swept(spec.kind);
  const bool bpsk = spec.kind == WaveformKind::BPSK_PRN;
  // power_dbm = -inf is an absent transmitter
  if (!std::isfinite(spec.center_offset_hz) || std::isnan(spec.power_dbm) || spec.power_dbm > 1e300 ||
      !std::isfinite(spec.phase_offset_rad))
    throw SpecificationError("waveform fields must be finite");
  if (!(spec.bandwidth_hz >= 0.0)) throw SpecificationError("bandwidth_hz must be >= 0");
  if (swept != spec.sweep_time_s.has_value())
    throw SpecificationError("sweep_time_s must be given exactly for CHIRP/SWEPT");
  if (swept && !(*spec.sweep_time_s > 0.0)) throw SpecificationError("sweep_time_s must be > 0");
  if (bpsk != spec.chip_rate_cps.has_value())
    throw SpecificationError("chip_rate_cps must be given exactly for BPSK_PRN");
  if (bpsk && !(*spec.chip_rate_cps > 0.0)) throw SpecificationError("chip_rate_cps must be > 0");
  if (!bpsk && spec.prn_length.has_value())
    throw SpecificationError("prn_length is only valid for BPSK_PRN");
  if (bpsk && spec.prn_length.has_value() && *spec.prn_length == 0)
    throw SpecificationError("prn_length must be > 0");
}

// Checks the waveform fits in the complex band of the given sample rate.
inline void validate(const WaveformSpec& spec, double sample_rate_hz) {
  validate(spec);
  if (spec.bandwidth_hz > sample_rate_hz)
    throw SpecificationError("bandwidth_hz exceeds the sampling bandwidth");
  if (!(sample_rate_hz > 2.0 * std::abs(spec.center_offset_hz) + spec.bandwidth_hz / 2.0))
    throw SpecificationError("sample rate too low for the waveform offset and bandwidth");
}

namespace detail {

// Integral of (u(x) - 1/2) over one normalized period, u the sweep law in [0, 1].
inline double sweep_phase_integral(double x, SweepShape shape) {
  if (shape == SweepShape::Sawtooth) return 0.5 * x * x - 0.5 * x;
  if (x < 0.5) return x * x - 0.5 * x;
  return 1.5 * x - x * x - 0.5;
}

inline double frac(double v) { return v - std::floor(v); }

}  // namespace detail

// Instantaneous frequency (Hz, relative to the channel center) at time t.
inline double instantaneous_frequency(const WaveformSpec& spec, double t) {
  if (!is_swept(spec.kind)) return spec.center_offset_hz;
  const double x = detail::frac(t / *spec.sweep_time_s);
  const double u = spec.sweep_shape == SweepShape::Sawtooth ? x : (x < 0.5 ? 2.0 * x : 2.0 - 2.0 * x);
  return spec.center_offset_hz + spec.bandwidth_hz * (u - 0.5);
}

// Noiseless jammer term A e^{j(2 pi int f + psi)}. start_time_s places the
// snapshot on the waveform's own time line so consecutive snapshots of a slow
// sweep continue where the previous one stopped.
inline IqSnapshot synth_waveform(const WaveformSpec& spec, double duration_s, double sample_rate_hz,
                                 std::uint64_t seed, double start_time_s = 0.0) {
  if (!(duration_s > 0.0) || !(sample_rate_hz > 0.0))
    throw DomainError("duration and sample rate must be positive");
  const double count = std::floor(duration_s * sample_rate_hz + 1e-9);
  if (count < 2.0) throw DomainError("duration x sample rate must be at least 2 samples");
  validate(spec, sample_rate_hz);

  const auto n = static_cast<std::size_t>(count);
  const double amp = std::sqrt(spec.linear_power());
  IqSnapshot snap;
  snap.sample_rate_hz = sample_rate_hz;
  snap.tow = start_time_s;
  snap.samples.resize(n);

  std::vector<int> chips;
  if (spec.kind == WaveformKind::BPSK_PRN) chips = prn_chips(spec.prn_length.value_or(1023), seed);

  for (std::size_t i = 0; i < n; ++i) {
    const double t = start_time_s + static_cast<double>(i) / sample_rate_hz;
    // carrier phase in cycles, reduced before scaling to keep precision at large t
    double cycles = detail::frac(spec.center_offset_hz * t);
    double sign = 1.0;
    if (is_swept(spec.kind)) {
      const double period = *spec.sweep_time_s;
      const double x = detail::frac(t / period);
      cycles += spec.bandwidth_hz * period * detail::sweep_phase_integral(x, spec.sweep_shape);
    } else if (spec.kind == WaveformKind::BPSK_PRN) {
      const auto chip = static_cast<std::uint64_t>(std::floor(t * *spec.chip_rate_cps + 1e-9));
      sign = chips[chip % chips.size()];
    }
    snap.samples[i] = amp * sign * std::polar(1.0, kTwoPi * cycles + spec.phase_offset_rad);
  }
  return snap;
}

// Adds circular Gaussian noise of total variance sigma2 (sigma2/2 per rail).
inline IqSnapshot add_awgn(IqSnapshot snap, double sigma2, std::uint64_t seed) {
  if (!(sigma2 >= 0.0) || !std::isfinite(sigma2)) throw DomainError("sigma2 must be >= 0");
  if (sigma2 == 0.0) return snap;
  std::mt19937_64 rng(detail::splitmix64(seed ^ 0xA5A5A5A5ULL));
  std::normal_distribution<double> gauss(0.0, std::sqrt(sigma2 / 2.0));
  for (auto& s : snap.samples) {
    const double re = gauss(rng);
    const double im = gauss(rng);
    s += Complex(re, im);
  }
  return snap;
}

// Zero-signal snapshot of n samples; feed to add_awgn for benign data.
inline IqSnapshot silence(std::size_t n, double sample_rate_hz, double tow = 0.0) {
  IqSnapshot snap;
  snap.samples.assign(n, Complex{});
  snap.sample_rate_hz = sample_rate_hz;
  snap.tow = tow;
  return snap;
}

inline IqSnapshot noise_snapshot(std::size_t n, double sample_rate_hz, double sigma2, std::uint64_t seed,
                                 double tow = 0.0) {
  return add_awgn(silence(n, sample_rate_hz, tow), sigma2, seed);
}

inline IqSnapshot scaled(IqSnapshot snap, Complex gain) {
  for (auto& s : snap.samples) s *= gain;
  return snap;
}

// Sample-wise sum; metadata comes from the first operand.
inline IqSnapshot superpose(IqSnapshot a, const IqSnapshot& b) {
  if (a.size() != b.size()) throw InputError("superpose: snapshot lengths differ");
  for (std::size_t i = 0; i < a.size(); ++i) a.samples[i] += b.samples[i];
  return a;
}

}  // namespace jamscan::synth
