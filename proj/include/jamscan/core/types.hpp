#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "jamscan/core/errors.hpp"

namespace jamscan {

using Complex = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

enum class Band : std::uint16_t { L1 = 0, L2 = 1, L5 = 2, OTHER = 3 };

inline std::string_view to_string(Band b) {
  switch (b) {
    case Band::L1: return "L1";
    case Band::L2: return "L2";
    case Band::L5: return "L5";
    case Band::OTHER: return "OTHER";
  }
  return "OTHER";
}

inline Band band_from_string(std::string_view s) {
  if (s == "L1") return Band::L1;
  if (s == "L2") return Band::L2;
  if (s == "L5") return Band::L5;
  if (s == "OTHER") return Band::OTHER;
  throw ConfigurationError("unknown band '" + std::string(s) + "'");
}

// One block of complex baseband samples as delivered by the receiver.
struct IqSnapshot {
  std::vector<Complex> samples;
  double sample_rate_hz = 0.0;
  double center_freq_hz = 0.0;
  double tow = 0.0;  // seconds, time-of-week or any monotonic tag
  Band band = Band::L1;

  std::size_t size() const { return samples.size(); }
  bool empty() const { return samples.empty(); }
  std::span<const Complex> view() const { return samples; }
};

// Throws InputError if the snapshot breaks the basic invariants.
inline void validate(const IqSnapshot& snap) {
  if (snap.samples.empty()) throw InsufficientDataError("snapshot has no samples");
  if (!(snap.sample_rate_hz > 0.0) || !std::isfinite(snap.sample_rate_hz))
    throw InputError("snapshot sample rate must be positive");
  for (const auto& s : snap.samples) {
    if (!std::isfinite(s.real()) || !std::isfinite(s.imag()))
      throw InputError("snapshot contains non-finite samples");
  }
}

// Wraps an angle to [-pi, pi).
inline double wrap_angle(double a) {
  double w = std::fmod(a + kPi, kTwoPi);
  if (w < 0.0) w += kTwoPi;
  return w - kPi;
}

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double lin) { return 10.0 * std::log10(lin); }

}  // namespace jamscan
