#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "jamscan/core/types.hpp"
#include "jamscan/io/bytes.hpp"

namespace jamscan::io {

// Interleaved IQ record file, little-endian:
//   "JSIQ" | u16 version | u16 band | f64 sample_rate_hz | f64 center_freq_hz | u32 record_count
//   per record: f64 tow | u32 value_count | value_count x f32 (I0 Q0 I1 Q1 ...)
inline constexpr char kIqMagic[4] = {'J', 'S', 'I', 'Q'};
inline constexpr std::uint16_t kIqVersion = 1;

struct IqFileHeader {
  double sample_rate_hz = 0.0;
  double center_freq_hz = 0.0;
  Band band = Band::L1;
};

struct IqFile {
  IqFileHeader header;
  std::vector<IqSnapshot> snapshots;
};

inline IqFile parse_iq_file(const Bytes& bytes) {
  ByteReader in(bytes);
  char magic[4];
  if (bytes.size() < 4) throw FormatError("not an IQ record file: too short for the magic");
  in.raw(magic, 4);
  if (std::memcmp(magic, kIqMagic, 4) != 0) throw FormatError("not an IQ record file: bad magic");
  IqFile f;
  try {
    const auto version = in.get<std::uint16_t>();
    if (version != kIqVersion) throw FormatError("unsupported IQ file version " + std::to_string(version));
    const auto band = in.get<std::uint16_t>();
    if (band > static_cast<std::uint16_t>(Band::OTHER)) throw FormatError("unknown band id " + std::to_string(band));
    f.header.band = static_cast<Band>(band);
    f.header.sample_rate_hz = in.get<double>();
    f.header.center_freq_hz = in.get<double>();
  } catch (const CorruptionError&) {
    throw FormatError("IQ file header is truncated");
  }
  if (!(f.header.sample_rate_hz > 0.0) || !std::isfinite(f.header.sample_rate_hz))
    throw FormatError("IQ file header has a non-positive sample rate");
  if (!std::isfinite(f.header.center_freq_hz)) throw FormatError("IQ file header has a non-finite center frequency");
  const auto count = in.get<std::uint32_t>();

  f.snapshots.reserve(std::min<std::size_t>(count, 1 << 16));
  for (std::uint32_t r = 0; r < count; ++r) {
    IqSnapshot s;
    s.sample_rate_hz = f.header.sample_rate_hz;
    s.center_freq_hz = f.header.center_freq_hz;
    s.band = f.header.band;
    s.tow = in.get<double>();
    if (!std::isfinite(s.tow)) throw CorruptionError("record " + std::to_string(r) + " has a non-finite tow");
    const auto values = in.get<std::uint32_t>();
    if (values % 2 != 0) throw CorruptionError("record " + std::to_string(r) + " has an odd value count");
    if (values == 0) throw CorruptionError("record " + std::to_string(r) + " is empty");
    if (static_cast<std::size_t>(values) * 4 > in.remaining())
      throw CorruptionError("record " + std::to_string(r) + " is truncated");
    s.samples.resize(values / 2);
    for (auto& z : s.samples) {
      const float re = in.get<float>();
      const float im = in.get<float>();
      if (!std::isfinite(re) || !std::isfinite(im))
        throw CorruptionError("record " + std::to_string(r) + " contains non-finite values");
      z = Complex(re, im);
    }
    f.snapshots.push_back(std::move(s));
  }
  if (in.remaining() != 0) throw CorruptionError("trailing bytes after the last record");
  return f;
}

inline std::vector<IqSnapshot> parse_iq(const Bytes& bytes) { return parse_iq_file(bytes).snapshots; }

// Samples are stored as 32-bit floats; values outside float range are an
// input error rather than a silent overflow.
inline Bytes write_iq(const IqFile& f) {
  if (f.snapshots.size() > std::numeric_limits<std::uint32_t>::max()) throw InputError("too many records");
  ByteWriter out;
  out.raw(kIqMagic, 4);
  out.put<std::uint16_t>(kIqVersion);
  out.put<std::uint16_t>(static_cast<std::uint16_t>(f.header.band));
  out.put<double>(f.header.sample_rate_hz);
  out.put<double>(f.header.center_freq_hz);
  out.put<std::uint32_t>(static_cast<std::uint32_t>(f.snapshots.size()));
  constexpr double kMax = std::numeric_limits<float>::max();
  for (const auto& s : f.snapshots) {
    if (s.empty()) throw InputError("cannot write an empty snapshot");
    if (2 * s.size() > std::numeric_limits<std::uint32_t>::max()) throw InputError("snapshot too long for one record");
    out.put<double>(s.tow);
    out.put<std::uint32_t>(static_cast<std::uint32_t>(2 * s.size()));
    for (const auto& z : s.samples) {
      if (!(std::abs(z.real()) <= kMax) || !(std::abs(z.imag()) <= kMax))
        throw InputError("sample outside 32-bit float range");
      out.put<float>(static_cast<float>(z.real()));
      out.put<float>(static_cast<float>(z.imag()));
    }
  }
  return out.take();
}

// Header fields come from the first snapshot; all snapshots must agree.
inline Bytes write_iq(const std::vector<IqSnapshot>& snaps) {
  if (snaps.empty()) throw InputError("no snapshots to write; use the IqFile overload for an empty file");
  IqFile f;
  f.header = {snaps.front().sample_rate_hz, snaps.front().center_freq_hz, snaps.front().band};
  for (const auto& s : snaps) {
    if (s.sample_rate_hz != f.header.sample_rate_hz || s.center_freq_hz != f.header.center_freq_hz ||
        s.band != f.header.band)
      throw InputError("snapshots disagree on sample rate, center frequency or band");
  }
  f.snapshots = snaps;
  return write_iq(f);
}

}  // namespace jamscan::io
