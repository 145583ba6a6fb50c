#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "jamscan/core/errors.hpp"

namespace jamscan::synth {

namespace detail {

// Feedback taps (1-based stage numbers) of primitive polynomials, one per
// register degree. Index 0 and 1 are unused.
inline const std::array<std::vector<int>, 21>& lfsr_taps() {
  static const std::array<std::vector<int>, 21> taps = {{
      {}, {}, {2, 1}, {3, 2}, {4, 3}, {5, 3}, {6, 5}, {7, 6}, {8, 6, 5, 4}, {9, 5},
      {10, 7}, {11, 9}, {12, 6, 4, 1}, {13, 4, 3, 1}, {14, 5, 3, 1}, {15, 14},
      {16, 15, 13, 4}, {17, 14}, {18, 11}, {19, 6, 2, 1}, {20, 17},
  }};
  return taps;
}

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

}  // namespace detail

inline int lfsr_degree_for(std::size_t length) {
  int n = 2;
  while (n < 20 && ((std::size_t{1} << n) - 1) < length) ++n;
  if (((std::size_t{1} << n) - 1) < length)
    throw SpecificationError("PRN length exceeds the largest supported register (2^20-1)");
  return n;
}

// Raw maximal-length sequence of a degree-n Fibonacci register, as 0/1 bits.
inline std::vector<std::uint8_t> mls_bits(int degree, std::uint64_t state, std::size_t count) {
  if (degree < 2 || degree > 20) throw SpecificationError("LFSR degree must be in [2, 20]");
  const std::uint64_t mask = (std::uint64_t{1} << degree) - 1;
  state &= mask;
  if (state == 0) state = 1;
  const auto& taps = detail::lfsr_taps()[static_cast<std::size_t>(degree)];
  std::vector<std::uint8_t> out(count);
  for (auto& bit : out) {
    bit = static_cast<std::uint8_t>((state >> (degree - 1)) & 1U);
    std::uint64_t fb = 0;
    for (int t : taps) fb ^= (state >> (t - 1)) & 1U;
    state = ((state << 1) | fb) & mask;
  }
  return out;
}

// +/-1 chip sequence of the requested length. The register is the smallest
// one whose period covers the length; a length of 2^n-1 yields one full
// m-sequence period. The seed picks the register start state.
inline std::vector<int> prn_chips(std::size_t length, std::uint64_t seed) {
  if (length == 0) throw SpecificationError("PRN length must be positive");
  const int degree = lfsr_degree_for(length);
  const std::uint64_t period = (std::uint64_t{1} << degree) - 1;
  const std::uint64_t state = detail::splitmix64(seed) % period + 1;
  const auto bits = mls_bits(degree, state, length);
  std::vector<int> chips(length);
  for (std::size_t i = 0; i < length; ++i) chips[i] = bits[i] ? -1 : 1;
  return chips;
}

}  // namespace jamscan::synth
