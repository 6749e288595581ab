// Copyright 2026 The synflow Authors
// SPDX-License-Identifier: Apache-2.0

#include "synflow/rng.hpp"

#include "synflow/stats.hpp"

namespace synflow {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

inline std::uint64_t mix64(std::uint64_t z) {
  z += kGolden;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

}  // namespace

std::uint64_t CounterRng::bits(std::uint64_t stream, std::uint64_t counter) const {
  const std::uint64_t stream_key = mix64(root_ ^ mix64(stream + 1));
  return mix64(stream_key + counter * kGolden);
}

double CounterRng::uniform(std::uint64_t stream, std::uint64_t counter) const {
  // 53 mantissa bits, offset by half a ulp so the result is strictly in (0,1).
  const std::uint64_t b = bits(stream, counter) >> 11;
  return (static_cast<double>(b) + 0.5) * 0x1.0p-53;
}

double CounterRng::normal(std::uint64_t stream, std::uint64_t counter) const {
  return stats::normal_quantile(uniform(stream, counter));
}

std::uint64_t CounterRng::below(std::uint64_t stream, std::uint64_t counter,
                                std::uint64_t bound) const {
  // Fixed-point multiply; bias is negligible for the bounds used here.
  const unsigned __int128 wide =
      static_cast<unsigned __int128>(bits(stream, counter)) * bound;
  return static_cast<std::uint64_t>(wide >> 64);
}

}  // namespace synflow
