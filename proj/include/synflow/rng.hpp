// Copyright 2026 The synflow Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>

namespace synflow {

/// Counter-based deterministic random source. A value is a pure function of
/// (root seed, stream, counter), so any noise stream can be regenerated in
/// isolation and adding a stream never perturbs existing ones. Streams are
/// derived with a splitmix64-style finalizer; normal variates use the
/// inverse-CDF (AS 241) so output is reproducible across platforms.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t root_seed) : root_(root_seed) {}

  std::uint64_t bits(std::uint64_t stream, std::uint64_t counter) const;
  /// Uniform on the open interval (0, 1).
  double uniform(std::uint64_t stream, std::uint64_t counter) const;
  /// Standard normal.
  double normal(std::uint64_t stream, std::uint64_t counter) const;
  /// Uniform integer in [0, bound), bound >= 1.
  std::uint64_t below(std::uint64_t stream, std::uint64_t counter,
                      std::uint64_t bound) const;

  std::uint64_t root() const { return root_; }

 private:
  std::uint64_t root_;
};

/// A single stream view with an advancing counter, for sequential draws.
class RngStream {
 public:
  RngStream(const CounterRng& rng, std::uint64_t stream)
      : rng_(&rng), stream_(stream) {}

  double uniform() { return rng_->uniform(stream_, counter_++); }
  double normal() { return rng_->normal(stream_, counter_++); }
  std::uint64_t below(std::uint64_t bound) {
    return rng_->below(stream_, counter_++, bound);
  }

 private:
  const CounterRng* rng_;
  std::uint64_t stream_;
  std::uint64_t counter_ = 0;
};

}  // namespace synflow
