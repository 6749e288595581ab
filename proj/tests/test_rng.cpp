// Copyright 2026 The synflow Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>

#include "doctest.h"
#include "synflow/rng.hpp"
#include "synflow/stats.hpp"

using synflow::CounterRng;

TEST_CASE("counter rng is a pure function of seed, stream and counter") {
  CounterRng a(123), b(123), c(124);
  CHECK(a.bits(5, 77) == b.bits(5, 77));
  CHECK(a.normal(5, 77) == b.normal(5, 77));
  CHECK(a.bits(5, 77) != c.bits(5, 77));
  CHECK(a.bits(5, 77) != a.bits(6, 77));
  CHECK(a.bits(5, 77) != a.bits(5, 78));
}

TEST_CASE("uniform variates live strictly inside (0,1)") {
  CounterRng rng(7);
  for (std::uint64_t i = 0; i < 1000; ++i) {
    const double u = rng.uniform(0, i);
    CHECK(u > 0.0);
    CHECK(u < 1.0);
  }
}

TEST_CASE("normal stream moments") {
  CounterRng rng(2026);
  std::vector<double> x(100000);
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = rng.normal(3, i);
  CHECK(std::abs(synflow::stats::mean(x)) < 0.02);
  CHECK(synflow::stats::variance(x) == doctest::Approx(1.0).epsilon(0.03));
}

TEST_CASE("below() respects the bound") {
  CounterRng rng(9);
  for (std::uint64_t i = 0; i < 500; ++i) {
    CHECK(rng.below(1, i, 17) < 17);
  }
  CHECK(rng.below(1, 0, 1) == 0);
}
