// Copyright 2026 The synflow Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>

#include "doctest.h"
#include "helpers.hpp"
#include "synflow/causality.hpp"
#include "synflow/errors.hpp"
#include "synflow/stats.hpp"
#include "synflow/synthetic.hpp"

using namespace synflow;
using testing::ar1_series;
using testing::from_columns;
using testing::gaussian_series;

namespace {

// x AR(1) -> y -> z chain; x reaches z only through y.
TimeSeriesSet chain_system(std::uint64_t seed, std::size_t t_len) {
  const auto x = ar1_series(0.6, seed, 0, t_len);
  const auto ny = gaussian_series(seed, 1, t_len);
  const auto nz = gaussian_series(seed, 2, t_len);
  std::vector<double> y(t_len, 0.0), z(t_len, 0.0);
  for (std::size_t t = 1; t < t_len; ++t) {
    y[t] = 0.7 * x[t - 1] + 0.5 * ny[t];
    z[t] = 0.7 * y[t - 1] + 0.5 * nz[t];
  }
  return standardize(from_columns({x, y, z}, {"x", "y", "z"}));
}

}  // namespace

TEST_CASE("independent noise has pairwise GC near zero and not significant") {
  const auto ts = standardize(from_columns(
      {gaussian_series(31, 0, 10000), gaussian_series(31, 1, 10000)}, {"a", "b"}));
  const auto value = pairwise_gc(ts, 0, 1, ModelSpec{});
  CHECK(std::abs(value.value) < 2e-3);
  CHECK(gc_significance(ts, value) > 0.05);
}

TEST_CASE("singleton set GC is bit-identical to conditioned GC") {
  const auto ts = chain_system(32, 800);
  const auto a = set_gc(ts, 2, {0}, ModelSpec{});
  const auto b = conditioned_gc(ts, 2, 0, ModelSpec{});
  CHECK(a.value == b.value);
  CHECK(a.eps_with == b.eps_with);
  CHECK(a.eps_without == b.eps_without);
}

TEST_CASE("unnormalized GC equals the difference of its two epsilons") {
  const auto ts = chain_system(33, 600);
  const auto du = unnormalized_gc(ts, 2, {0, 1}, {0, 1}, ModelSpec{});
  CHECK(du.value == du.eps_without - du.eps_with);
  // recompute through a fresh engine: deterministic, so identical
  const auto again = unnormalized_gc(ts, 2, {0, 1}, {0, 1}, ModelSpec{});
  CHECK(du.value == again.value);
  CHECK(std::abs(du.value - (again.eps_without - again.eps_with)) < 1e-12);
}

TEST_CASE("chain: conditioning removes the indirect x -> z link") {
  std::vector<double> pairwise_vals, conditioned_vals;
  for (std::uint64_t r = 0; r < 40; ++r) {
    const auto ts = chain_system(100 + r, 1500);
    pairwise_vals.push_back(pairwise_gc(ts, 2, 0, ModelSpec{}).value);
    conditioned_vals.push_back(conditioned_gc(ts, 2, 0, ModelSpec{}).value);
  }
  const double med_pw = stats::median(pairwise_vals);
  const double med_c = stats::median(conditioned_vals);
  CHECK(med_pw > 0.05);
  CHECK(med_c < 0.15 * med_pw);
}

TEST_CASE("set GC with all drivers uses the pairwise-style restricted model") {
  const auto ts = chain_system(34, 700);
  const auto full = set_gc(ts, 2, {0, 1}, ModelSpec{});
  // eps_without must equal the target-past-only fit
  GcEngine engine(ts, 2, ModelSpec{});
  CHECK(full.eps_without == engine.epsilon(0, 0.0));
  CHECK(full.eps_with == engine.epsilon(engine.full_mask(), 0.0));
}

TEST_CASE("driver must differ from target and belong to the scope") {
  const auto ts = chain_system(35, 400);
  CHECK_THROWS_AS(pairwise_gc(ts, 1, 1, ModelSpec{}), ConfigError);
  CHECK_THROWS_AS(set_gc(ts, 1, {1}, ModelSpec{}), ConfigError);
  CHECK_THROWS_AS(set_gc(ts, 1, {}, ModelSpec{}), ConfigError);
  CHECK_THROWS_AS(unnormalized_gc(ts, 2, {0}, {1}, ModelSpec{}), ConfigError);
}

TEST_CASE("strong coupling is significant on both paths") {
  const auto ts = chain_system(36, 1200);
  const auto value = conditioned_gc(ts, 1, 0, ModelSpec{});  // x -> y direct
  CHECK(gc_significance(ts, value) < 1e-6);
  SignificanceOptions surr;
  surr.mode = SignificanceMode::kSurrogate;
  surr.surrogates = 60;
  surr.seed = 5;
  CHECK(gc_significance(ts, value, surr) < 0.05);
}

TEST_CASE("surrogate significance of a null link is not small") {
  const auto ts = standardize(from_columns(
      {gaussian_series(37, 0, 1200), gaussian_series(37, 1, 1200)}, {"a", "b"}));
  const auto value = pairwise_gc(ts, 0, 1, ModelSpec{});
  SignificanceOptions surr;
  surr.mode = SignificanceMode::kSurrogate;
  surr.surrogates = 60;
  surr.seed = 6;
  CHECK(gc_significance(ts, value, surr) > 0.05);
}

TEST_CASE("significance edge cases") {
  const auto ts = chain_system(38, 500);
  CausalityValue empty;
  empty.target = 2;
  empty.drivers = {};
  CHECK(gc_significance(ts, empty) == 1.0);

  auto value = conditioned_gc(ts, 2, 0, ModelSpec{});
  SignificanceOptions few;
  few.mode = SignificanceMode::kSurrogate;
  few.surrogates = 10;
  CHECK_THROWS_AS(gc_significance(ts, value, few), TooFewSurrogates);
}

TEST_CASE("analytic p agrees with a hand-built F statistic") {
  const auto ts = chain_system(39, 900);
  const ModelSpec spec;
  const auto value = conditioned_gc(ts, 2, 0, spec);
  const double p = gc_significance(ts, value);

  GcEngine engine(ts, 2, spec);
  const auto full = engine.fit(engine.full_mask(), 0.0);
  const auto restricted = engine.fit(engine.full_mask() & ~engine.mask_of({0}), 0.0);
  const double q = 1.0;              // one removed column at m = 1
  const double k_full = 3.0;         // three base columns
  const double dof2 = static_cast<double>(engine.rows()) - k_full - 1.0;
  const double f = ((restricted.rss - full.rss) / q) / (full.rss / dof2);
  CHECK(p == doctest::Approx(stats::f_survival(f, q, dof2)).epsilon(1e-12));
}

TEST_CASE("analytic null rejection rate is near the nominal level") {
  int rejections = 0;
  const int runs = 300;
  for (int r = 0; r < runs; ++r) {
    const auto ts = standardize(from_columns(
        {gaussian_series(4000 + static_cast<std::uint64_t>(r), 0, 500),
         gaussian_series(4000 + static_cast<std::uint64_t>(r), 1, 500)},
        {"a", "b"}));
    if (gc_significance(ts, conditioned_gc(ts, 0, 1, ModelSpec{})) < 0.05) ++rejections;
  }
  const double rate = static_cast<double>(rejections) / runs;
  CHECK(rate > 0.01);
  CHECK(rate < 0.11);
}

TEST_CASE("gcv lambda is selected once per conditioning model and shared") {
  const auto ts = chain_system(40, 600);
  ModelSpec spec;
  spec.regularization = Regularization::kRidgeGcv;
  GcEngine engine(ts, 2, spec);
  const auto full = engine.full_mask();
  const double lambda = engine.lambda_for(full);
  CHECK(lambda == engine.lambda_for(full));  // cached, deterministic
  // delta_u of nested blocks uses that shared lambda; the identity
  // du(B) = eps(X\B) - eps(X) must hold exactly at that lambda.
  const auto block = engine.mask_of({0});
  const double du = engine.delta_u(block, full);
  CHECK(du == engine.epsilon(full & ~block, lambda) - engine.epsilon(full, lambda));
}
