// Copyright 2026 The synflow Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>

#include "doctest.h"
#include "helpers.hpp"
#include "synflow/errors.hpp"
#include "synflow/partition.hpp"
#include "synflow/synthetic.hpp"

using namespace synflow;
using testing::ar1_series;
using testing::from_columns;
using testing::gaussian_series;

namespace {

// Three mutually independent AR(1) drivers feeding a target additively with
// strong couplings (the tie window scales with the total, so strong signals
// make the all-singletons optimum robust to sampling noise).
TimeSeriesSet independent_additive(std::uint64_t seed, std::size_t t_len) {
  const auto d1 = ar1_series(0.5, seed, 0, t_len);
  const auto d2 = ar1_series(0.5, seed, 1, t_len);
  const auto d3 = ar1_series(0.5, seed, 2, t_len);
  const auto noise = gaussian_series(seed, 3, t_len);
  std::vector<double> u(t_len, 0.0);
  for (std::size_t t = 1; t < t_len; ++t) {
    u[t] = 0.5 * d1[t - 1] + 0.45 * d2[t - 1] + 0.4 * d3[t - 1] + 0.4 * noise[t];
  }
  return standardize(from_columns({d1, d2, d3, u}, {"d1", "d2", "d3", "u"}));
}

}  // namespace

TEST_CASE("partition enumeration follows Bell numbers") {
  CHECK(enumerate_partitions(1).size() == 1);
  CHECK(enumerate_partitions(2).size() == 2);
  CHECK(enumerate_partitions(3).size() == 5);
  CHECK(enumerate_partitions(4).size() == 15);
  CHECK(enumerate_partitions(8).size() == 4140);
  // canonical order: first all-in-one, last all-singletons
  const auto parts = enumerate_partitions(3);
  CHECK(parts.front() == std::vector<int>{0, 0, 0});
  CHECK(parts.back() == std::vector<int>{0, 1, 2});
}

TEST_CASE("invalid partitions are rejected") {
  const auto ts = independent_additive(50, 800);
  CHECK_THROWS_AS(total_gc(ts, 3, {{0, 1}, {1, 2}}, ModelSpec{}), InvalidPartition);
  CHECK_THROWS_AS(total_gc(ts, 3, {{0, 1}}, ModelSpec{}), InvalidPartition);
  CHECK_THROWS_AS(total_gc(ts, 3, {{0, 1}, {2}, {}}, ModelSpec{}), InvalidPartition);
}

TEST_CASE("independent additive drivers: totals agree across partitions") {
  const auto ts = independent_additive(51, 20000);
  GcEngine engine(ts, 3, ModelSpec{});
  const auto singles = total_gc(engine, 3, {{0}, {1}, {2}});
  const auto grouped = total_gc(engine, 3, {{0, 1}, {2}});
  const auto all = total_gc(engine, 3, {{0, 1, 2}});
  CHECK(grouped.total == doctest::Approx(singles.total).epsilon(0.01));
  CHECK(all.total == doctest::Approx(singles.total).epsilon(0.01));
}

TEST_CASE("independent additive drivers: exhaustive returns all singletons") {
  const auto ts = independent_additive(52, 20000);
  const auto best = best_partition_exhaustive(ts, 3, ModelSpec{});
  CHECK(best.blocks == std::vector<std::vector<int>>{{0}, {1}, {2}});
}

TEST_CASE("independent additive drivers: greedy accepts no merge") {
  const auto ts = independent_additive(53, 10000);
  const auto best = best_partition_greedy(ts, 3, ModelSpec{});
  CHECK(best.blocks == std::vector<std::vector<int>>{{0}, {1}, {2}});
}

TEST_CASE("total of the all-singleton partition is the sum of single deltas") {
  const auto ts = independent_additive(54, 2000);
  GcEngine engine(ts, 3, ModelSpec{});
  const auto singles = total_gc(engine, 3, {{0}, {1}, {2}});
  const auto full = engine.full_mask();
  double sum = 0.0;
  for (int d : {0, 1, 2}) sum += engine.delta_u(engine.mask_of({d}), full);
  CHECK(singles.total == doctest::Approx(sum).epsilon(1e-12));
}

TEST_CASE("merging blocks leaves untouched block contributions bit-identical") {
  const auto ts = independent_additive(55, 3000);
  GcEngine engine(ts, 3, ModelSpec{});
  const auto p1 = total_gc(engine, 3, {{0}, {1}, {2}});
  const auto p2 = total_gc(engine, 3, {{0, 1}, {2}});
  // block {2} is the last block in both canonical forms
  CHECK(p1.delta_per_block.back() == p2.delta_per_block.back());
}

TEST_CASE("redundant triplet: exhaustive picks the grouped pair via tie-break") {
  const auto ts = standardize(gen_redundant_triplet(4000, 56));
  const auto best = best_partition_exhaustive(ts, 3, ModelSpec{});
  CHECK(best.blocks == std::vector<std::vector<int>>{{0, 1}, {2}});
  const auto greedy = best_partition_greedy(ts, 3, ModelSpec{});
  CHECK(greedy.blocks == best.blocks);
  CHECK(best.total >= greedy.total - 1e-9);
}

TEST_CASE("exact duplicate drivers are grouped") {
  const std::size_t t_len = 4000;
  const auto d = ar1_series(0.5, 57, 0, t_len);
  const auto o = ar1_series(0.5, 57, 1, t_len);
  const auto noise = gaussian_series(57, 2, t_len);
  std::vector<double> u(t_len, 0.0);
  for (std::size_t t = 1; t < t_len; ++t) {
    u[t] = 0.5 * d[t - 1] + 0.5 * o[t - 1] + 0.4 * noise[t];
  }
  const auto ts = standardize(from_columns({d, d, o, u}, {"d", "dp", "o", "u"}));
  ModelSpec spec;
  spec.regularization = Regularization::kRidge;
  spec.ridge_lambda = 1e-3;
  const auto best = best_partition_exhaustive(ts, 3, spec);
  CHECK(best.blocks == std::vector<std::vector<int>>{{0, 1}, {2}});
}

TEST_CASE("exhaustive beats or ties greedy on random systems") {
  for (std::uint64_t seed : {60u, 61u, 62u}) {
    const auto ts = independent_additive(seed, 3000);
    GcEngine engine(ts, 3, ModelSpec{});
    const auto ex = best_partition_exhaustive(engine, 3);
    const auto gr = best_partition_greedy(engine, 3);
    CHECK(ex.total >= gr.total - 1e-9);
  }
}

TEST_CASE("driver cap for the exhaustive search") {
  const std::size_t t_len = 3000;
  std::vector<std::vector<double>> cols;
  std::vector<std::string> labels;
  for (int j = 0; j < 10; ++j) {
    cols.push_back(gaussian_series(63, static_cast<std::uint64_t>(j), t_len));
    labels.push_back("v" + std::to_string(j));
  }
  const auto ts = standardize(from_columns(cols, labels));
  CHECK_THROWS_AS(best_partition_exhaustive(ts, 0, ModelSpec{}), TooManyDrivers);
  CHECK_NOTHROW(best_partition_greedy(ts, 0, ModelSpec{}));
}

TEST_CASE("doubled hidden sources: greedy merges both pairs, majority of runs") {
  int correct = 0;
  const int runs = 20;
  for (int r = 0; r < runs; ++r) {
    const std::uint64_t seed = 700 + static_cast<std::uint64_t>(r);
    const auto first = gen_hidden_source(2, 0.5, 1000, seed);         // x1 x2 w
    const auto second = gen_hidden_source(2, 0.5, 1000, seed + 500);  // x1 x2 w
    // rename and combine: drivers are the two redundant pairs plus 8 noise
    std::vector<std::vector<double>> cols;
    std::vector<std::string> labels;
    for (int j = 0; j < 2; ++j) {
      cols.push_back(first.column(static_cast<std::size_t>(j)));
      labels.push_back("p1_" + std::to_string(j));
    }
    for (int j = 0; j < 2; ++j) {
      cols.push_back(second.column(static_cast<std::size_t>(j)));
      labels.push_back("p2_" + std::to_string(j));
    }
    for (int j = 0; j < 8; ++j) {
      cols.push_back(gaussian_series(seed, 40 + static_cast<std::uint64_t>(j), 1000));
      labels.push_back("n" + std::to_string(j));
    }
    // target driven by both hidden sources
    std::vector<double> w(1000);
    const auto w1 = first.column(2);
    const auto w2 = second.column(2);
    for (std::size_t t = 0; t < 1000; ++t) w[t] = w1[t] + w2[t];
    cols.push_back(w);
    labels.push_back("w");
    const auto ts = standardize(from_columns(cols, labels));

    const auto best = best_partition_greedy(ts, 12, ModelSpec{});
    bool pair1 = false, pair2 = false;
    for (const auto& block : best.blocks) {
      if (block == std::vector<int>{0, 1}) pair1 = true;
      if (block == std::vector<int>{2, 3}) pair2 = true;
    }
    if (pair1 && pair2 && best.blocks.size() == 10) ++correct;
  }
  CHECK(correct > runs / 2);
}
