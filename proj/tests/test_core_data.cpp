// Copyright 2026 The synflow Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <cstdio>
#include <filesystem>

#include "doctest.h"
#include "helpers.hpp"
#include "synflow/embedding.hpp"
#include "synflow/errors.hpp"
#include "synflow/stats.hpp"
#include "synflow/timeseries.hpp"

using namespace synflow;
using testing::from_columns;
using testing::gaussian_series;

TEST_CASE("standardize centers and scales to unit sample variance") {
  const auto ts = from_columns({{1.0, 2.0, 3.0}, {5.0, 5.0, 9.0}}, {"a", "b"});
  const auto std_ts = standardize(ts);
  for (std::size_t j = 0; j < 2; ++j) {
    const auto col = std_ts.column(j);
    CHECK(std::abs(stats::mean(col)) < 1e-14);
    CHECK(stats::variance(col) == doctest::Approx(1.0).epsilon(1e-12));
  }
  CHECK(std_ts.labels() == ts.labels());
}

TEST_CASE("standardize is idempotent") {
  const auto ts = from_columns(
      {gaussian_series(1, 0, 200), gaussian_series(1, 1, 200)}, {"a", "b"});
  const auto once = standardize(ts);
  const auto twice = standardize(once);
  for (std::size_t t = 0; t < 200; ++t) {
    for (std::size_t j = 0; j < 2; ++j) {
      CHECK(std::abs(once.values()(t, j) - twice.values()(t, j)) < 1e-12);
    }
  }
}

TEST_CASE("standardize is invariant to affine shifts") {
  auto base = gaussian_series(3, 0, 150);
  auto other = gaussian_series(3, 1, 150);
  auto shifted = base;
  for (double& v : shifted) v += 17.5;
  const auto a = standardize(from_columns({base, other}, {"a", "b"}));
  const auto b = standardize(from_columns({shifted, other}, {"a", "b"}));
  for (std::size_t t = 0; t < 150; ++t) {
    CHECK(std::abs(a.values()(t, 0) - b.values()(t, 0)) < 1e-12);
  }
}

TEST_CASE("constant column raises ZeroVarianceColumn with the column name") {
  const auto ts = from_columns({{1.0, 2.0, 3.0}, {4.0, 4.0, 4.0}}, {"a", "flat"});
  CHECK_THROWS_WITH_AS(standardize(ts), doctest::Contains("flat"), ZeroVarianceColumn);
}

TEST_CASE("construction validates labels and finiteness") {
  CHECK_THROWS_AS(from_columns({{1.0}, {2.0}}, {"a", "a"}), InputError);
  CHECK_THROWS_AS(from_columns({{1.0, std::nan("")}, {2.0, 3.0}}, {"a", "b"}),
                  InputError);
  CHECK_THROWS_AS(TimeSeriesSet(Matrix(3, 1), {"only"}), InputError);
}

TEST_CASE("csv round trip") {
  const auto ts = from_columns(
      {gaussian_series(9, 0, 40), gaussian_series(9, 1, 40)}, {"alpha", "beta"});
  const std::string path = "synflow_test_roundtrip.csv";
  write_csv(ts, path);
  const auto back = read_csv(path);
  REQUIRE(back.labels() == ts.labels());
  REQUIRE(back.samples() == ts.samples());
  for (std::size_t t = 0; t < ts.samples(); ++t) {
    for (std::size_t j = 0; j < 2; ++j) {
      CHECK(back.values()(t, j) == ts.values()(t, j));  // %.17g is lossless
    }
  }
  std::filesystem::remove(path);
}

TEST_CASE("embedding dimensions") {
  const auto ts = from_columns({gaussian_series(4, 0, 100), gaussian_series(4, 1, 100),
                                gaussian_series(4, 2, 100)},
                               {"a", "b", "c"});
  const auto data = build_embedding(ts, 2, 0, {0, 1, 2});
  CHECK(data.rows() == 98);
  CHECK(data.cols() == 6);
  CHECK(data.block_index.size() == 3);
}

TEST_CASE("target past is auto-included") {
  const auto ts = from_columns({gaussian_series(5, 0, 100), gaussian_series(5, 1, 100)},
                               {"a", "b"});
  const auto data = build_embedding(ts, 1, 0, {1});
  CHECK(data.cols() == 2);
  REQUIRE(data.block_index.count(0) == 1);
  REQUIRE(data.block_index.count(1) == 1);
}

TEST_CASE("insufficient samples is rejected") {
  const auto ts = from_columns({gaussian_series(6, 0, 10), gaussian_series(6, 1, 10),
                                gaussian_series(6, 2, 10), gaussian_series(6, 3, 10)},
                               {"a", "b", "c", "d"});
  CHECK_THROWS_AS(build_embedding(ts, 5, 0, {0, 1, 2, 3}), InsufficientSamples);
}

TEST_CASE("embedding rows align response with lagged predictors") {
  //  x(t) = t over 30 samples, m = 2: row r predicts t = r + 2 from (t-2, t-1)
  std::vector<double> ramp(30), other = gaussian_series(7, 0, 30);
  for (std::size_t t = 0; t < 30; ++t) ramp[t] = static_cast<double>(t);
  const auto ts = from_columns({ramp, other}, {"ramp", "g"});
  const auto data = build_embedding(ts, 2, 0, {1});
  const auto range = data.block_index.at(0);
  for (std::size_t r = 0; r < data.rows(); ++r) {
    CHECK(data.response[r] == doctest::Approx(static_cast<double>(r + 2)));
    CHECK(data.predictors(r, range.begin) == doctest::Approx(static_cast<double>(r)));
    CHECK(data.predictors(r, range.begin + 1) ==
          doctest::Approx(static_cast<double>(r + 1)));
  }
}

TEST_CASE("removing a block leaves the remaining columns byte-identical") {
  const auto ts = from_columns({gaussian_series(8, 0, 80), gaussian_series(8, 1, 80),
                                gaussian_series(8, 2, 80)},
                               {"a", "b", "c"});
  const auto full = build_embedding(ts, 2, 0, {1, 2});
  const auto reduced = build_embedding(ts, 2, 0, {2});
  for (const auto& [var, reduced_range] : reduced.block_index) {
    const auto full_range = full.block_index.at(var);
    REQUIRE(reduced_range.width() == full_range.width());
    for (std::size_t r = 0; r < reduced.rows(); ++r) {
      for (std::size_t k = 0; k < reduced_range.width(); ++k) {
        CHECK(reduced.predictors(r, reduced_range.begin + k) ==
              full.predictors(r, full_range.begin + k));
      }
    }
  }
}

TEST_CASE("series-target embedding keys the target block separately") {
  const auto ts = from_columns({gaussian_series(9, 0, 60), gaussian_series(9, 1, 60)},
                               {"a", "b"});
  const auto series = gaussian_series(9, 7, 60);
  const auto data = build_embedding_series(ts, 1, series, {0, 1});
  CHECK(data.cols() == 3);
  CHECK(data.target == kTargetBlock);
  CHECK(data.block_index.count(kTargetBlock) == 1);
  for (std::size_t r = 0; r < data.rows(); ++r) {
    CHECK(data.response[r] == series[r + 1]);
  }
}
