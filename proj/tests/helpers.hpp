// Copyright 2026 The synflow Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "synflow/matrix.hpp"
#include "synflow/rng.hpp"
#include "synflow/timeseries.hpp"

namespace synflow::testing {

inline Matrix matrix_from(const std::vector<std::vector<double>>& rows) {
  Matrix m(rows.size(), rows.empty() ? 0 : rows[0].size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < rows[i].size(); ++j) m(i, j) = rows[i][j];
  }
  return m;
}

inline std::vector<double> gaussian_series(std::uint64_t seed, std::uint64_t stream,
                                           std::size_t n) {
  const CounterRng rng(seed);
  std::vector<double> out(n);
  for (std::size_t t = 0; t < n; ++t) out[t] = rng.normal(stream, t);
  return out;
}

inline std::vector<double> ar1_series(double coef, std::uint64_t seed,
                                      std::uint64_t stream, std::size_t n,
                                      std::size_t burn = 500) {
  const CounterRng rng(seed);
  const double noise_sd = std::sqrt(1.0 - coef * coef);  // unit stationary variance
  std::vector<double> out(n);
  double x = 0.0;
  for (std::size_t t = 0; t < burn + n; ++t) {
    x = coef * x + noise_sd * rng.normal(stream, t);
    if (t >= burn) out[t - burn] = x;
  }
  return out;
}

inline TimeSeriesSet from_columns(const std::vector<std::vector<double>>& cols,
                                  const std::vector<std::string>& labels) {
  Matrix m(cols[0].size(), cols.size());
  for (std::size_t j = 0; j < cols.size(); ++j) {
    for (std::size_t t = 0; t < cols[j].size(); ++t) m(t, j) = cols[j][t];
  }
  return TimeSeriesSet(std::move(m), labels);
}

inline TimeSeriesSet concat_columns(const TimeSeriesSet& a, const TimeSeriesSet& b) {
  Matrix m(a.samples(), a.variables() + b.variables());
  for (std::size_t t = 0; t < a.samples(); ++t) {
    for (std::size_t j = 0; j < a.variables(); ++j) m(t, j) = a.values()(t, j);
    for (std::size_t j = 0; j < b.variables(); ++j) {
      m(t, a.variables() + j) = b.values()(t, j);
    }
  }
  std::vector<std::string> labels = a.labels();
  for (const auto& l : b.labels()) labels.push_back(l);
  return TimeSeriesSet(std::move(m), std::move(labels));
}

}  // namespace synflow::testing
