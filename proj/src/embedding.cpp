// Copyright 2026 The synflow Authors
// SPDX-License-Identifier: Apache-2.0

#include "synflow/embedding.hpp"

#include <algorithm>
#include <string>

#include "synflow/errors.hpp"

namespace synflow {

namespace {

// Shared assembly for variable and series targets. `target_col` is the
// column index of the target's own past source; for a series target the
// caller passes the series itself.
EmbeddingDataset assemble(const TimeSeriesSet& ts, int order,
                          const std::vector<double>& target_values, int target_key,
                          std::vector<int> conditioning) {
  const std::size_t t_len = ts.samples();
  const std::size_t n = ts.variables();
  const std::size_t m = static_cast<std::size_t>(order);

  if (order < 1) throw InsufficientSamples("model order must be >= 1");
  if (t_len <= m + 2) {
    throw InsufficientSamples("need T > m + 2, got T=" + std::to_string(t_len) +
                              ", m=" + std::to_string(order));
  }
  if (t_len < 10 * m) {
    throw InsufficientSamples("need T >= 10*m, got T=" + std::to_string(t_len) +
                              ", m=" + std::to_string(order));
  }
  std::sort(conditioning.begin(), conditioning.end());
  conditioning.erase(std::unique(conditioning.begin(), conditioning.end()),
                     conditioning.end());
  for (int z : conditioning) {
    if (z < 0 || static_cast<std::size_t>(z) >= n) {
      throw InputError("BadConditioningIndex",
                       "conditioning index " + std::to_string(z) + " out of range");
    }
  }
  // The target's own past is never removable.
  conditioning.erase(std::remove(conditioning.begin(), conditioning.end(), target_key),
                     conditioning.end());

  const std::size_t k = conditioning.size() + 1;
  const std::size_t rows = t_len - m;
  if (rows < k * m + 5) {
    throw InsufficientSamples("need T - m >= |Z|*m + 5, got " + std::to_string(rows) +
                              " rows for " + std::to_string(k * m) + " columns");
  }

  EmbeddingDataset out;
  out.order = order;
  out.target = target_key;
  out.predictors = Matrix(rows, k * m);
  out.response.resize(rows);

  // target block first, then conditioning ascending
  std::vector<int> block_keys;
  block_keys.reserve(k);
  block_keys.push_back(target_key);
  for (int z : conditioning) block_keys.push_back(z);

  std::size_t col = 0;
  for (int key : block_keys) {
    out.block_index[key] = BlockRange{col, col + m};
    col += m;
  }

  for (std::size_t r = 0; r < rows; ++r) {
    const std::size_t t = m + r;
    out.response[r] = target_values[t];
    double* row = out.predictors.row(r);
    for (std::size_t b = 0; b < block_keys.size(); ++b) {
      const int key = block_keys[b];
      for (std::size_t lag = 0; lag < m; ++lag) {
        const std::size_t src_t = t - m + lag;
        row[b * m + lag] = (key == kTargetBlock)
                               ? target_values[src_t]
                               : ts.values()(src_t, static_cast<std::size_t>(key));
      }
    }
  }
  return out;
}

}  // namespace

EmbeddingDataset build_embedding(const TimeSeriesSet& ts, int order, int target,
                                 std::vector<int> conditioning) {
  if (target < 0 || static_cast<std::size_t>(target) >= ts.variables()) {
    throw InputError("BadTargetIndex", "target index out of range");
  }
  return assemble(ts, order, ts.column(static_cast<std::size_t>(target)), target,
                  std::move(conditioning));
}

EmbeddingDataset build_embedding_series(const TimeSeriesSet& ts, int order,
                                        const std::vector<double>& target_series,
                                        std::vector<int> conditioning) {
  if (target_series.size() != ts.samples()) {
    throw InputError("BadTargetSeries", "target series length must equal T");
  }
  return assemble(ts, order, target_series, kTargetBlock, std::move(conditioning));
}

}  // namespace synflow
