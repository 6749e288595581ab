// Copyright 2026 The synflow Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <map>
#include <vector>

#include "synflow/matrix.hpp"
#include "synflow/timeseries.hpp"

namespace synflow {

/// Column range [begin, end) of one variable's lagged block.
struct BlockRange {
  std::size_t begin = 0;
  std::size_t end = 0;
  std::size_t width() const { return end - begin; }
};

/// Block key used for the target's own past when the target is an external
/// series (e.g. a principal-component time course) rather than a variable.
inline constexpr int kTargetBlock = -1;

/// Lagged regression dataset. Row r predicts the response at time t = m + r
/// from the m most recent values (t-m, ..., t-1) of each included variable.
/// The target's own past block is always present; usable rows start at
/// t = m (0-based), with no padding or wrap-around.
struct EmbeddingDataset {
  Matrix predictors;                      // (T - m) x (k * m)
  std::vector<double> response;           // length T - m
  std::map<int, BlockRange> block_index;  // variable index (or kTargetBlock) -> columns
  int target = kTargetBlock;              // variable index, or kTargetBlock for a series
  int order = 0;                          // m

  std::size_t rows() const { return predictors.rows(); }
  std::size_t cols() const { return predictors.cols(); }
};

/// Builds the embedding for predicting variable `target` from the lagged
/// blocks of `conditioning` (the target's own past is added implicitly if
/// absent). Blocks are laid out target-first, then conditioning variables in
/// ascending index order; within a block columns run (t-m, ..., t-1).
EmbeddingDataset build_embedding(const TimeSeriesSet& ts, int order, int target,
                                 std::vector<int> conditioning);

/// Same, for an external target series (length T). Its own lagged block is
/// keyed kTargetBlock; conditioning variables keep their indices.
EmbeddingDataset build_embedding_series(const TimeSeriesSet& ts, int order,
                                        const std::vector<double>& target_series,
                                        std::vector<int> conditioning);

}  // namespace synflow
