// Copyright 2026 The synflow Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

#include "synflow/causality.hpp"

namespace synflow {

/// A disjoint cover of the driver set of one target, with the total
/// unnormalized Granger causality Delta = sum over blocks of
/// delta_u(block -> target), every block conditioned on the full set.
struct Partition {
  int target = 0;
  std::vector<std::vector<int>> blocks;  // each sorted; blocks ordered by first element
  std::vector<double> delta_per_block;
  double total = 0.0;
};

struct PartitionOptions {
  /// Degeneracy tolerance: partitions within tie_tolerance(|best|) of the
  /// best total are ties, resolved toward more blocks (merging is justified
  /// only if the total increases).
  double tie_scale = 1e-3;
  double tie_floor = 0.01;
  /// Greedy search accepts a merge only if it raises the total by more than
  /// this.
  double merge_threshold = 1e-3;
  /// Exhaustive enumeration cap (Bell(8) = 4140 partitions).
  int exhaustive_cap = 8;

  double tie_tolerance(double best_total) const {
    const double mag = best_total < 0.0 ? -best_total : best_total;
    return tie_scale * (mag > tie_floor ? mag : tie_floor);
  }
};

/// Total unnormalized GC of a given partition of the full driver set.
/// Throws InvalidPartition if the blocks overlap or miss a driver.
Partition total_gc(const GcEngine& engine, int target,
                   const std::vector<std::vector<int>>& blocks);

Partition total_gc(const TimeSeriesSet& ts, int target,
                   const std::vector<std::vector<int>>& blocks, const ModelSpec& spec);

/// All partitions of {0..n-1} as restricted-growth strings in canonical order.
std::vector<std::vector<int>> enumerate_partitions(int n);

/// Exhaustive maximizer of the total GC over all partitions of the driver
/// set. Among totals within the tie tolerance of the maximum the partition
/// with the most blocks wins; remaining ties break lexicographically.
/// Throws TooManyDrivers above options.exhaustive_cap drivers.
Partition best_partition_exhaustive(const GcEngine& engine, int target,
                                    const PartitionOptions& options = {});

Partition best_partition_exhaustive(const TimeSeriesSet& ts, int target,
                                    const ModelSpec& spec,
                                    const PartitionOptions& options = {});

/// Agglomerative search: start from singletons, repeatedly apply the pairwise
/// block merge with the largest increase of the total, stop when no merge
/// gains more than options.merge_threshold.
Partition best_partition_greedy(const GcEngine& engine, int target,
                                const PartitionOptions& options = {});

Partition best_partition_greedy(const TimeSeriesSet& ts, int target,
                                const ModelSpec& spec,
                                const PartitionOptions& options = {});

}  // namespace synflow
