// Copyright 2026 The synflow Authors
// SPDX-License-Identifier: Apache-2.0

#include "synflow/partition.hpp"

#include <algorithm>
#include <string>

#include "synflow/errors.hpp"

namespace synflow {

namespace {

using Mask = GcEngine::Mask;

// Canonical form: blocks sorted internally and ordered by smallest element.
std::vector<std::vector<int>> canonical_blocks(std::vector<std::vector<int>> blocks) {
  for (auto& b : blocks) std::sort(b.begin(), b.end());
  std::sort(blocks.begin(), blocks.end());
  return blocks;
}

Partition evaluate(const GcEngine& engine, int target,
                   std::vector<std::vector<int>> blocks) {
  blocks = canonical_blocks(std::move(blocks));

  Mask seen = 0;
  for (const auto& block : blocks) {
    if (block.empty()) throw InvalidPartition("empty block");
    const Mask m = engine.mask_of(block);
    if (seen & m) throw InvalidPartition("blocks overlap");
    seen |= m;
  }
  if (seen != engine.full_mask()) {
    throw InvalidPartition("blocks do not cover the driver set");
  }

  Partition out;
  out.target = target;
  out.blocks = std::move(blocks);
  const Mask full = engine.full_mask();
  for (const auto& block : out.blocks) {
    const double d = engine.delta_u(engine.mask_of(block), full);
    out.delta_per_block.push_back(d);
    out.total += d;
  }
  return out;
}

}  // namespace

Partition total_gc(const GcEngine& engine, int target,
                   const std::vector<std::vector<int>>& blocks) {
  return evaluate(engine, target, blocks);
}

Partition total_gc(const TimeSeriesSet& ts, int target,
                   const std::vector<std::vector<int>>& blocks, const ModelSpec& spec) {
  GcEngine engine(ts, target, spec);
  return evaluate(engine, target, blocks);
}

std::vector<std::vector<int>> enumerate_partitions(int n) {
  std::vector<std::vector<int>> out;
  if (n <= 0) return out;
  std::vector<int> a(static_cast<std::size_t>(n), 0);

  auto bound = [&](int i) {  // max(a[0..i-1]) + 1
    int m = 0;
    for (int j = 0; j < i; ++j) m = std::max(m, a[j] + 1);
    return m;
  };

  while (true) {
    out.push_back(a);
    int i = n - 1;
    while (i > 0 && a[i] >= bound(i)) --i;
    if (i == 0) break;
    ++a[i];
    for (int j = i + 1; j < n; ++j) a[j] = 0;
  }
  return out;
}

namespace {

std::vector<std::vector<int>> rgs_to_blocks(const std::vector<int>& rgs,
                                            const std::vector<int>& drivers) {
  const int k = *std::max_element(rgs.begin(), rgs.end()) + 1;
  std::vector<std::vector<int>> blocks(static_cast<std::size_t>(k));
  for (std::size_t i = 0; i < rgs.size(); ++i) {
    blocks[static_cast<std::size_t>(rgs[i])].push_back(drivers[i]);
  }
  return blocks;
}

}  // namespace

Partition best_partition_exhaustive(const GcEngine& engine, int target,
                                    const PartitionOptions& options) {
  const auto& drivers = engine.drivers();
  const int n = static_cast<int>(drivers.size());
  if (n > options.exhaustive_cap) {
    throw TooManyDrivers("exhaustive partition search is capped at " +
                         std::to_string(options.exhaustive_cap) + " drivers, got " +
                         std::to_string(n));
  }
  if (n == 0) throw InvalidPartition("no drivers to partition");

  std::vector<Partition> all;
  double best_total = -1e300;
  for (const auto& rgs : enumerate_partitions(n)) {
    Partition p = evaluate(engine, target, rgs_to_blocks(rgs, drivers));
    best_total = std::max(best_total, p.total);
    all.push_back(std::move(p));
  }

  const double tol = options.tie_tolerance(best_total);
  const Partition* best = nullptr;
  for (const Partition& p : all) {
    if (p.total < best_total - tol) continue;
    if (best == nullptr || p.blocks.size() > best->blocks.size() ||
        (p.blocks.size() == best->blocks.size() && p.blocks < best->blocks)) {
      best = &p;
    }
  }
  return *best;
}

Partition best_partition_exhaustive(const TimeSeriesSet& ts, int target,
                                    const ModelSpec& spec,
                                    const PartitionOptions& options) {
  GcEngine engine(ts, target, spec);
  return best_partition_exhaustive(engine, target, options);
}

Partition best_partition_greedy(const GcEngine& engine, int target,
                                const PartitionOptions& options) {
  const auto& drivers = engine.drivers();
  if (drivers.empty()) throw InvalidPartition("no drivers to partition");
  const Mask full = engine.full_mask();

  // Work on masks; the objective is blockwise decomposable, so a merge only
  // touches the two merged blocks.
  std::vector<Mask> blocks;
  std::vector<double> deltas;
  for (std::size_t i = 0; i < drivers.size(); ++i) {
    const Mask m = Mask{1} << i;
    blocks.push_back(m);
    deltas.push_back(engine.delta_u(m, full));
  }

  while (blocks.size() > 1) {
    double best_gain = options.merge_threshold;
    std::size_t best_i = 0, best_j = 0;
    double best_merged_delta = 0.0;
    bool found = false;
    for (std::size_t i = 0; i < blocks.size(); ++i) {
      for (std::size_t j = i + 1; j < blocks.size(); ++j) {
        const double merged = engine.delta_u(blocks[i] | blocks[j], full);
        const double gain = merged - deltas[i] - deltas[j];
        if (gain > best_gain) {
          best_gain = gain;
          best_i = i;
          best_j = j;
          best_merged_delta = merged;
          found = true;
        }
      }
    }
    if (!found) break;
    blocks[best_i] |= blocks[best_j];
    deltas[best_i] = best_merged_delta;
    blocks.erase(blocks.begin() + static_cast<std::ptrdiff_t>(best_j));
    deltas.erase(deltas.begin() + static_cast<std::ptrdiff_t>(best_j));
  }

  std::vector<std::vector<int>> out_blocks;
  out_blocks.reserve(blocks.size());
  for (Mask m : blocks) out_blocks.push_back(engine.vars_of(m));
  return evaluate(engine, target, out_blocks);
}

Partition best_partition_greedy(const TimeSeriesSet& ts, int target,
                                const ModelSpec& spec, const PartitionOptions& options) {
  GcEngine engine(ts, target, spec);
  return best_partition_greedy(engine, target, options);
}

}  // namespace synflow
