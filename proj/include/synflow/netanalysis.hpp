// Copyright 2026 The synflow Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

#include "synflow/matrix.hpp"

namespace synflow {

/// Agglomerative merge tree. Node ids 0..n-1 are leaves; merge k creates node
/// n+k. Heights are non-decreasing (average linkage is monotone).
struct Dendrogram {
  struct Merge {
    int a = 0;
    int b = 0;
    double height = 0.0;
  };
  std::vector<std::string> leaf_labels;
  std::vector<Merge> merges;  // exactly n - 1
};

/// Average-linkage clustering on the distance d(i,j) = w_max - w(i,j), where
/// w_max is the largest weight. Ties break toward the smallest node-id pair.
/// The matrix must be symmetric, nonnegative, with zero diagonal.
Dendrogram dendrogram(const Matrix& weights, const std::vector<std::string>& labels);

/// Newick serialization with branch lengths (leaves at height 0).
std::string to_newick(const Dendrogram& tree);

struct CommunityAssignment {
  std::vector<int> community;  // per node
  double q = 0.0;

  std::size_t community_count() const;
};

/// Newman weighted modularity of an assignment:
///   Q = (1/2W) sum_ij [w_ij - s_i s_j / 2W] delta(c_i, c_j).
double modularity(const Matrix& weights, const std::vector<int>& assignment);

/// Evaluates Q at every horizontal cut of the dendrogram and returns the
/// maximizer; ties resolve toward fewer communities.
CommunityAssignment best_cut(const Dendrogram& tree, const Matrix& weights);

}  // namespace synflow
