// Copyright 2026 The synflow Authors
// SPDX-License-Identifier: Apache-2.0

#include "synflow/netanalysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>

#include "synflow/errors.hpp"

namespace synflow {

namespace {

void check_weights(const Matrix& w) {
  const std::size_t n = w.rows();
  if (n == 0) throw EmptyMatrix("weight matrix is empty");
  if (w.cols() != n) throw AsymmetricInput("weight matrix must be square");
  for (std::size_t i = 0; i < n; ++i) {
    if (std::abs(w(i, i)) > 1e-12) {
      throw InputError("NonzeroDiagonal", "weight matrix must have a zero diagonal");
    }
    for (std::size_t j = i + 1; j < n; ++j) {
      if (std::abs(w(i, j) - w(j, i)) > 1e-9) {
        throw AsymmetricInput("weight matrix is not symmetric");
      }
      if (w(i, j) < 0.0) {
        throw InputError("NegativeWeight", "weights must be nonnegative");
      }
    }
  }
}

}  // namespace

Dendrogram dendrogram(const Matrix& weights, const std::vector<std::string>& labels) {
  check_weights(weights);
  const std::size_t n = weights.rows();
  if (labels.size() != n) {
    throw InputError("LabelMismatch", "label count does not match matrix size");
  }

  Dendrogram tree;
  tree.leaf_labels = labels;
  if (n == 1) return tree;

  double w_max = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) w_max = std::max(w_max, weights(i, j));
  }

  struct Cluster {
    int id;
    std::size_t size;
  };
  std::vector<Cluster> active;
  for (std::size_t i = 0; i < n; ++i) active.push_back({static_cast<int>(i), 1});

  // Distance matrix over active cluster positions, updated by Lance-Williams.
  std::vector<std::vector<double>> dist(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j) dist[i][j] = w_max - weights(i, j);
    }
  }

  int next_id = static_cast<int>(n);
  while (active.size() > 1) {
    std::size_t bi = 0, bj = 1;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < active.size(); ++i) {
      for (std::size_t j = i + 1; j < active.size(); ++j) {
        const double d = dist[i][j];
        // strict < keeps the smallest id pair on ties (positions are id-ordered)
        if (d < best) {
          best = d;
          bi = i;
          bj = j;
        }
      }
    }

    tree.merges.push_back({active[bi].id, active[bj].id, best});

    const double size_i = static_cast<double>(active[bi].size);
    const double size_j = static_cast<double>(active[bj].size);
    for (std::size_t k = 0; k < active.size(); ++k) {
      if (k == bi || k == bj) continue;
      const double d = (size_i * dist[bi][k] + size_j * dist[bj][k]) / (size_i + size_j);
      dist[bi][k] = d;
      dist[k][bi] = d;
    }
    active[bi] = {next_id++, active[bi].size + active[bj].size};
    active.erase(active.begin() + static_cast<std::ptrdiff_t>(bj));
    for (auto& row : dist) row.erase(row.begin() + static_cast<std::ptrdiff_t>(bj));
    dist.erase(dist.begin() + static_cast<std::ptrdiff_t>(bj));
  }
  return tree;
}

namespace {

double node_height(const Dendrogram& tree, int id) {
  const int n = static_cast<int>(tree.leaf_labels.size());
  return id < n ? 0.0 : tree.merges[static_cast<std::size_t>(id - n)].height;
}

void newick_node(const Dendrogram& tree, int id, double parent_height,
                 std::ostringstream& out) {
  const int n = static_cast<int>(tree.leaf_labels.size());
  if (id < n) {
    out << tree.leaf_labels[static_cast<std::size_t>(id)] << ':' << parent_height;
    return;
  }
  const auto& merge = tree.merges[static_cast<std::size_t>(id - n)];
  out << '(';
  newick_node(tree, merge.a, merge.height - node_height(tree, merge.a), out);
  out << ',';
  newick_node(tree, merge.b, merge.height - node_height(tree, merge.b), out);
  out << ')';
  out << ':' << parent_height;
}

}  // namespace

std::string to_newick(const Dendrogram& tree) {
  std::ostringstream out;
  const int n = static_cast<int>(tree.leaf_labels.size());
  if (tree.merges.empty()) {
    out << (n == 1 ? tree.leaf_labels[0] : std::string()) << ';';
    return out.str();
  }
  const int root = n + static_cast<int>(tree.merges.size()) - 1;
  newick_node(tree, root, 0.0, out);
  out << ';';
  return out.str();
}

std::size_t CommunityAssignment::community_count() const {
  return std::set<int>(community.begin(), community.end()).size();
}

double modularity(const Matrix& weights, const std::vector<int>& assignment) {
  check_weights(weights);
  const std::size_t n = weights.rows();
  if (assignment.size() != n) {
    throw InputError("BadAssignment", "assignment size does not match matrix");
  }
  double two_w = 0.0;
  std::vector<double> strength(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      strength[i] += weights(i, j);
    }
    two_w += strength[i];
  }
  if (two_w <= 0.0) return 0.0;

  double q = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (assignment[i] != assignment[j]) continue;
      q += weights(i, j) - strength[i] * strength[j] / two_w;
    }
  }
  return q / two_w;
}

CommunityAssignment best_cut(const Dendrogram& tree, const Matrix& weights) {
  const std::size_t n = tree.leaf_labels.size();
  check_weights(weights);
  if (weights.rows() != n) {
    throw InputError("LabelMismatch", "weights do not match the dendrogram");
  }

  // Walk the merges, evaluating Q after each one (plus the all-singleton cut).
  std::vector<int> membership(n);
  for (std::size_t i = 0; i < n; ++i) membership[i] = static_cast<int>(i);
  std::vector<std::vector<int>> node_leaves(n + tree.merges.size());
  for (std::size_t i = 0; i < n; ++i) node_leaves[i] = {static_cast<int>(i)};

  CommunityAssignment best;
  best.community = membership;
  best.q = modularity(weights, membership);
  std::size_t best_count = n;

  for (std::size_t k = 0; k < tree.merges.size(); ++k) {
    const auto& merge = tree.merges[k];
    auto& merged = node_leaves[n + k];
    merged = node_leaves[static_cast<std::size_t>(merge.a)];
    const auto& other = node_leaves[static_cast<std::size_t>(merge.b)];
    merged.insert(merged.end(), other.begin(), other.end());
    for (int leaf : merged) {
      membership[static_cast<std::size_t>(leaf)] = static_cast<int>(n + k);
    }
    const double q = modularity(weights, membership);
    const std::size_t count = n - k - 1;
    if (q > best.q + 1e-12 || (std::abs(q - best.q) <= 1e-12 && count < best_count)) {
      best.q = q;
      best.community = membership;
      best_count = count;
    }
  }

  // Renumber communities to consecutive ids in first-appearance order.
  std::vector<int> remap(n + tree.merges.size(), -1);
  int next = 0;
  for (int& c : best.community) {
    if (remap[static_cast<std::size_t>(c)] < 0) remap[static_cast<std::size_t>(c)] = next++;
    c = remap[static_cast<std::size_t>(c)];
  }
  return best;
}

}  // namespace synflow
