// Copyright 2026 The synflow Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <map>
#include <string>
#include <vector>

#include "synflow/causality.hpp"

namespace synflow {

/// Pairwise synergy index for one target: positive = redundancy, negative =
/// synergy. Computed from the symmetric form
///   psi = du(X, {i,j}) - du(X, {i}) - du(X, {j})
/// with all four underlying epsilons sharing the lambda of the full model, so
/// the asymmetric form of the same quantity is an exact algebraic identity.
struct PsiValue {
  int i = 0;
  int j = 0;
  int target = 0;      // variable index; kTargetBlock for a component target
  int component = -1;  // principal-component index when applicable
  double psi = 0.0;
};

/// psi for a variable target with conditioning = all variables.
PsiValue psi_pair(const TimeSeriesSet& ts, int target, int i, int j,
                  const ModelSpec& spec);

/// psi over an existing engine (conditioning = the engine scope).
double psi_pair(const GcEngine& engine, int i, int j);

/// The first (asymmetric) form of the same index, for verification:
///   du(X \ {j}, {i}) - du(X, {i}), all epsilons at the full-model lambda.
double psi_pair_first_form(const GcEngine& engine, int i, int j);

/// Cumulant of the prediction-error expansion for driver subset B, with the
/// conditioning set exactly B (plus the target past):
///   S(B) = sum over nonempty Gamma ⊆ B of (-1)^(|Gamma|+1) du_B(Gamma -> target).
/// This is the Moebius inverse of g(B) = du_B(B -> target), so
/// sum over nonempty Gamma ⊆ B of S(Gamma) telescopes back to g(B).
/// S({i}) = du_i(i -> target); S({i,j}) = -psi restricted to {i,j}.
/// Throws SubsetTooLarge for |B| > 5.
double cumulant(const TimeSeriesSet& ts, int target, const std::vector<int>& subset,
                const ModelSpec& spec);

/// All cumulants S(B) for nonempty B ⊆ scope, evaluated on one engine with a
/// single ridge parameter (selected on the scope model) so the Moebius
/// consistency identity holds exactly.
struct CumulantTable {
  int target = 0;
  std::map<std::vector<int>, double> entries;
};

CumulantTable cumulant_table(const TimeSeriesSet& ts, int target,
                             const std::vector<int>& scope, const ModelSpec& spec);

/// Principal-component target selection: an explicit count, or the smallest
/// count whose cumulative explained variance reaches `fraction`.
struct ComponentSelection {
  int count = 0;
  double fraction = 0.95;
  static ComponentSelection by_count(int k) { return {k, 0.0}; }
  static ComponentSelection by_fraction(double f) { return {0, f}; }
};

struct PcaResult {
  Matrix components;               // T x k time courses, eigenvalue-descending
  Matrix loadings;                 // n x k eigenvectors (sign-fixed)
  std::vector<double> eigenvalues; // all n, descending
  int k = 0;
};

/// Eigendecomposition of the sample covariance; component time courses are
/// the projections of the (standardized) data onto the eigenvectors. Sign
/// convention: the largest-magnitude loading of each component is positive.
PcaResult pca_targets(const TimeSeriesSet& ts, const ComponentSelection& selection);

/// The aggregated synergy network: Psi(i,j) summed over the first n_lambda
/// principal components taken as targets, split into its redundant part
/// (positive values) and synergetic part (magnitudes of negative values).
struct SynergyMatrix {
  std::vector<std::string> labels;
  Matrix psi;    // n x n symmetric, zero diagonal
  Matrix psi_r;  // elementwise positive part
  Matrix psi_s;  // elementwise magnitude of the negative part
  int n_lambda = 0;
  std::vector<double> strengths_r;  // row sums of psi_r
  std::vector<double> strengths_s;  // row sums of psi_s
};

SynergyMatrix psi_matrix(const TimeSeriesSet& ts, const ComponentSelection& selection,
                         const ModelSpec& spec);

struct PsiSplit {
  Matrix psi_r;
  Matrix psi_s;
  std::vector<double> strengths_r;
  std::vector<double> strengths_s;
};

/// Heaviside split psi_r = max(psi, 0), psi_s = max(-psi, 0) with row-sum
/// strengths. Throws AsymmetricInput if |psi - psi'|_max > 1e-9.
PsiSplit split_psi(const Matrix& psi);

/// Two-sided surrogate p-value for one Psi entry: both drivers are circularly
/// shifted (independent shifts >= m + 10) and Psi(i,j) is re-derived against
/// the original component targets.
double psi_entry_significance(const TimeSeriesSet& ts, const PcaResult& pca,
                              const ModelSpec& spec, int i, int j, double observed,
                              int surrogates, std::uint64_t seed);

}  // namespace synflow
