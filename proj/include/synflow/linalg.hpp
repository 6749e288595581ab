// Copyright 2026 The synflow Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <vector>

#include "synflow/matrix.hpp"

namespace synflow {

/// In-place lower Cholesky factorization of a symmetric matrix. Returns false
/// if a pivot falls below rel_tol times the largest diagonal entry (the
/// matrix is not numerically positive definite).
bool cholesky_factor(Matrix& a, double rel_tol = 1e-13);

/// Solves L Lᵀ x = b given the factor produced by cholesky_factor.
std::vector<double> cholesky_solve(const Matrix& l, const std::vector<double>& b);

/// Solves (A + lambda·I) x = b for symmetric positive semidefinite A.
/// Returns nullopt when the shifted matrix is numerically singular.
std::optional<std::vector<double>> solve_spd(const Matrix& a, double lambda,
                                             const std::vector<double>& b);

struct EigenSym {
  std::vector<double> values;  // descending
  Matrix vectors;              // column j is the eigenvector of values[j]
};

/// Cyclic Jacobi eigendecomposition of a symmetric matrix. Intended for the
/// moderate sizes that arise here (covariances, feature Grams).
EigenSym jacobi_eigensym(const Matrix& a, int max_sweeps = 64);

}  // namespace synflow
