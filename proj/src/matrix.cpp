// Copyright 2026 The synflow Authors
// SPDX-License-Identifier: Apache-2.0

#include "synflow/matrix.hpp"

#include <cassert>

#include "synflow/simd.hpp"

namespace synflow {

Matrix gram(const Matrix& a) {
  const std::size_t n = a.rows();
  const std::size_t p = a.cols();
  Matrix g(p, p);
  // Accumulate the outer product of each row; rows are contiguous so the
  // inner update is a single axpy per (row, pivot column).
  for (std::size_t t = 0; t < n; ++t) {
    const double* r = a.row(t);
    for (std::size_t j = 0; j < p; ++j) {
      if (r[j] != 0.0) {
        simd::axpy(r[j], r + j, g.row(j) + j, p - j);
      }
    }
  }
  for (std::size_t i = 0; i < p; ++i) {
    for (std::size_t j = 0; j < i; ++j) g(i, j) = g(j, i);
  }
  return g;
}

std::vector<double> mat_t_vec(const Matrix& a, const std::vector<double>& y) {
  assert(y.size() == a.rows());
  std::vector<double> out(a.cols(), 0.0);
  for (std::size_t t = 0; t < a.rows(); ++t) {
    simd::axpy(y[t], a.row(t), out.data(), a.cols());
  }
  return out;
}

std::vector<double> mat_vec(const Matrix& a, const std::vector<double>& x) {
  assert(x.size() == a.cols());
  std::vector<double> out(a.rows());
  for (std::size_t t = 0; t < a.rows(); ++t) {
    out[t] = simd::dot(a.row(t), x.data(), a.cols());
  }
  return out;
}

std::vector<double> column_means(const Matrix& a) {
  std::vector<double> means(a.cols(), 0.0);
  if (a.rows() == 0) return means;
  for (std::size_t t = 0; t < a.rows(); ++t) {
    simd::axpy(1.0, a.row(t), means.data(), a.cols());
  }
  for (double& m : means) m /= static_cast<double>(a.rows());
  return means;
}

void center_columns(Matrix& a, const std::vector<double>& means) {
  assert(means.size() == a.cols());
  for (std::size_t t = 0; t < a.rows(); ++t) {
    simd::axpy(-1.0, means.data(), a.row(t), a.cols());
  }
}

Matrix covariance(const Matrix& a) {
  assert(a.rows() >= 2);
  Matrix centered = a;
  center_columns(centered, column_means(a));
  Matrix g = gram(centered);
  const double scale = 1.0 / static_cast<double>(a.rows() - 1);
  for (std::size_t i = 0; i < g.rows(); ++i) {
    for (std::size_t j = 0; j < g.cols(); ++j) g(i, j) *= scale;
  }
  return g;
}

}  // namespace synflow
