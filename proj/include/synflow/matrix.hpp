// Copyright 2026 The synflow Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <vector>

namespace synflow {

/// Dense row-major matrix of doubles.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  double* row(std::size_t i) { return data_.data() + i * cols_; }
  const double* row(std::size_t i) const { return data_.data() + i * cols_; }

  double* data() { return data_.data(); }
  const double* data() const { return data_.data(); }

  std::vector<double> column(std::size_t j) const {
    std::vector<double> out(rows_);
    for (std::size_t i = 0; i < rows_; ++i) out[i] = data_[i * cols_ + j];
    return out;
  }

  bool operator==(const Matrix& other) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// G = AᵀA accumulated row by row (symmetric, cols×cols).
Matrix gram(const Matrix& a);

/// Aᵀy.
std::vector<double> mat_t_vec(const Matrix& a, const std::vector<double>& y);

/// y = A x.
std::vector<double> mat_vec(const Matrix& a, const std::vector<double>& x);

/// Per-column means.
std::vector<double> column_means(const Matrix& a);

/// Subtracts the given value from every entry of column j in place.
void center_columns(Matrix& a, const std::vector<double>& means);

/// Sample covariance (unbiased) of the columns of a, centered internally.
Matrix covariance(const Matrix& a);

}  // namespace synflow
