// Copyright 2026 The synflow Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

#include "synflow/matrix.hpp"

namespace synflow {

/// A multivariate time-series record: T samples of n labeled variables.
/// Instances are immutable after construction and safe to share across
/// threads. Construction validates finiteness, label uniqueness and n >= 2.
class TimeSeriesSet {
 public:
  TimeSeriesSet(Matrix values, std::vector<std::string> labels);

  std::size_t samples() const { return values_.rows(); }
  std::size_t variables() const { return values_.cols(); }
  const Matrix& values() const { return values_; }
  const std::vector<std::string>& labels() const { return labels_; }

  /// Index of the variable with the given label; throws UnknownLabel.
  std::size_t index_of(const std::string& label) const;

  std::vector<double> column(std::size_t j) const { return values_.column(j); }

 private:
  Matrix values_;
  std::vector<std::string> labels_;
};

/// Returns a copy with every column shifted and scaled to sample mean 0 and
/// unbiased sample variance 1. Throws ZeroVarianceColumn for constant columns.
TimeSeriesSet standardize(const TimeSeriesSet& ts);

/// CSV interchange: first row is the header with variable labels, following
/// rows are samples in time order, comma delimited, '.' decimal point, UTF-8.
TimeSeriesSet read_csv(const std::string& path);
void write_csv(const TimeSeriesSet& ts, const std::string& path);

}  // namespace synflow
