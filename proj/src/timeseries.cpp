// Copyright 2026 The synflow Authors
// SPDX-License-Identifier: Apache-2.0

#include "synflow/timeseries.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include "synflow/errors.hpp"
#include "synflow/stats.hpp"

namespace synflow {

TimeSeriesSet::TimeSeriesSet(Matrix values, std::vector<std::string> labels)
    : values_(std::move(values)), labels_(std::move(labels)) {
  if (labels_.size() != values_.cols()) {
    throw InputError("LabelMismatch", "label count does not match column count");
  }
  if (values_.cols() < 2) {
    throw InputError("TooFewVariables", "a time-series set needs at least 2 variables");
  }
  std::unordered_set<std::string> seen;
  for (const auto& l : labels_) {
    if (!seen.insert(l).second) {
      throw InputError("DuplicateLabel", "duplicate variable label '" + l + "'");
    }
  }
  for (std::size_t i = 0; i < values_.rows(); ++i) {
    for (std::size_t j = 0; j < values_.cols(); ++j) {
      if (!std::isfinite(values_(i, j))) {
        throw InputError("NonFiniteValue",
                         "non-finite value at row " + std::to_string(i) +
                             ", column '" + labels_[j] + "'");
      }
    }
  }
}

std::size_t TimeSeriesSet::index_of(const std::string& label) const {
  for (std::size_t j = 0; j < labels_.size(); ++j) {
    if (labels_[j] == label) return j;
  }
  throw UnknownLabel(label);
}

TimeSeriesSet standardize(const TimeSeriesSet& ts) {
  const std::size_t rows = ts.samples();
  const std::size_t cols = ts.variables();
  if (rows < 2) throw InsufficientSamples("standardize needs at least 2 samples");

  Matrix out = ts.values();
  for (std::size_t j = 0; j < cols; ++j) {
    std::vector<double> col = out.column(j);
    const double m = stats::mean(col);
    const double v = stats::variance(col);
    if (!(v > 0.0)) throw ZeroVarianceColumn(ts.labels()[j]);
    const double inv_sd = 1.0 / std::sqrt(v);
    for (std::size_t i = 0; i < rows; ++i) out(i, j) = (out(i, j) - m) * inv_sd;
  }
  return TimeSeriesSet(std::move(out), ts.labels());
}

TimeSeriesSet read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("FileNotFound", "cannot open '" + path + "'");

  std::string line;
  if (!std::getline(in, line)) throw InputError("EmptyFile", "'" + path + "' is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();

  std::vector<std::string> labels;
  {
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) labels.push_back(cell);
  }
  const std::size_t cols = labels.size();

  std::vector<double> data;
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    std::size_t c = 0;
    while (std::getline(ss, cell, ',')) {
      try {
        data.push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw InputError("BadNumber", "unparsable value '" + cell + "' in '" + path +
                                          "' row " + std::to_string(rows + 2));
      }
      ++c;
    }
    if (c != cols) {
      throw InputError("RaggedRow", "row " + std::to_string(rows + 2) + " of '" +
                                        path + "' has " + std::to_string(c) +
                                        " cells, expected " + std::to_string(cols));
    }
    ++rows;
  }

  Matrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = data[i * cols + j];
  }
  return TimeSeriesSet(std::move(m), std::move(labels));
}

void write_csv(const TimeSeriesSet& ts, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw InputError("FileNotWritable", "cannot write '" + path + "'");
  const auto& labels = ts.labels();
  for (std::size_t j = 0; j < labels.size(); ++j) {
    out << labels[j] << (j + 1 < labels.size() ? ',' : '\n');
  }
  char buf[32];
  for (std::size_t i = 0; i < ts.samples(); ++i) {
    for (std::size_t j = 0; j < ts.variables(); ++j) {
      std::snprintf(buf, sizeof buf, "%.17g", ts.values()(i, j));
      out << buf << (j + 1 < ts.variables() ? ',' : '\n');
    }
  }
}

}  // namespace synflow
