// Copyright 2026 The synflow Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <vector>

namespace synflow::stats {

double mean(const std::vector<double>& x);
/// Unbiased sample variance.
double variance(const std::vector<double>& x);
double stddev(const std::vector<double>& x);
/// Median (average of the two central order statistics for even sizes).
double median(std::vector<double> x);

/// Normal quantile via Wichura's AS 241 (PPND16), accurate to ~1e-16.
double normal_quantile(double p);

/// Regularized incomplete beta function I_x(a, b).
double incomplete_beta(double a, double b, double x);

/// Upper tail P(F >= f) for an F distribution with d1, d2 degrees of freedom.
double f_survival(double f, double d1, double d2);

}  // namespace synflow::stats
