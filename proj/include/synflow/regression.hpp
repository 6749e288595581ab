// Copyright 2026 The synflow Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "synflow/embedding.hpp"
#include "synflow/matrix.hpp"

namespace synflow {

enum class KernelType { kLinear, kPolynomial, kGaussian };

/// Regression kernel family. Polynomial degree 1 is identical to linear;
/// Gaussian width 0 requests the median-pairwise-distance heuristic.
struct Kernel {
  KernelType type = KernelType::kLinear;
  int degree = 1;
  double width = 0.0;

  static Kernel linear() { return {}; }
  static Kernel polynomial(int degree) {
    return {KernelType::kPolynomial, degree, 0.0};
  }
  static Kernel gaussian(double width = 0.0) {
    return {KernelType::kGaussian, 1, width};
  }
  std::string name() const;
};

enum class Regularization { kNone, kRidge, kRidgeGcv };

/// Regression configuration shared by all causality measures.
struct ModelSpec {
  int order = 1;  // lags per variable
  Kernel kernel = Kernel::linear();
  Regularization regularization = Regularization::kNone;
  double ridge_lambda = 0.0;     // used when regularization == kRidge
  bool cross_validated = false;  // exploratory out-of-sample epsilon; not used by oracles
};

/// Result of one prediction-error fit. `epsilon` is the in-sample mean
/// squared residual (or the blocked-CV estimate when cross_validated is set);
/// `n_params` counts fitted coefficients including the intercept.
struct PredictionError {
  double epsilon = 0.0;
  std::size_t n_params = 0;
  double lambda_used = 0.0;
};

/// All monomials of total degree 1..p over the columns of `predictors`, in
/// graded lexicographic order (degree 1 first; within a degree, higher powers
/// of earlier columns first: x, y, x², xy, y²). The constant term is left to
/// the intercept. Throws FeatureExplosion when C(d+p, p) - 1 > rows/2.
Matrix polynomial_features(const Matrix& predictors, int degree);

/// Exponent vectors backing polynomial_features, in the same order.
std::vector<std::vector<int>> monomial_exponents(std::size_t n_columns, int degree);

/// Fits the model described by `spec` to the embedding and returns the mean
/// squared prediction error. Deterministic; the intercept is always fitted
/// and never penalized. Throws SingularDesign when the normal equations are
/// rank deficient and regularization is kNone.
PredictionError fit_prediction_error(const EmbeddingDataset& data, const ModelSpec& spec);

/// GCV-selected ridge parameter over the fixed grid {0} plus 25 log-spaced
/// values in [1e-8, 1e2]. Requires spec.regularization == kRidgeGcv.
double select_regularization(const EmbeddingDataset& data, const ModelSpec& spec);

/// The lambda grid used by select_regularization.
const std::vector<double>& lambda_grid();

namespace detail {

/// Explicit-feature least squares over a fixed design, centered internally,
/// supporting fits restricted to column subsets. The Gram matrix of the full
/// design is accumulated once; a subset fit only gathers its rows/columns.
class FeatureModel {
 public:
  FeatureModel(const Matrix& features, std::vector<double> response);

  std::size_t rows() const { return rows_; }
  std::size_t feature_count() const { return features_t_.rows(); }

  struct Fit {
    double epsilon = 0.0;
    double rss = 0.0;
    std::size_t n_params = 0;
    double lambda = 0.0;
  };

  /// Least squares on the given feature columns with ridge penalty lambda.
  /// Throws SingularDesign for lambda == 0 on a rank-deficient subset when
  /// `allow_singular` is false; with it true returns epsilon = NaN instead.
  Fit fit_subset(const std::vector<std::size_t>& cols, double lambda,
                 bool allow_singular = false) const;

  Fit fit_all(double lambda) const;

  /// GCV score minimizer over lambda_grid() for the given columns.
  double gcv_lambda(const std::vector<std::size_t>& cols) const;

  /// Blocked K-fold out-of-sample epsilon (exploratory mode).
  double cross_validated_epsilon(const std::vector<std::size_t>& cols, double lambda,
                                 int folds = 5) const;

 private:
  std::size_t rows_ = 0;
  Matrix features_t_;            // transposed centered features (P x rows)
  std::vector<double> response_; // centered
  double yty_ = 0.0;
  Matrix gram_;                  // P x P
  std::vector<double> xty_;      // P
  std::vector<std::size_t> all_cols_;
};

/// Gaussian-kernel ridge regression on the rows of a design matrix.
class GaussianKernelModel {
 public:
  GaussianKernelModel(const Matrix& design, std::vector<double> response, double width);

  double width() const { return width_; }
  std::size_t rows() const { return rows_; }

  FeatureModel::Fit fit(double lambda) const;
  double gcv_lambda() const;

 private:
  std::size_t rows_ = 0;
  double width_ = 0.0;
  Matrix kernel_;                 // Gram matrix
  std::vector<double> response_;  // centered
};

/// Median pairwise distance between rows (the Gaussian width heuristic);
/// deterministic, evenly strided subsample above 2048 rows.
double median_pairwise_distance(const Matrix& design);

}  // namespace detail

}  // namespace synflow
