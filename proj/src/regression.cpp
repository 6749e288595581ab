// Copyright 2026 The synflow Authors
// SPDX-License-Identifier: Apache-2.0

#include "synflow/regression.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "synflow/errors.hpp"
#include "synflow/linalg.hpp"
#include "synflow/simd.hpp"
#include "synflow/stats.hpp"

namespace synflow {

std::string Kernel::name() const {
  switch (type) {
    case KernelType::kLinear: return "linear";
    case KernelType::kPolynomial: return "polynomial(" + std::to_string(degree) + ")";
    case KernelType::kGaussian: return "gaussian";
  }
  return "unknown";
}

namespace {

double binomial(std::size_t n, std::size_t k) {
  double out = 1.0;
  for (std::size_t i = 1; i <= k; ++i) {
    out *= static_cast<double>(n - k + i) / static_cast<double>(i);
  }
  return out;
}

void enumerate_exponents(std::size_t n_cols, int remaining, std::size_t pos,
                         std::vector<int>& current,
                         std::vector<std::vector<int>>& out) {
  if (pos + 1 == n_cols) {
    current[pos] = remaining;
    out.push_back(current);
    return;
  }
  for (int e = remaining; e >= 0; --e) {
    current[pos] = e;
    enumerate_exponents(n_cols, remaining - e, pos + 1, current, out);
  }
}

}  // namespace

std::vector<std::vector<int>> monomial_exponents(std::size_t n_columns, int degree) {
  std::vector<std::vector<int>> out;
  std::vector<int> current(n_columns, 0);
  for (int d = 1; d <= degree; ++d) {
    enumerate_exponents(n_columns, d, 0, current, out);
  }
  return out;
}

Matrix polynomial_features(const Matrix& predictors, int degree) {
  if (degree < 1) throw ConfigError("BadDegree", "polynomial degree must be >= 1");
  const std::size_t d = predictors.cols();
  const std::size_t rows = predictors.rows();
  const double count = binomial(d + static_cast<std::size_t>(degree),
                                static_cast<std::size_t>(degree)) - 1.0;
  if (count > static_cast<double>(rows) / 2.0) {
    throw FeatureExplosion("polynomial degree " + std::to_string(degree) + " over " +
                           std::to_string(d) + " columns yields " +
                           std::to_string(static_cast<long long>(count)) +
                           " features > rows/2 = " + std::to_string(rows / 2) +
                           "; consider the gaussian kernel");
  }
  if (degree == 1) return predictors;

  const auto exps = monomial_exponents(d, degree);
  Matrix out(rows, exps.size());
  for (std::size_t t = 0; t < rows; ++t) {
    const double* in = predictors.row(t);
    double* o = out.row(t);
    for (std::size_t f = 0; f < exps.size(); ++f) {
      double v = 1.0;
      for (std::size_t j = 0; j < d; ++j) {
        for (int e = 0; e < exps[f][j]; ++e) v *= in[j];
      }
      o[f] = v;
    }
  }
  return out;
}

const std::vector<double>& lambda_grid() {
  static const std::vector<double> grid = [] {
    std::vector<double> g{0.0};
    for (int i = 0; i < 25; ++i) {
      g.push_back(std::pow(10.0, -8.0 + 10.0 * i / 24.0));
    }
    return g;
  }();
  return grid;
}

namespace detail {

FeatureModel::FeatureModel(const Matrix& features, std::vector<double> response)
    : rows_(features.rows()), response_(std::move(response)) {
  if (response_.size() != rows_) {
    throw InputError("ShapeMismatch", "response length != feature rows");
  }
  const std::size_t p = features.cols();

  Matrix centered = features;
  center_columns(centered, column_means(features));
  const double y_mean = stats::mean(response_);
  for (double& y : response_) y -= y_mean;
  yty_ = simd::sumsq(response_.data(), rows_);

  gram_ = gram(centered);
  xty_ = mat_t_vec(centered, response_);

  features_t_ = Matrix(p, rows_);
  for (std::size_t t = 0; t < rows_; ++t) {
    const double* r = centered.row(t);
    for (std::size_t j = 0; j < p; ++j) features_t_(j, t) = r[j];
  }
  all_cols_.resize(p);
  std::iota(all_cols_.begin(), all_cols_.end(), 0);
}

FeatureModel::Fit FeatureModel::fit_subset(const std::vector<std::size_t>& cols,
                                           double lambda, bool allow_singular) const {
  const std::size_t k = cols.size();
  Fit fit;
  fit.lambda = lambda;
  fit.n_params = k + 1;  // + intercept

  if (k == 0) {
    fit.rss = yty_;
    fit.epsilon = yty_ / static_cast<double>(rows_);
    return fit;
  }

  Matrix g(k, k);
  std::vector<double> b(k);
  for (std::size_t i = 0; i < k; ++i) {
    b[i] = xty_[cols[i]];
    for (std::size_t j = 0; j < k; ++j) g(i, j) = gram_(cols[i], cols[j]);
  }
  auto beta = solve_spd(g, lambda, b);
  if (!beta) {
    if (allow_singular) {
      fit.epsilon = std::numeric_limits<double>::quiet_NaN();
      fit.rss = fit.epsilon;
      return fit;
    }
    throw SingularDesign("normal equations are rank deficient (" + std::to_string(k) +
                         " columns); use ridge regularization");
  }

  std::vector<double> resid(response_);
  for (std::size_t i = 0; i < k; ++i) {
    simd::axpy(-(*beta)[i], features_t_.row(cols[i]), resid.data(), rows_);
  }
  fit.rss = std::max(simd::sumsq(resid.data(), rows_), 0.0);
  fit.epsilon = fit.rss / static_cast<double>(rows_);
  return fit;
}

FeatureModel::Fit FeatureModel::fit_all(double lambda) const {
  return fit_subset(all_cols_, lambda);
}

double FeatureModel::gcv_lambda(const std::vector<std::size_t>& cols) const {
  const std::size_t k = cols.size();
  if (k == 0) return 0.0;

  Matrix g(k, k);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) g(i, j) = gram_(cols[i], cols[j]);
  }
  const EigenSym eig = jacobi_eigensym(g);

  double best_lambda = 0.0;
  double best_score = std::numeric_limits<double>::infinity();
  const double n = static_cast<double>(rows_);
  for (double lambda : lambda_grid()) {
    const Fit fit = fit_subset(cols, lambda, /*allow_singular=*/true);
    if (!std::isfinite(fit.rss)) continue;
    double df = 1.0;  // intercept
    for (double d : eig.values) {
      if (d > 0.0) df += d / (d + lambda);
    }
    if (df >= n) continue;
    const double denom = 1.0 - df / n;
    const double score = (fit.rss / n) / (denom * denom);
    if (score < best_score) {
      best_score = score;
      best_lambda = lambda;
    }
  }
  if (!std::isfinite(best_score)) {
    throw SingularDesign("GCV could not stabilize the design on any grid lambda");
  }
  return best_lambda;
}

double FeatureModel::cross_validated_epsilon(const std::vector<std::size_t>& cols,
                                             double lambda, int folds) const {
  const std::size_t k = cols.size();
  const std::size_t nfolds =
      std::max<std::size_t>(2, std::min<std::size_t>(static_cast<std::size_t>(folds), rows_));
  double sq_err = 0.0;
  std::size_t counted = 0;

  for (std::size_t f = 0; f < nfolds; ++f) {
    const std::size_t lo = rows_ * f / nfolds;
    const std::size_t hi = rows_ * (f + 1) / nfolds;
    if (hi <= lo) continue;
    const std::size_t n_train = rows_ - (hi - lo);
    if (n_train < k + 2) throw InsufficientSamples("cross-validation fold too small");

    // Gather the training fold into contiguous per-column storage.
    Matrix train(k, n_train);
    std::vector<double> y_train(n_train);
    std::size_t r = 0;
    for (std::size_t t = 0; t < rows_; ++t) {
      if (t >= lo && t < hi) continue;
      for (std::size_t i = 0; i < k; ++i) train(i, r) = features_t_(cols[i], t);
      y_train[r] = response_[t];
      ++r;
    }
    std::vector<double> x_mean(k);
    for (std::size_t i = 0; i < k; ++i) {
      x_mean[i] = simd::sum(train.row(i), n_train) / static_cast<double>(n_train);
      for (std::size_t t = 0; t < n_train; ++t) train(i, t) -= x_mean[i];
    }
    const double y_mean = stats::mean(y_train);
    for (double& y : y_train) y -= y_mean;

    Matrix g(k, k);
    std::vector<double> b(k);
    for (std::size_t i = 0; i < k; ++i) {
      b[i] = simd::dot(train.row(i), y_train.data(), n_train);
      for (std::size_t j = i; j < k; ++j) {
        g(i, j) = simd::dot(train.row(i), train.row(j), n_train);
        g(j, i) = g(i, j);
      }
    }
    auto beta = solve_spd(g, lambda, b);
    if (!beta) throw SingularDesign("rank-deficient fold in cross validation");

    for (std::size_t t = lo; t < hi; ++t) {
      double pred = y_mean;
      for (std::size_t i = 0; i < k; ++i) {
        pred += (*beta)[i] * (features_t_(cols[i], t) - x_mean[i]);
      }
      const double e = response_[t] - pred;
      sq_err += e * e;
      ++counted;
    }
  }
  return counted > 0 ? sq_err / static_cast<double>(counted)
                     : std::numeric_limits<double>::quiet_NaN();
}

double median_pairwise_distance(const Matrix& design) {
  const std::size_t n = design.rows();
  if (n < 2) return 1.0;
  constexpr std::size_t kMaxPoints = 2048;
  std::vector<std::size_t> idx;
  if (n <= kMaxPoints) {
    idx.resize(n);
    std::iota(idx.begin(), idx.end(), 0);
  } else {
    idx.reserve(kMaxPoints);
    for (std::size_t i = 0; i < kMaxPoints; ++i) idx.push_back(i * n / kMaxPoints);
  }
  std::vector<double> dists;
  dists.reserve(idx.size() * (idx.size() - 1) / 2);
  for (std::size_t a = 0; a < idx.size(); ++a) {
    for (std::size_t b = a + 1; b < idx.size(); ++b) {
      dists.push_back(std::sqrt(
          simd::dist2(design.row(idx[a]), design.row(idx[b]), design.cols())));
    }
  }
  const double med = stats::median(std::move(dists));
  return med > 0.0 ? med : 1.0;
}

GaussianKernelModel::GaussianKernelModel(const Matrix& design,
                                         std::vector<double> response, double width)
    : rows_(design.rows()), response_(std::move(response)) {
  if (response_.size() != rows_) {
    throw InputError("ShapeMismatch", "response length != design rows");
  }
  width_ = width > 0.0 ? width : median_pairwise_distance(design);
  const double y_mean = stats::mean(response_);
  for (double& y : response_) y -= y_mean;

  kernel_ = Matrix(rows_, rows_);
  const double inv = -0.5 / (width_ * width_);
  for (std::size_t i = 0; i < rows_; ++i) {
    kernel_(i, i) = 1.0;
    for (std::size_t j = i + 1; j < rows_; ++j) {
      const double k = std::exp(inv * simd::dist2(design.row(i), design.row(j),
                                                  design.cols()));
      kernel_(i, j) = k;
      kernel_(j, i) = k;
    }
  }
}

FeatureModel::Fit GaussianKernelModel::fit(double lambda) const {
  auto coef = solve_spd(kernel_, lambda, response_);
  if (!coef) {
    throw SingularDesign("Gaussian Gram matrix is numerically singular; use ridge");
  }
  std::vector<double> resid(response_);
  const std::vector<double> pred = mat_vec(kernel_, *coef);
  for (std::size_t i = 0; i < rows_; ++i) resid[i] -= pred[i];

  FeatureModel::Fit fit;
  fit.lambda = lambda;
  fit.n_params = rows_;  // kernel coefficients; effective dof depends on lambda
  fit.rss = std::max(simd::sumsq(resid.data(), rows_), 0.0);
  fit.epsilon = fit.rss / static_cast<double>(rows_);
  return fit;
}

double GaussianKernelModel::gcv_lambda() const {
  // Eigendecomposition cost is cubic; select lambda on a strided subsample
  // when the Gram is large, then fit at that lambda on all rows.
  constexpr std::size_t kMaxEig = 512;
  std::vector<std::size_t> idx;
  if (rows_ <= kMaxEig) {
    idx.resize(rows_);
    std::iota(idx.begin(), idx.end(), 0);
  } else {
    idx.reserve(kMaxEig);
    for (std::size_t i = 0; i < kMaxEig; ++i) idx.push_back(i * rows_ / kMaxEig);
  }
  const std::size_t m = idx.size();
  Matrix sub(m, m);
  std::vector<double> y_sub(m);
  for (std::size_t a = 0; a < m; ++a) {
    y_sub[a] = response_[idx[a]];
    for (std::size_t b = 0; b < m; ++b) sub(a, b) = kernel_(idx[a], idx[b]);
  }
  const EigenSym eig = jacobi_eigensym(sub);

  double best_lambda = lambda_grid()[1];
  double best_score = std::numeric_limits<double>::infinity();
  const double n = static_cast<double>(m);
  for (double lambda : lambda_grid()) {
    if (lambda == 0.0) continue;  // ridge is required for the kernel path
    auto coef = solve_spd(sub, lambda, y_sub);
    if (!coef) continue;
    std::vector<double> resid(y_sub);
    const std::vector<double> pred = mat_vec(sub, *coef);
    double df = 0.0;
    for (double d : eig.values) {
      if (d > 0.0) df += d / (d + lambda);
    }
    if (df >= n) continue;
    for (std::size_t i = 0; i < m; ++i) resid[i] -= pred[i];
    const double rss = simd::sumsq(resid.data(), m);
    const double denom = 1.0 - df / n;
    const double score = (rss / n) / (denom * denom);
    if (score < best_score) {
      best_score = score;
      best_lambda = lambda;
    }
  }
  return best_lambda;
}

}  // namespace detail

namespace {

Matrix expand_features(const Matrix& predictors, const Kernel& kernel) {
  if (kernel.type == KernelType::kPolynomial && kernel.degree > 1) {
    return polynomial_features(predictors, kernel.degree);
  }
  return predictors;
}

}  // namespace

PredictionError fit_prediction_error(const EmbeddingDataset& data, const ModelSpec& spec) {
  PredictionError out;

  if (spec.kernel.type == KernelType::kGaussian) {
    detail::GaussianKernelModel model(data.predictors, data.response, spec.kernel.width);
    double lambda = 0.0;
    switch (spec.regularization) {
      case Regularization::kNone: lambda = 0.0; break;
      case Regularization::kRidge: lambda = spec.ridge_lambda; break;
      case Regularization::kRidgeGcv: lambda = model.gcv_lambda(); break;
    }
    if (spec.cross_validated) {
      throw ConfigError("UnsupportedMode",
                        "cross-validated epsilon is not implemented for the gaussian kernel");
    }
    const auto fit = model.fit(lambda);
    out.epsilon = fit.epsilon;
    out.n_params = fit.n_params;
    out.lambda_used = fit.lambda;
    return out;
  }

  const Matrix features = expand_features(data.predictors, spec.kernel);
  detail::FeatureModel model(features, data.response);
  std::vector<std::size_t> cols(features.cols());
  std::iota(cols.begin(), cols.end(), 0);

  double lambda = 0.0;
  switch (spec.regularization) {
    case Regularization::kNone: lambda = 0.0; break;
    case Regularization::kRidge: lambda = spec.ridge_lambda; break;
    case Regularization::kRidgeGcv: lambda = model.gcv_lambda(cols); break;
  }

  const auto fit = model.fit_subset(cols, lambda);
  out.epsilon = spec.cross_validated
                    ? model.cross_validated_epsilon(cols, lambda)
                    : fit.epsilon;
  out.n_params = fit.n_params;
  out.lambda_used = fit.lambda;
  return out;
}

double select_regularization(const EmbeddingDataset& data, const ModelSpec& spec) {
  if (spec.regularization != Regularization::kRidgeGcv) {
    throw ConfigError("BadRegularizationMode",
                      "select_regularization requires ridge-gcv mode");
  }
  if (spec.kernel.type == KernelType::kGaussian) {
    detail::GaussianKernelModel model(data.predictors, data.response, spec.kernel.width);
    return model.gcv_lambda();
  }
  const Matrix features = expand_features(data.predictors, spec.kernel);
  detail::FeatureModel model(features, data.response);
  std::vector<std::size_t> cols(features.cols());
  std::iota(cols.begin(), cols.end(), 0);
  return model.gcv_lambda(cols);
}

}  // namespace synflow
