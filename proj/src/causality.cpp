// Copyright 2026 The synflow Authors
// SPDX-License-Identifier: Apache-2.0

#include "synflow/causality.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>

#include "synflow/errors.hpp"
#include "synflow/parallel.hpp"
#include "synflow/rng.hpp"
#include "synflow/stats.hpp"

namespace synflow {

namespace {

std::vector<int> all_other_variables(const TimeSeriesSet& ts, int target) {
  std::vector<int> out;
  out.reserve(ts.variables());
  for (std::size_t j = 0; j < ts.variables(); ++j) {
    if (static_cast<int>(j) != target) out.push_back(static_cast<int>(j));
  }
  return out;
}

std::uint64_t cache_key(GcEngine::Mask mask, double lambda) {
  const std::uint64_t lam = std::bit_cast<std::uint64_t>(lambda);
  std::uint64_t h = mask * 0x9E3779B97F4A7C15ull;
  h ^= lam + 0x9E3779B97F4A7C15ull + (h << 6) + (h >> 2);
  return h;
}

}  // namespace

GcEngine::GcEngine(const TimeSeriesSet& ts, int target, const ModelSpec& spec)
    : GcEngine(ts, target, all_other_variables(ts, target), spec) {}

GcEngine::GcEngine(const TimeSeriesSet& ts, int target, std::vector<int> scope,
                   const ModelSpec& spec)
    : spec_(spec) {
  std::sort(scope.begin(), scope.end());
  scope.erase(std::remove(scope.begin(), scope.end(), target), scope.end());
  scope.erase(std::unique(scope.begin(), scope.end()), scope.end());
  drivers_ = std::move(scope);
  if (drivers_.size() > 64) {
    throw ConfigError("TooManyVariables", "engine scope is limited to 64 drivers");
  }
  embedding_ = build_embedding(ts, spec_.order, target, drivers_);
  init();
}

GcEngine::GcEngine(const TimeSeriesSet& ts, const std::vector<double>& target_series,
                   const ModelSpec& spec)
    : spec_(spec) {
  drivers_ = all_other_variables(ts, -1);
  if (drivers_.size() > 64) {
    throw ConfigError("TooManyVariables", "engine scope is limited to 64 drivers");
  }
  embedding_ = build_embedding_series(ts, spec_.order, target_series, drivers_);
  init();
}

void GcEngine::init() {
  base_owner_.assign(embedding_.cols(), static_cast<std::size_t>(-1));
  for (std::size_t slot = 0; slot < drivers_.size(); ++slot) {
    const BlockRange range = embedding_.block_index.at(drivers_[slot]);
    for (std::size_t c = range.begin; c < range.end; ++c) base_owner_[c] = slot;
  }

  if (spec_.kernel.type == KernelType::kGaussian) return;

  const int degree =
      spec_.kernel.type == KernelType::kPolynomial ? spec_.kernel.degree : 1;
  Matrix features = degree > 1
                        ? polynomial_features(embedding_.predictors, degree)
                        : embedding_.predictors;

  feature_masks_.clear();
  if (degree > 1) {
    const auto exps = monomial_exponents(embedding_.cols(), degree);
    feature_masks_.reserve(exps.size());
    for (const auto& e : exps) {
      Mask mask = 0;
      for (std::size_t c = 0; c < e.size(); ++c) {
        if (e[c] > 0 && base_owner_[c] != static_cast<std::size_t>(-1)) {
          mask |= Mask{1} << base_owner_[c];
        }
      }
      feature_masks_.push_back(mask);
    }
  } else {
    feature_masks_.reserve(embedding_.cols());
    for (std::size_t c = 0; c < embedding_.cols(); ++c) {
      feature_masks_.push_back(base_owner_[c] == static_cast<std::size_t>(-1)
                                   ? Mask{0}
                                   : Mask{1} << base_owner_[c]);
    }
  }

  model_.emplace(features, embedding_.response);
}

GcEngine::Mask GcEngine::full_mask() const {
  return drivers_.empty() ? 0 : (~Mask{0} >> (64 - drivers_.size()));
}

GcEngine::Mask GcEngine::mask_of(const std::vector<int>& vars) const {
  Mask mask = 0;
  for (int v : vars) {
    const auto it = std::lower_bound(drivers_.begin(), drivers_.end(), v);
    if (it == drivers_.end() || *it != v) {
      throw ConfigError("BadDriver",
                        "variable " + std::to_string(v) + " is not in the engine scope");
    }
    mask |= Mask{1} << static_cast<std::size_t>(it - drivers_.begin());
  }
  return mask;
}

std::vector<int> GcEngine::vars_of(Mask mask) const {
  std::vector<int> out;
  for (std::size_t i = 0; i < drivers_.size(); ++i) {
    if (mask & (Mask{1} << i)) out.push_back(drivers_[i]);
  }
  return out;
}

std::vector<std::size_t> GcEngine::design_columns(Mask included) const {
  std::vector<std::size_t> cols;
  const BlockRange target_range = embedding_.block_index.at(embedding_.target);
  for (std::size_t c = target_range.begin; c < target_range.end; ++c) cols.push_back(c);
  for (std::size_t slot = 0; slot < drivers_.size(); ++slot) {
    if (included & (Mask{1} << slot)) {
      const BlockRange r = embedding_.block_index.at(drivers_[slot]);
      for (std::size_t c = r.begin; c < r.end; ++c) cols.push_back(c);
    }
  }
  return cols;
}

std::vector<std::size_t> GcEngine::feature_columns(Mask included) const {
  std::vector<std::size_t> cols;
  for (std::size_t f = 0; f < feature_masks_.size(); ++f) {
    if ((feature_masks_[f] & ~included) == 0) cols.push_back(f);
  }
  return cols;
}

std::size_t GcEngine::model_columns(Mask included) const {
  if (spec_.kernel.type == KernelType::kGaussian) {
    return design_columns(included).size();
  }
  return feature_columns(included).size();
}

detail::FeatureModel::Fit GcEngine::fit(Mask included, double lambda) const {
  {
    std::lock_guard<std::mutex> lock(mutex_);
    const auto it = fit_cache_.find(cache_key(included, lambda));
    if (it != fit_cache_.end()) return it->second;
  }

  detail::FeatureModel::Fit result;
  if (spec_.kernel.type == KernelType::kGaussian) {
    const auto cols = design_columns(included);
    Matrix design(embedding_.rows(), cols.size());
    for (std::size_t t = 0; t < embedding_.rows(); ++t) {
      const double* src = embedding_.predictors.row(t);
      double* dst = design.row(t);
      for (std::size_t j = 0; j < cols.size(); ++j) dst[j] = src[cols[j]];
    }
    detail::GaussianKernelModel model(design, embedding_.response, spec_.kernel.width);
    result = model.fit(lambda);
  } else {
    result = model_->fit_subset(feature_columns(included), lambda);
  }

  std::lock_guard<std::mutex> lock(mutex_);
  fit_cache_.emplace(cache_key(included, lambda), result);
  return result;
}

double GcEngine::epsilon(Mask included, double lambda) const {
  return fit(included, lambda).epsilon;
}

double GcEngine::lambda_for(Mask cond) const {
  switch (spec_.regularization) {
    case Regularization::kNone:
      return 0.0;
    case Regularization::kRidge:
      return spec_.ridge_lambda;
    case Regularization::kRidgeGcv:
      break;
  }
  {
    std::lock_guard<std::mutex> lock(mutex_);
    const auto it = lambda_cache_.find(cond);
    if (it != lambda_cache_.end()) return it->second;
  }
  double lambda = 0.0;
  if (spec_.kernel.type == KernelType::kGaussian) {
    const auto cols = design_columns(cond);
    Matrix design(embedding_.rows(), cols.size());
    for (std::size_t t = 0; t < embedding_.rows(); ++t) {
      const double* src = embedding_.predictors.row(t);
      double* dst = design.row(t);
      for (std::size_t j = 0; j < cols.size(); ++j) dst[j] = src[cols[j]];
    }
    detail::GaussianKernelModel model(design, embedding_.response, spec_.kernel.width);
    lambda = model.gcv_lambda();
  } else {
    lambda = model_->gcv_lambda(feature_columns(cond));
  }
  std::lock_guard<std::mutex> lock(mutex_);
  lambda_cache_.emplace(cond, lambda);
  return lambda;
}

double GcEngine::delta_u(Mask block, Mask cond) const {
  if ((block & ~cond) != 0) {
    throw ConfigError("BadBlock", "block must be a subset of the conditioning set");
  }
  const double lambda = lambda_for(cond);
  return epsilon(cond & ~block, lambda) - epsilon(cond, lambda);
}

namespace {

CausalityValue log_ratio_value(const GcEngine& engine, GcKind kind, int target,
                               std::vector<int> block, GcEngine::Mask cond_mask,
                               const ModelSpec& spec) {
  const GcEngine::Mask block_mask = engine.mask_of(block);
  const double lambda = engine.lambda_for(cond_mask);
  const double eps_without = engine.epsilon(cond_mask & ~block_mask, lambda);
  const double eps_with = engine.epsilon(cond_mask, lambda);

  CausalityValue out;
  out.kind = kind;
  out.target = target;
  out.drivers = std::move(block);
  out.conditioning = engine.vars_of(cond_mask);
  out.spec = spec;
  out.eps_without = eps_without;
  out.eps_with = eps_with;
  out.value = std::log(eps_without / eps_with);
  return out;
}

}  // namespace

CausalityValue pairwise_gc(const TimeSeriesSet& ts, int target, int driver,
                           const ModelSpec& spec) {
  if (target == driver) {
    throw ConfigError("BadDriver", "pairwise GC needs target != driver");
  }
  GcEngine engine(ts, target, std::vector<int>{driver}, spec);
  return log_ratio_value(engine, GcKind::kPairwise, target, {driver},
                         engine.full_mask(), spec);
}

CausalityValue set_gc(const TimeSeriesSet& ts, int target, const std::vector<int>& block,
                      const ModelSpec& spec) {
  if (block.empty()) throw ConfigError("EmptyBlock", "driver set must be nonempty");
  for (int b : block) {
    if (b == target) throw ConfigError("BadDriver", "target cannot drive itself");
  }
  GcEngine engine(ts, target, spec);
  return log_ratio_value(engine, GcKind::kSet, target, block, engine.full_mask(), spec);
}

CausalityValue conditioned_gc(const TimeSeriesSet& ts, int target, int driver,
                              const ModelSpec& spec) {
  CausalityValue out = set_gc(ts, target, {driver}, spec);
  out.kind = GcKind::kConditioned;
  return out;
}

CausalityValue unnormalized_gc(const TimeSeriesSet& ts, int target,
                               const std::vector<int>& block,
                               const std::vector<int>& conditioning,
                               const ModelSpec& spec) {
  if (block.empty()) throw ConfigError("EmptyBlock", "driver set must be nonempty");
  GcEngine engine(ts, target, conditioning, spec);
  const GcEngine::Mask cond_mask = engine.full_mask();
  const GcEngine::Mask block_mask = engine.mask_of(block);
  const double lambda = engine.lambda_for(cond_mask);

  CausalityValue out;
  out.kind = GcKind::kUnnormalizedSet;
  out.target = target;
  out.drivers = block;
  out.conditioning = engine.vars_of(cond_mask);
  out.spec = spec;
  out.eps_without = engine.epsilon(cond_mask & ~block_mask, lambda);
  out.eps_with = engine.epsilon(cond_mask, lambda);
  out.value = out.eps_without - out.eps_with;
  return out;
}

namespace {

TimeSeriesSet shift_columns(const TimeSeriesSet& ts, const std::vector<int>& vars,
                            std::size_t shift) {
  Matrix values = ts.values();
  const std::size_t t_len = ts.samples();
  for (int v : vars) {
    const std::size_t col = static_cast<std::size_t>(v);
    for (std::size_t t = 0; t < t_len; ++t) {
      values(t, col) = ts.values()((t + shift) % t_len, col);
    }
  }
  return TimeSeriesSet(std::move(values), ts.labels());
}

double recompute_measure(const TimeSeriesSet& ts, const CausalityValue& value) {
  switch (value.kind) {
    case GcKind::kPairwise:
      return pairwise_gc(ts, value.target, value.drivers.at(0), value.spec).value;
    case GcKind::kConditioned:
      return conditioned_gc(ts, value.target, value.drivers.at(0), value.spec).value;
    case GcKind::kSet:
      return set_gc(ts, value.target, value.drivers, value.spec).value;
    case GcKind::kUnnormalizedSet:
      return unnormalized_gc(ts, value.target, value.drivers, value.conditioning,
                             value.spec)
          .value;
  }
  return 0.0;
}

double analytic_significance(const TimeSeriesSet& ts, const CausalityValue& value) {
  if (value.spec.kernel.type == KernelType::kGaussian) {
    throw ConfigError("BadSignificanceMode",
                      "the analytic F test requires the linear or polynomial kernel");
  }
  // Rebuild the nested models exactly as the measurement did.
  const std::vector<int>& scope =
      value.kind == GcKind::kPairwise ? value.drivers : value.conditioning;
  GcEngine engine(ts, value.target, scope, value.spec);
  const GcEngine::Mask cond = engine.full_mask();
  const GcEngine::Mask block = engine.mask_of(value.drivers);
  const double lambda = engine.lambda_for(cond);

  const auto full = engine.fit(cond, lambda);
  const auto restricted = engine.fit(cond & ~block, lambda);
  const std::size_t cols_full = engine.model_columns(cond);
  const std::size_t cols_restricted = engine.model_columns(cond & ~block);
  const std::size_t q = cols_full - cols_restricted;
  if (q == 0) return 1.0;

  const double dof2 =
      static_cast<double>(engine.rows()) - static_cast<double>(cols_full) - 1.0;
  if (dof2 <= 0.0) {
    throw InsufficientSamples("no residual degrees of freedom for the F test");
  }
  if (full.rss <= 0.0) return 0.0;
  const double f =
      ((restricted.rss - full.rss) / static_cast<double>(q)) / (full.rss / dof2);
  if (f <= 0.0) return 1.0;
  return stats::f_survival(f, static_cast<double>(q), dof2);
}

double surrogate_significance(const TimeSeriesSet& ts, const CausalityValue& value,
                              const SignificanceOptions& options) {
  if (options.surrogates < 20) {
    throw TooFewSurrogates("surrogate count must be >= 20, got " +
                           std::to_string(options.surrogates));
  }
  const double observed = value.value;
  const std::size_t t_len = ts.samples();
  const std::size_t m = static_cast<std::size_t>(value.spec.order);
  const std::size_t min_shift = m + 10;
  if (t_len < 2 * min_shift + 2) {
    throw InsufficientSamples("series too short for circular-shift surrogates");
  }
  const std::size_t span = t_len - 2 * min_shift;

  CounterRng rng(options.seed);
  const std::size_t n = static_cast<std::size_t>(options.surrogates);
  std::vector<double> surrogate_values(n);
  parallel_for(n, [&](std::size_t i) {
    const std::size_t shift = min_shift + rng.below(/*stream=*/0x5u, i, span + 1);
    const TimeSeriesSet shifted = shift_columns(ts, value.drivers, shift);
    surrogate_values[i] = recompute_measure(shifted, value);
  });

  std::size_t at_least = 0;
  for (double v : surrogate_values) {
    if (v >= observed) ++at_least;
  }
  return static_cast<double>(1 + at_least) / static_cast<double>(1 + n);
}

}  // namespace

double gc_significance(const TimeSeriesSet& ts, const CausalityValue& value,
                       const SignificanceOptions& options) {
  if (value.drivers.empty()) return 1.0;
  if (options.mode == SignificanceMode::kAnalytic) {
    return analytic_significance(ts, value);
  }
  return surrogate_significance(ts, value, options);
}

}  // namespace synflow
