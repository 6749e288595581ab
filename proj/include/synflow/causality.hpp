// Copyright 2026 The synflow Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <mutex>
#include <optional>
#include <unordered_map>
#include <vector>

#include "synflow/embedding.hpp"
#include "synflow/regression.hpp"
#include "synflow/timeseries.hpp"

namespace synflow {

enum class GcKind { kPairwise, kConditioned, kSet, kUnnormalizedSet };

/// One Granger-causality measurement with its conditioning context.
/// For the log kinds, value = log(eps_without / eps_with); for the
/// unnormalized kind, value = eps_without - eps_with exactly.
struct CausalityValue {
  GcKind kind = GcKind::kConditioned;
  double value = 0.0;
  int target = 0;
  std::vector<int> drivers;       // B
  std::vector<int> conditioning;  // X as driver indices; target past is implicit
  ModelSpec spec;
  double eps_without = std::numeric_limits<double>::quiet_NaN();
  double eps_with = std::numeric_limits<double>::quiet_NaN();
};

/// Prediction-error engine for one target under one ModelSpec. Builds the
/// full-scope embedding (and, for explicit-feature kernels, the full Gram)
/// once; every conditional error is then a column-subset fit. Results are
/// cached per (variable subset, lambda); the cache is mutex guarded and
/// values are deterministic, so duplicated computation is benign.
///
/// The target's own past is part of every model and is not represented in
/// masks. Input data is expected to be standardized on load.
class GcEngine {
 public:
  using Mask = std::uint64_t;

  /// Variable target; scope = all other variables.
  GcEngine(const TimeSeriesSet& ts, int target, const ModelSpec& spec);
  /// Variable target with an explicit conditioning scope.
  GcEngine(const TimeSeriesSet& ts, int target, std::vector<int> scope,
           const ModelSpec& spec);
  /// External target series (e.g. a principal component); scope = all
  /// variables, the series' own lags form the target-past block.
  GcEngine(const TimeSeriesSet& ts, const std::vector<double>& target_series,
           const ModelSpec& spec);

  GcEngine(const GcEngine&) = delete;
  GcEngine& operator=(const GcEngine&) = delete;

  const std::vector<int>& drivers() const { return drivers_; }
  Mask full_mask() const;
  Mask mask_of(const std::vector<int>& vars) const;
  std::vector<int> vars_of(Mask mask) const;

  std::size_t rows() const { return embedding_.rows(); }
  const ModelSpec& spec() const { return spec_; }

  /// epsilon(target | target past + blocks in `included`) at the given ridge
  /// parameter.
  double epsilon(Mask included, double lambda) const;

  /// Ridge parameter implied by the regularization policy, selected on the
  /// model `cond` and meant to be shared by all its nested sub-models.
  double lambda_for(Mask cond) const;

  /// Unnormalized set causality of `block` conditioned on `cond`
  /// (block must be a subset of cond); both epsilons share lambda_for(cond).
  double delta_u(Mask block, Mask cond) const;

  /// Feature-column count of the sub-model (excluding the intercept).
  std::size_t model_columns(Mask included) const;

  /// Detailed fit, primarily for significance testing.
  detail::FeatureModel::Fit fit(Mask included, double lambda) const;

 private:
  void init();
  std::vector<std::size_t> design_columns(Mask included) const;
  std::vector<std::size_t> feature_columns(Mask included) const;

  ModelSpec spec_;
  std::vector<int> drivers_;
  EmbeddingDataset embedding_;
  std::optional<detail::FeatureModel> model_;  // explicit-feature kernels
  std::vector<Mask> feature_masks_;            // per feature: driver slots it touches
  std::vector<std::size_t> base_owner_;        // per base column: driver slot or npos

  mutable std::mutex mutex_;
  mutable std::unordered_map<std::uint64_t, detail::FeatureModel::Fit> fit_cache_;
  mutable std::map<Mask, double> lambda_cache_;
};

/// Pairwise GC (Eq. 2): log eps(target | own past) / eps(target | own past, driver).
CausalityValue pairwise_gc(const TimeSeriesSet& ts, int target, int driver,
                           const ModelSpec& spec);

/// Fully conditioned GC (Eq. 1): singleton case of set_gc over all variables.
CausalityValue conditioned_gc(const TimeSeriesSet& ts, int target, int driver,
                              const ModelSpec& spec);

/// Set GC (Eq. 3): log eps(target | X \ B) / eps(target | X), X = all variables.
CausalityValue set_gc(const TimeSeriesSet& ts, int target, const std::vector<int>& block,
                      const ModelSpec& spec);

/// Unnormalized set GC (Eq. 4) with an explicit conditioning set X ⊇ B.
CausalityValue unnormalized_gc(const TimeSeriesSet& ts, int target,
                               const std::vector<int>& block,
                               const std::vector<int>& conditioning,
                               const ModelSpec& spec);

enum class SignificanceMode { kAnalytic, kSurrogate };

struct SignificanceOptions {
  SignificanceMode mode = SignificanceMode::kAnalytic;
  int surrogates = 200;        // surrogate mode; must be >= 20
  std::uint64_t seed = 0;      // surrogate shifts
};

/// p-value for a causality measurement. Analytic mode runs the nested-model
/// F test (numerator dof = removed feature columns, denominator dof =
/// rows - full-model columns - 1; exact for Gaussian linear models).
/// Surrogate mode re-evaluates the measure under circular time shifts of the
/// driver block (coherent shift >= m + 10, preserving autocorrelation).
/// A measurement that removed no columns has p = 1 by convention.
double gc_significance(const TimeSeriesSet& ts, const CausalityValue& value,
                       const SignificanceOptions& options = {});

}  // namespace synflow
