// Copyright 2026 The synflow Authors
// SPDX-License-Identifier: Apache-2.0

#include "synflow/synergy.hpp"

#include <algorithm>
#include <bit>
#include <cassert>
#include <cmath>
#include <numeric>

#include "synflow/errors.hpp"
#include "synflow/linalg.hpp"
#include "synflow/parallel.hpp"
#include "synflow/rng.hpp"

namespace synflow {

namespace {

using Mask = GcEngine::Mask;

double psi_from_masks(const GcEngine& engine, Mask mi, Mask mj, Mask cond) {
  const double lambda = engine.lambda_for(cond);
  const double e_full = engine.epsilon(cond, lambda);
  const double e_i = engine.epsilon(cond & ~mi, lambda);
  const double e_j = engine.epsilon(cond & ~mj, lambda);
  const double e_ij = engine.epsilon(cond & ~(mi | mj), lambda);
  // (e_ij - e_full) - (e_i - e_full) - (e_j - e_full)
  return (e_ij - e_full) - (e_i - e_full) - (e_j - e_full);
}

}  // namespace

double psi_pair(const GcEngine& engine, int i, int j) {
  if (i == j) throw ConfigError("BadPair", "psi needs two distinct drivers");
  const Mask mi = engine.mask_of({i});
  const Mask mj = engine.mask_of({j});
  const double psi = psi_from_masks(engine, mi, mj, engine.full_mask());
#ifndef NDEBUG
  assert(std::abs(psi - psi_pair_first_form(engine, i, j)) <= 1e-10);
#endif
  return psi;
}

double psi_pair_first_form(const GcEngine& engine, int i, int j) {
  const Mask mi = engine.mask_of({i});
  const Mask mj = engine.mask_of({j});
  const Mask full = engine.full_mask();
  // Shared lambda keeps the two forms an exact identity of four epsilons.
  const double lambda = engine.lambda_for(full);
  const double du_without_j =
      engine.epsilon((full & ~mj) & ~mi, lambda) - engine.epsilon(full & ~mj, lambda);
  const double du_full =
      engine.epsilon(full & ~mi, lambda) - engine.epsilon(full, lambda);
  return du_without_j - du_full;
}

PsiValue psi_pair(const TimeSeriesSet& ts, int target, int i, int j,
                  const ModelSpec& spec) {
  if (i == j || i == target || j == target) {
    throw ConfigError("BadPair", "psi needs distinct drivers i, j different from the target");
  }
  GcEngine engine(ts, target, spec);
  PsiValue out;
  out.i = i;
  out.j = j;
  out.target = target;
  out.psi = psi_pair(engine, i, j);
  return out;
}

namespace {

double cumulant_on_engine(const GcEngine& engine, Mask subset, double lambda) {
  const double e_b = engine.epsilon(subset, lambda);
  double s = 0.0;
  // Nonempty submasks of `subset`; sign +1 for odd |Gamma|, -1 for even.
  for (Mask gamma = subset; gamma != 0; gamma = (gamma - 1) & subset) {
    const int sign = (std::popcount(gamma) % 2 == 1) ? 1 : -1;
    const double du = engine.epsilon(subset & ~gamma, lambda) - e_b;
    s += sign * du;
  }
  return s;
}

}  // namespace

double cumulant(const TimeSeriesSet& ts, int target, const std::vector<int>& subset,
                const ModelSpec& spec) {
  if (subset.empty()) throw ConfigError("EmptySubset", "cumulant needs a nonempty subset");
  if (subset.size() > 5) {
    throw SubsetTooLarge("cumulant subsets are capped at 5 drivers, got " +
                         std::to_string(subset.size()));
  }
  GcEngine engine(ts, target, subset, spec);
  const Mask b = engine.full_mask();
  return cumulant_on_engine(engine, b, engine.lambda_for(b));
}

CumulantTable cumulant_table(const TimeSeriesSet& ts, int target,
                             const std::vector<int>& scope, const ModelSpec& spec) {
  if (scope.empty() || scope.size() > 5) {
    throw SubsetTooLarge("cumulant table scope must have 1..5 drivers");
  }
  GcEngine engine(ts, target, scope, spec);
  const Mask full = engine.full_mask();
  const double lambda = engine.lambda_for(full);

  CumulantTable table;
  table.target = target;
  for (Mask b = 1; b <= full; ++b) {
    if ((b & ~full) != 0) continue;
    table.entries[engine.vars_of(b)] = cumulant_on_engine(engine, b, lambda);
  }
  return table;
}

PcaResult pca_targets(const TimeSeriesSet& ts, const ComponentSelection& selection) {
  const std::size_t n = ts.variables();
  const Matrix cov = covariance(ts.values());
  EigenSym eig = jacobi_eigensym(cov);

  // Sign convention: the largest-magnitude loading is positive (ties resolve
  // to the smallest index), so component time courses are reproducible.
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t arg = 0;
    double best = -1.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double mag = std::abs(eig.vectors(i, k));
      if (mag > best + 1e-15) {
        best = mag;
        arg = i;
      }
    }
    if (eig.vectors(arg, k) < 0.0) {
      for (std::size_t i = 0; i < n; ++i) eig.vectors(i, k) = -eig.vectors(i, k);
    }
  }

  int k = 0;
  if (selection.count > 0) {
    if (static_cast<std::size_t>(selection.count) > n) {
      throw ConfigError("BadComponentCount", "n_lambda exceeds the variable count");
    }
    k = selection.count;
  } else {
    if (!(selection.fraction > 0.0 && selection.fraction <= 1.0)) {
      throw ConfigError("BadComponentFraction", "variance fraction must be in (0, 1]");
    }
    double total = 0.0;
    for (double v : eig.values) total += std::max(v, 0.0);
    double cum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      cum += std::max(eig.values[i], 0.0);
      ++k;
      if (cum >= selection.fraction * total - 1e-12) break;
    }
  }

  PcaResult out;
  out.k = k;
  out.eigenvalues = eig.values;
  out.loadings = Matrix(n, static_cast<std::size_t>(k));
  for (std::size_t i = 0; i < n; ++i) {
    for (int c = 0; c < k; ++c) out.loadings(i, static_cast<std::size_t>(c)) = eig.vectors(i, static_cast<std::size_t>(c));
  }
  out.components = Matrix(ts.samples(), static_cast<std::size_t>(k));
  for (std::size_t t = 0; t < ts.samples(); ++t) {
    const double* row = ts.values().row(t);
    for (int c = 0; c < k; ++c) {
      double acc = 0.0;
      for (std::size_t i = 0; i < n; ++i) acc += row[i] * out.loadings(i, static_cast<std::size_t>(c));
      out.components(t, static_cast<std::size_t>(c)) = acc;
    }
  }
  return out;
}

PsiSplit split_psi(const Matrix& psi) {
  const std::size_t n = psi.rows();
  if (psi.cols() != n) throw AsymmetricInput("psi matrix must be square");
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (std::abs(psi(i, j) - psi(j, i)) > 1e-9) {
        throw AsymmetricInput("psi(" + std::to_string(i) + "," + std::to_string(j) +
                              ") differs from its transpose");
      }
    }
  }
  PsiSplit out;
  out.psi_r = Matrix(n, n);
  out.psi_s = Matrix(n, n);
  out.strengths_r.assign(n, 0.0);
  out.strengths_s.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      const double v = psi(i, j);
      if (v > 0.0) {
        out.psi_r(i, j) = v;
        out.strengths_r[i] += v;
      } else if (v < 0.0) {
        out.psi_s(i, j) = -v;
        out.strengths_s[i] += -v;
      }
    }
  }
  return out;
}

SynergyMatrix psi_matrix(const TimeSeriesSet& ts, const ComponentSelection& selection,
                         const ModelSpec& spec) {
  const std::size_t n = ts.variables();
  if (n < 3) throw ConfigError("TooFewVariables", "psi_matrix needs n >= 3");

  const PcaResult pca = pca_targets(ts, selection);

  SynergyMatrix out;
  out.labels = ts.labels();
  out.n_lambda = pca.k;
  out.psi = Matrix(n, n);

  std::vector<std::pair<int, int>> pairs;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      pairs.emplace_back(static_cast<int>(i), static_cast<int>(j));
    }
  }

  for (int c = 0; c < pca.k; ++c) {
    const GcEngine engine(ts, pca.components.column(static_cast<std::size_t>(c)), spec);
    // Warm the shared entries so parallel workers mostly hit the cache.
    engine.epsilon(engine.full_mask(), engine.lambda_for(engine.full_mask()));
    std::vector<double> contrib(pairs.size());
    parallel_for(pairs.size(), [&](std::size_t p) {
      contrib[p] = psi_pair(engine, pairs[p].first, pairs[p].second);
    });
    for (std::size_t p = 0; p < pairs.size(); ++p) {
      const auto [i, j] = pairs[p];
      out.psi(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) += contrib[p];
      out.psi(static_cast<std::size_t>(j), static_cast<std::size_t>(i)) += contrib[p];
    }
  }

  PsiSplit split = split_psi(out.psi);
  out.psi_r = std::move(split.psi_r);
  out.psi_s = std::move(split.psi_s);
  out.strengths_r = std::move(split.strengths_r);
  out.strengths_s = std::move(split.strengths_s);
  return out;
}

double psi_entry_significance(const TimeSeriesSet& ts, const PcaResult& pca,
                              const ModelSpec& spec, int i, int j, double observed,
                              int surrogates, std::uint64_t seed) {
  if (surrogates < 20) {
    throw TooFewSurrogates("surrogate count must be >= 20, got " +
                           std::to_string(surrogates));
  }
  const std::size_t t_len = ts.samples();
  const std::size_t min_shift = static_cast<std::size_t>(spec.order) + 10;
  if (t_len < 2 * min_shift + 2) {
    throw InsufficientSamples("series too short for circular-shift surrogates");
  }
  const std::size_t span = t_len - 2 * min_shift;
  CounterRng rng(seed);

  const std::size_t n_s = static_cast<std::size_t>(surrogates);
  std::vector<double> null_values(n_s);
  parallel_for(n_s, [&](std::size_t s) {
    Matrix values = ts.values();
    const std::size_t si = min_shift + rng.below(0x11u, 2 * s, span + 1);
    const std::size_t sj = min_shift + rng.below(0x11u, 2 * s + 1, span + 1);
    for (std::size_t t = 0; t < t_len; ++t) {
      values(t, static_cast<std::size_t>(i)) =
          ts.values()((t + si) % t_len, static_cast<std::size_t>(i));
      values(t, static_cast<std::size_t>(j)) =
          ts.values()((t + sj) % t_len, static_cast<std::size_t>(j));
    }
    const TimeSeriesSet shifted(std::move(values), ts.labels());
    double psi_sum = 0.0;
    for (int c = 0; c < pca.k; ++c) {
      const GcEngine engine(shifted, pca.components.column(static_cast<std::size_t>(c)),
                            spec);
      psi_sum += psi_pair(engine, i, j);
    }
    null_values[s] = psi_sum;
  });

  std::size_t at_least = 0;
  for (double v : null_values) {
    if (std::abs(v) >= std::abs(observed)) ++at_least;
  }
  return static_cast<double>(1 + at_least) / static_cast<double>(1 + n_s);
}

}  // namespace synflow
