// Copyright 2026 The synflow Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>

#include "doctest.h"
#include "helpers.hpp"
#include "synflow/errors.hpp"
#include "synflow/stats.hpp"
#include "synflow/synergy.hpp"
#include "synflow/synthetic.hpp"
#include "synflow/validate.hpp"

using namespace synflow;
using testing::from_columns;
using testing::gaussian_series;
using testing::matrix_from;

TEST_CASE("population oracle matches the closed form for decoupled drivers") {
  // For b = 0 the moment algebra reduces to a hand-derivable Schur form:
  // psi = 2 A^4 a^2 (2 A^2 a^2 - 1) / (1 - A^2 a^2).
  for (const auto& [a, amp] : {std::pair{0.3, 0.1}, {0.5, 0.3}, {0.4, 0.2}}) {
    const double u = amp * amp * a * a;
    const double expected = 2.0 * amp * amp * u * (2.0 * u - 1.0) / (1.0 - u);
    CHECK(population_psi_linear_target(a, 0.0, amp) ==
          doctest::Approx(expected).epsilon(1e-10));
  }
}

TEST_CASE("population psi for the linear target at the reference parameters") {
  // Hand-derived from the model covariance: eps(z|z) - 2 eps(z|yz) + sigma'^2.
  const double pop = population_psi_linear_target(0.4, 0.3, 0.3);
  CHECK(pop == doctest::Approx(0.05530).epsilon(2e-3));
  CHECK(pop > 0.0);  // C > 0: redundant
}

TEST_CASE("simulated psi agrees with the population oracle (linear target)") {
  const auto s = sample_psi_linear(/*seed=*/11, /*runs=*/40, /*samples=*/10000);
  const double pop = population_psi_linear_target(0.4, 0.3, 0.3);
  CHECK(std::abs(s.mean - pop) <= 3.0 * s.se);
  CHECK(s.mean > 0.0);
}

TEST_CASE("simulated psi agrees with the population oracle (product target)") {
  const auto s = sample_psi_product(/*seed=*/12, /*runs=*/40, /*samples=*/10000);
  const double pop = population_psi_product_target(0.4, 0.3, 0.3);
  CHECK(std::abs(s.mean - pop) <= 3.0 * s.se);
  // |C| = 0.32 < 0.5: synergy, negative
  CHECK(s.mean < 0.0);
  CHECK(pop < 0.0);
  CHECK(s.negative_fraction >= 0.95);
}

TEST_CASE("independent additive drivers give psi near zero") {
  const auto s = sample_psi_additive_null(/*seed=*/13, /*runs=*/60, /*samples=*/5000);
  CHECK(std::abs(s.mean) <= 3.0 * s.se);
}

TEST_CASE("psi two-form identity is exact") {
  CHECK(two_form_max_deviation(14, 20, 1500) <= 1e-10);
}

TEST_CASE("first-order cumulant is the self-conditioned delta") {
  const auto ts = standardize(gen_redundant_triplet(1200, 15));
  const ModelSpec spec;
  const double s1 = cumulant(ts, 3, {0}, spec);
  const auto du = unnormalized_gc(ts, 3, {0}, {0}, spec);
  CHECK(s1 == doctest::Approx(du.value).epsilon(1e-12));
}

TEST_CASE("second-order cumulant is minus the pair-restricted psi") {
  const auto ts = standardize(gen_redundant_triplet(1200, 16));
  const ModelSpec spec;
  const double s2 = cumulant(ts, 3, {0, 1}, spec);
  // psi restricted to the pair: du({ij}) - du(i) - du(j), conditioning {i,j}
  const double du_ij = unnormalized_gc(ts, 3, {0, 1}, {0, 1}, spec).value;
  const double du_i = unnormalized_gc(ts, 3, {0}, {0, 1}, spec).value;
  const double du_j = unnormalized_gc(ts, 3, {1}, {0, 1}, spec).value;
  const double psi_restricted = du_ij - du_i - du_j;
  CHECK(s2 == doctest::Approx(-psi_restricted).epsilon(1e-10));
}

TEST_CASE("third-order cumulant matches its seven-term expansion") {
  const auto ts = standardize(gen_suppressor(1.0, 900, 17));
  ModelSpec spec;
  spec.kernel = Kernel::polynomial(2);
  const double s3 = cumulant(ts, 3, {0, 1, 2}, spec);

  // Independent term-by-term evaluation, all conditioned on {0,1,2}:
  //   du(ijk) - du(ij) - du(jk) - du(ik) + du(i) + du(j) + du(k)
  const std::vector<int> cond{0, 1, 2};
  auto du = [&](const std::vector<int>& block) {
    return unnormalized_gc(ts, 3, block, cond, spec).value;
  };
  const double expected = du({0, 1, 2}) - du({0, 1}) - du({1, 2}) - du({0, 2}) +
                          du({0}) + du({1}) + du({2});
  CHECK(s3 == doctest::Approx(expected).epsilon(1e-10));
}

TEST_CASE("cumulant subset cap") {
  const auto ts = standardize(from_columns(
      {gaussian_series(18, 0, 400), gaussian_series(18, 1, 400),
       gaussian_series(18, 2, 400), gaussian_series(18, 3, 400),
       gaussian_series(18, 4, 400), gaussian_series(18, 5, 400),
       gaussian_series(18, 6, 400)},
      {"a", "b", "c", "d", "e", "f", "g"}));
  CHECK_THROWS_AS(cumulant(ts, 0, {1, 2, 3, 4, 5, 6}, ModelSpec{}), SubsetTooLarge);
}

TEST_CASE("moebius consistency on the four-variable system") {
  CHECK(mobius_max_deviation(19, 1000) <= 1e-10);
}

TEST_CASE("pca on a perfectly correlated pair") {
  const auto base = gaussian_series(20, 0, 5000);
  auto copy = base;
  const auto third = gaussian_series(20, 1, 5000);
  const auto ts = standardize(from_columns({base, copy, third}, {"a", "b", "c"}));
  const auto pca = pca_targets(ts, ComponentSelection::by_fraction(0.95));
  const double total = pca.eigenvalues[0] + pca.eigenvalues[1] + pca.eigenvalues[2];
  CHECK(pca.eigenvalues[0] / total > 0.6);  // the correlated pair dominates
  // a strictly rank-deficient pair: the second eigenvalue of {a,b} alone is 0
  const auto pair_ts = standardize(from_columns({base, copy}, {"a", "b"}));
  const auto pair_pca = pca_targets(pair_ts, ComponentSelection::by_fraction(0.95));
  CHECK(pair_pca.eigenvalues[0] / (pair_pca.eigenvalues[0] + std::abs(pair_pca.eigenvalues[1])) ==
        doctest::Approx(1.0).epsilon(1e-10));
  CHECK(pair_pca.k == 1);
}

TEST_CASE("pca on isotropic noise needs roughly f * n components") {
  std::vector<std::vector<double>> cols;
  std::vector<std::string> labels;
  for (int j = 0; j < 10; ++j) {
    cols.push_back(gaussian_series(21, static_cast<std::uint64_t>(j), 20000));
    labels.push_back("v" + std::to_string(j));
  }
  const auto ts = standardize(from_columns(cols, labels));
  const auto pca = pca_targets(ts, ComponentSelection::by_fraction(0.8));
  for (double ev : pca.eigenvalues) CHECK(ev == doctest::Approx(1.0).epsilon(0.15));
  CHECK(pca.k >= 7);
  CHECK(pca.k <= 9);
}

TEST_CASE("pca sign convention pins component orientation") {
  const auto a = gaussian_series(22, 0, 3000);
  const auto b = gaussian_series(22, 1, 3000);
  std::vector<double> mix(3000);
  for (std::size_t t = 0; t < 3000; ++t) mix[t] = 0.9 * a[t] + 0.1 * b[t];
  const auto ts1 = standardize(from_columns({a, mix}, {"a", "m"}));
  std::vector<double> neg_a = a;
  for (double& v : neg_a) v = -v;
  const auto ts2 = standardize(from_columns({neg_a, mix}, {"a", "m"}));
  const auto p1 = pca_targets(ts1, ComponentSelection::by_count(2));
  const auto p2 = pca_targets(ts2, ComponentSelection::by_count(2));
  // flipping one input's sign must not flip the convention-fixed components
  for (int c = 0; c < 2; ++c) {
    double dot = 0.0, norm = 0.0;
    for (std::size_t t = 0; t < 3000; ++t) {
      dot += p1.components(t, static_cast<std::size_t>(c)) *
             p2.components(t, static_cast<std::size_t>(c));
      norm += p1.components(t, static_cast<std::size_t>(c)) *
              p1.components(t, static_cast<std::size_t>(c));
    }
    CHECK(dot / norm == doctest::Approx(1.0).epsilon(1e-6));
  }
}

TEST_CASE("split_psi decomposition") {
  Matrix zero(3, 3);
  auto z = split_psi(zero);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(z.strengths_r[i] == 0.0);
    CHECK(z.strengths_s[i] == 0.0);
  }

  Matrix one(3, 3);
  one(0, 1) = one(1, 0) = 0.5;
  auto s = split_psi(one);
  CHECK(s.strengths_r == std::vector<double>{0.5, 0.5, 0.0});

  Matrix mixed = matrix_from({{0.0, 0.3, -0.2}, {0.3, 0.0, 0.1}, {-0.2, 0.1, 0.0}});
  auto m = split_psi(mixed);
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) {
      CHECK(m.psi_r(i, j) - m.psi_s(i, j) == doctest::Approx(mixed(i, j)).epsilon(1e-15));
      CHECK(m.psi_r(i, j) * m.psi_s(i, j) == 0.0);
      CHECK(m.psi_r(i, j) >= 0.0);
      CHECK(m.psi_s(i, j) >= 0.0);
    }
  }

  Matrix bad = matrix_from({{0.0, 1.0}, {0.5, 0.0}});
  CHECK_THROWS_AS(split_psi(bad), AsymmetricInput);
}

TEST_CASE("psi matrix is symanetric with zero diagonal and consistent split") {
  const auto pair = gen_coupled_ar(0.4, 0.3, 1500, 23);
  const auto ts = standardize(append_linear_target(pair, 0.3, 23));
  const auto result = psi_matrix(ts, ComponentSelection::by_fraction(0.95), ModelSpec{});
  const std::size_t n = result.psi.rows();
  REQUIRE(n == 3);
  CHECK(result.n_lambda >= 1);
  for (std::size_t i = 0; i < n; ++i) {
    CHECK(result.psi(i, i) == 0.0);
    double sr = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      CHECK(result.psi(i, j) == result.psi(j, i));
      CHECK(result.psi_r(i, j) - result.psi_s(i, j) ==
            doctest::Approx(result.psi(i, j)).epsilon(1e-15));
      sr += result.psi_r(i, j);
    }
    CHECK(result.strengths_r[i] == doctest::Approx(sr).epsilon(1e-12));
  }
}

TEST_CASE("independent system: largest psi entry is not surrogate-significant") {
  std::vector<std::vector<double>> cols;
  std::vector<std::string> labels;
  for (int j = 0; j < 4; ++j) {
    cols.push_back(testing::ar1_series(0.4, 24, static_cast<std::uint64_t>(j), 600));
    labels.push_back("v" + std::to_string(j));
  }
  const auto ts = standardize(from_columns(cols, labels));
  const auto pca = pca_targets(ts, ComponentSelection::by_count(2));
  const auto result = psi_matrix(ts, ComponentSelection::by_count(2), ModelSpec{});
  std::size_t bi = 0, bj = 1;
  double best = -1.0;
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = i + 1; j < 4; ++j) {
      if (std::abs(result.psi(i, j)) > best) {
        best = std::abs(result.psi(i, j));
        bi = i;
        bj = j;
      }
    }
  }
  const double p = psi_entry_significance(ts, pca, ModelSpec{}, static_cast<int>(bi),
                                          static_cast<int>(bj), result.psi(bi, bj),
                                          /*surrogates=*/39, /*seed=*/7);
  CHECK(p >= 0.05);
}
