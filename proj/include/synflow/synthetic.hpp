// Copyright 2026 The synflow Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>

#include "synflow/timeseries.hpp"

namespace synflow {

/// Seeded generator configuration. Each noise stream derives from the root
/// seed and a fixed per-column stream id, so adding a column never perturbs
/// existing ones and identical specs produce identical series.
struct GeneratorSpec {
  enum class Family { kHiddenSource, kSuppressor, kCoupledAr, kRedundantTriplet };

  Family family = Family::kCoupledAr;
  int n = 2;         // hidden-source: driver count
  double s = 0.5;    // hidden-source: noise level
  double rho = 1.0;  // suppressor: coupling strength
  double a = 0.4;    // coupled AR
  double b = 0.3;
  double amp_linear = 0.0;   // coupled AR: append linear target z when > 0
  double amp_product = 0.0;  // coupled AR: append product target w when > 0
  std::size_t samples = 1000;
  std::uint64_t seed = 0;
  std::size_t burn_in = 1000;

  static Family family_from_name(const std::string& name);
  std::string family_name() const;
};

TimeSeriesSet generate(const GeneratorSpec& spec);

/// n driver columns x_i(t) = h(t-1) + s*eta_i(t) plus the delayed target
/// w(t) = h(t-2) + s*eta_0(t); the hidden source h itself is not included.
TimeSeriesSet gen_hidden_source(int n, double s, std::size_t samples,
                                std::uint64_t seed);

/// x1, x2, x3 iid unit Gaussians and
/// x4(t) = 0.1*(x1(t-1) + x2(t-1) + eta(t)) + rho*x2(t-1)*x3(t-1);
/// x2 suppresses x3 with respect to x4.
TimeSeriesSet gen_suppressor(double rho, std::size_t samples, std::uint64_t seed);

/// Symmetrically coupled AR(1) pair at its stationary regime:
///   x(t+1) = a x(t) + b y(t) + sigma xi1,  y(t+1) = b x(t) + a y(t) + sigma xi2
/// with sigma chosen for unit variance. Throws NonstationaryParameters unless
/// |a+b| < 1, |a-b| < 1 and sigma^2 > 0.
TimeSeriesSet gen_coupled_ar(double a, double b, std::size_t samples,
                             std::uint64_t seed, std::size_t burn_in = 1000);

/// Appends z(t) = A*(x(t-1) + y(t-1)) + sigma' xi(t) with
/// sigma' = sqrt(1 - 2A^2(1+C)), C estimated from the pair's sample
/// cross-covariance. Throws InfeasibleAmplitude when sigma'^2 <= 0.
TimeSeriesSet append_linear_target(const TimeSeriesSet& pair, double amplitude,
                                   std::uint64_t seed);

/// Appends w(t) = B*x(t-1)*y(t-1) + sigma'' xi(t) with
/// sigma'' = sqrt(1 - B^2 (1+2C)^2) (the reference noise scale; note the
/// resulting variance is B^2(1+C^2) + sigma''^2, not exactly 1).
TimeSeriesSet append_product_target(const TimeSeriesSet& pair, double amplitude,
                                    std::uint64_t seed);

/// The degenerate-partition construction behind the total-GC table:
/// x1, x2 = h(t-1) + 0.5 eta_i, x3 = eta_3, w = h(t-2) + 0.1 eta_0.
TimeSeriesSet gen_redundant_triplet(std::size_t samples, std::uint64_t seed);

/// Closed forms for the coupled-AR pair.
double coupled_ar_cross_correlation(double a, double b);  // C = 2ab/(1-a^2-b^2)
double coupled_ar_noise_variance(double a, double b);     // sigma^2 = 1-a^2-b^2-2abC

/// Reference closed forms for the pairwise synergy index of the coupled-AR
/// targets: A^2(C + C^2) for the linear target and B^2(4C^2 - 1) for the
/// product target. See the population oracles in validate.hpp for the values
/// these systems take under this library's estimator conventions.
double oracle_psi_linear(double amplitude, double c);
double oracle_psi_product(double amplitude, double c);

}  // namespace synflow
