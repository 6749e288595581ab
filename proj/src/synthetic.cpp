// Copyright 2026 The synflow Authors
// SPDX-License-Identifier: Apache-2.0

#include "synflow/synthetic.hpp"

#include <cmath>
#include <string>

#include "synflow/errors.hpp"
#include "synflow/rng.hpp"
#include "synflow/stats.hpp"

namespace synflow {

namespace {

// Stream ids; keep them stable so outputs are reproducible across versions.
constexpr std::uint64_t kStreamHidden = 0;
constexpr std::uint64_t kStreamTargetNoise = 1;
constexpr std::uint64_t kStreamDriverBase = 2;

std::vector<std::string> numbered_labels(const std::string& prefix, int n) {
  std::vector<std::string> labels;
  for (int i = 1; i <= n; ++i) labels.push_back(prefix + std::to_string(i));
  return labels;
}

double sample_cross_covariance(const TimeSeriesSet& pair) {
  const std::size_t t_len = pair.samples();
  const auto x = pair.column(0);
  const auto y = pair.column(1);
  const double mx = stats::mean(x);
  const double my = stats::mean(y);
  double acc = 0.0;
  for (std::size_t t = 0; t < t_len; ++t) acc += (x[t] - mx) * (y[t] - my);
  return acc / static_cast<double>(t_len - 1);
}

TimeSeriesSet append_target_column(const TimeSeriesSet& pair, std::string label,
                                   const std::vector<double>& column) {
  Matrix values(pair.samples(), pair.variables() + 1);
  for (std::size_t t = 0; t < pair.samples(); ++t) {
    for (std::size_t j = 0; j < pair.variables(); ++j) {
      values(t, j) = pair.values()(t, j);
    }
    values(t, pair.variables()) = column[t];
  }
  std::vector<std::string> labels = pair.labels();
  labels.push_back(std::move(label));
  return TimeSeriesSet(std::move(values), std::move(labels));
}

}  // namespace

GeneratorSpec::Family GeneratorSpec::family_from_name(const std::string& name) {
  if (name == "hidden-source") return Family::kHiddenSource;
  if (name == "suppressor") return Family::kSuppressor;
  if (name == "coupled-ar") return Family::kCoupledAr;
  if (name == "redundant-triplet") return Family::kRedundantTriplet;
  throw ConfigError("BadFamily", "unknown generator family '" + name + "'");
}

std::string GeneratorSpec::family_name() const {
  switch (family) {
    case Family::kHiddenSource: return "hidden-source";
    case Family::kSuppressor: return "suppressor";
    case Family::kCoupledAr: return "coupled-ar";
    case Family::kRedundantTriplet: return "redundant-triplet";
  }
  return "unknown";
}

TimeSeriesSet generate(const GeneratorSpec& spec) {
  switch (spec.family) {
    case GeneratorSpec::Family::kHiddenSource:
      return gen_hidden_source(spec.n, spec.s, spec.samples, spec.seed);
    case GeneratorSpec::Family::kSuppressor:
      return gen_suppressor(spec.rho, spec.samples, spec.seed);
    case GeneratorSpec::Family::kCoupledAr: {
      TimeSeriesSet ts = gen_coupled_ar(spec.a, spec.b, spec.samples, spec.seed,
                                        spec.burn_in);
      if (spec.amp_linear > 0.0) {
        ts = append_linear_target(ts, spec.amp_linear, spec.seed);
      }
      if (spec.amp_product > 0.0) {
        ts = append_product_target(ts, spec.amp_product, spec.seed);
      }
      return ts;
    }
    case GeneratorSpec::Family::kRedundantTriplet:
      return gen_redundant_triplet(spec.samples, spec.seed);
  }
  throw ConfigError("BadFamily", "unhandled generator family");
}

TimeSeriesSet gen_hidden_source(int n, double s, std::size_t samples,
                                std::uint64_t seed) {
  if (n < 1) throw ConfigError("BadCount", "hidden-source needs n >= 1 drivers");
  if (!(s > 0.0)) throw ConfigError("BadNoiseLevel", "noise level s must be > 0");
  const CounterRng rng(seed);

  // h(t) is needed for t = -2 .. samples-1; counter = t + 2.
  auto h = [&](std::size_t t_plus_2) { return rng.normal(kStreamHidden, t_plus_2); };

  Matrix values(samples, static_cast<std::size_t>(n) + 1);
  for (std::size_t t = 0; t < samples; ++t) {
    for (int i = 0; i < n; ++i) {
      values(t, static_cast<std::size_t>(i)) =
          h(t + 1) + s * rng.normal(kStreamDriverBase + static_cast<std::uint64_t>(i), t);
    }
    values(t, static_cast<std::size_t>(n)) = h(t) + s * rng.normal(kStreamTargetNoise, t);
  }
  std::vector<std::string> labels = numbered_labels("x", n);
  labels.push_back("w");
  return TimeSeriesSet(std::move(values), std::move(labels));
}

TimeSeriesSet gen_suppressor(double rho, std::size_t samples, std::uint64_t seed) {
  if (rho < 0.0) throw ConfigError("BadCoupling", "rho must be >= 0");
  const CounterRng rng(seed);

  // x1..x3 are needed from t = -1; counter = t + 1.
  auto x = [&](int var, std::size_t t_plus_1) {
    return rng.normal(kStreamDriverBase + static_cast<std::uint64_t>(var), t_plus_1);
  };

  Matrix values(samples, 4);
  for (std::size_t t = 0; t < samples; ++t) {
    values(t, 0) = x(0, t + 1);
    values(t, 1) = x(1, t + 1);
    values(t, 2) = x(2, t + 1);
    const double eta = rng.normal(kStreamTargetNoise, t);
    values(t, 3) = 0.1 * (x(0, t) + x(1, t) + eta) + rho * x(1, t) * x(2, t);
  }
  return TimeSeriesSet(std::move(values), numbered_labels("x", 4));
}

double coupled_ar_cross_correlation(double a, double b) {
  return 2.0 * a * b / (1.0 - a * a - b * b);
}

double coupled_ar_noise_variance(double a, double b) {
  const double c = coupled_ar_cross_correlation(a, b);
  return 1.0 - a * a - b * b - 2.0 * a * b * c;
}

TimeSeriesSet gen_coupled_ar(double a, double b, std::size_t samples,
                             std::uint64_t seed, std::size_t burn_in) {
  if (std::abs(a + b) >= 1.0 || std::abs(a - b) >= 1.0) {
    throw NonstationaryParameters("coupled AR requires |a+b| < 1 and |a-b| < 1");
  }
  const double sigma2 = coupled_ar_noise_variance(a, b);
  if (!(sigma2 > 0.0)) {
    throw NonstationaryParameters("coupled AR noise variance is not positive");
  }
  if (burn_in < 1000) {
    throw ConfigError("BadBurnIn", "burn-in must be >= 1000 samples");
  }
  const double sigma = std::sqrt(sigma2);
  const CounterRng rng(seed);

  Matrix values(samples, 2);
  double x = 0.0, y = 0.0;
  for (std::size_t t = 0; t < burn_in + samples; ++t) {
    const double nx = a * x + b * y + sigma * rng.normal(kStreamDriverBase, t);
    const double ny = b * x + a * y + sigma * rng.normal(kStreamDriverBase + 1, t);
    x = nx;
    y = ny;
    if (t >= burn_in) {
      values(t - burn_in, 0) = x;
      values(t - burn_in, 1) = y;
    }
  }
  return TimeSeriesSet(std::move(values), {"x", "y"});
}

TimeSeriesSet append_linear_target(const TimeSeriesSet& pair, double amplitude,
                                   std::uint64_t seed) {
  const double c = sample_cross_covariance(pair);
  const double sp2 = 1.0 - 2.0 * amplitude * amplitude * (1.0 + c);
  if (!(sp2 > 0.0)) {
    throw InfeasibleAmplitude("1 - 2A^2(1+C) must be positive, got " +
                              std::to_string(sp2));
  }
  const double sp = std::sqrt(sp2);
  const CounterRng rng(seed);

  std::vector<double> z(pair.samples());
  for (std::size_t t = 0; t < pair.samples(); ++t) {
    const double noise = sp * rng.normal(kStreamDriverBase + 2, t);
    z[t] = t == 0 ? noise
                  : amplitude * (pair.values()(t - 1, 0) + pair.values()(t - 1, 1)) +
                        noise;
  }
  return append_target_column(pair, "z", z);
}

TimeSeriesSet append_product_target(const TimeSeriesSet& pair, double amplitude,
                                    std::uint64_t seed) {
  const double c = sample_cross_covariance(pair);
  const double factor = 1.0 + 2.0 * c;
  const double spp2 = 1.0 - amplitude * amplitude * factor * factor;
  if (!(spp2 > 0.0)) {
    throw InfeasibleAmplitude("1 - B^2(1+2C)^2 must be positive, got " +
                              std::to_string(spp2));
  }
  const double spp = std::sqrt(spp2);
  const CounterRng rng(seed);

  std::vector<double> w(pair.samples());
  for (std::size_t t = 0; t < pair.samples(); ++t) {
    const double noise = spp * rng.normal(kStreamDriverBase + 3, t);
    w[t] = t == 0 ? noise
                  : amplitude * pair.values()(t - 1, 0) * pair.values()(t - 1, 1) +
                        noise;
  }
  return append_target_column(pair, "w", w);
}

TimeSeriesSet gen_redundant_triplet(std::size_t samples, std::uint64_t seed) {
  const CounterRng rng(seed);
  auto h = [&](std::size_t t_plus_2) { return rng.normal(kStreamHidden, t_plus_2); };

  Matrix values(samples, 4);
  for (std::size_t t = 0; t < samples; ++t) {
    values(t, 0) = h(t + 1) + 0.5 * rng.normal(kStreamDriverBase, t);
    values(t, 1) = h(t + 1) + 0.5 * rng.normal(kStreamDriverBase + 1, t);
    values(t, 2) = rng.normal(kStreamDriverBase + 2, t);
    values(t, 3) = h(t) + 0.1 * rng.normal(kStreamTargetNoise, t);
  }
  return TimeSeriesSet(std::move(values), {"x1", "x2", "x3", "w"});
}

double oracle_psi_linear(double amplitude, double c) {
  return amplitude * amplitude * (c + c * c);
}

double oracle_psi_product(double amplitude, double c) {
  return amplitude * amplitude * (4.0 * c * c - 1.0);
}

}  // namespace synflow
