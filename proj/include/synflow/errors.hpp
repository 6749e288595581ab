// Copyright 2026 The synflow Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace synflow {

// Process exit codes used by the CLI. Library errors carry the code they
// should map to when they escape to main().
inline constexpr int kExitOk = 0;
inline constexpr int kExitValidationFailure = 2;
inline constexpr int kExitInputError = 3;
inline constexpr int kExitConfigError = 4;

/// Base class for all synflow errors. `kind()` is a stable machine-readable
/// tag (e.g. "ZeroVarianceColumn") suitable for error records.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& message, int exit_code)
      : std::runtime_error(kind + ": " + message),
        kind_(std::move(kind)),
        exit_code_(exit_code) {}

  const std::string& kind() const noexcept { return kind_; }
  int exit_code() const noexcept { return exit_code_; }

 private:
  std::string kind_;
  int exit_code_;
};

struct InputError : Error {
  InputError(std::string kind, const std::string& message)
      : Error(std::move(kind), message, kExitInputError) {}
};

struct ConfigError : Error {
  ConfigError(std::string kind, const std::string& message)
      : Error(std::move(kind), message, kExitConfigError) {}
};

struct ZeroVarianceColumn : InputError {
  explicit ZeroVarianceColumn(const std::string& column)
      : InputError("ZeroVarianceColumn", "column '" + column + "' is constant") {}
};

struct InsufficientSamples : InputError {
  explicit InsufficientSamples(const std::string& message)
      : InputError("InsufficientSamples", message) {}
};

struct UnknownLabel : InputError {
  explicit UnknownLabel(const std::string& label)
      : InputError("UnknownLabel", "no variable named '" + label + "'") {}
};

struct SingularDesign : InputError {
  explicit SingularDesign(const std::string& message)
      : InputError("SingularDesign", message) {}
};

struct EmptyMatrix : InputError {
  explicit EmptyMatrix(const std::string& message)
      : InputError("EmptyMatrix", message) {}
};

struct AsymmetricInput : InputError {
  explicit AsymmetricInput(const std::string& message)
      : InputError("AsymmetricInput", message) {}
};

struct FeatureExplosion : ConfigError {
  explicit FeatureExplosion(const std::string& message)
      : ConfigError("FeatureExplosion", message) {}
};

struct TooFewSurrogates : ConfigError {
  explicit TooFewSurrogates(const std::string& message)
      : ConfigError("TooFewSurrogates", message) {}
};

struct InvalidPartition : ConfigError {
  explicit InvalidPartition(const std::string& message)
      : ConfigError("InvalidPartition", message) {}
};

struct TooManyDrivers : ConfigError {
  explicit TooManyDrivers(const std::string& message)
      : ConfigError("TooManyDrivers", message) {}
};

struct SubsetTooLarge : ConfigError {
  explicit SubsetTooLarge(const std::string& message)
      : ConfigError("SubsetTooLarge", message) {}
};

struct NonstationaryParameters : ConfigError {
  explicit NonstationaryParameters(const std::string& message)
      : ConfigError("NonstationaryParameters", message) {}
};

struct InfeasibleAmplitude : ConfigError {
  explicit InfeasibleAmplitude(const std::string& message)
      : ConfigError("InfeasibleAmplitude", message) {}
};

}  // namespace synflow
