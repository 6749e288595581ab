// Copyright 2026 The synflow Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <string>

// Runtime-dispatched numeric kernels. Every kernel has a scalar reference
// implementation; on x86-64 an AVX2+FMA variant and on aarch64 a NEON variant
// are selected at startup when the CPU supports them. The SYNFLOW_SIMD
// environment variable ("scalar", "avx2", "neon", "auto") or force_backend()
// overrides the selection; equivalence between backends is covered by tests.
namespace synflow::simd {

enum class Backend { kScalar, kAvx2, kNeon };

Backend active_backend();
const char* backend_name();

/// Selects a backend explicitly. Throws std::invalid_argument if the backend
/// is not available on this machine. kScalar is always available.
void force_backend(Backend backend);

/// True if the given backend can run on this CPU.
bool backend_available(Backend backend);

double dot(const double* a, const double* b, std::size_t n);
double sum(const double* a, std::size_t n);
double sumsq(const double* a, std::size_t n);
double dist2(const double* a, const double* b, std::size_t n);
/// y += alpha * x
void axpy(double alpha, const double* x, double* y, std::size_t n);

namespace scalar {
double dot(const double* a, const double* b, std::size_t n);
double sum(const double* a, std::size_t n);
double sumsq(const double* a, std::size_t n);
double dist2(const double* a, const double* b, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);
}  // namespace scalar

#if defined(__x86_64__) || defined(_M_X64)
namespace avx2 {
double dot(const double* a, const double* b, std::size_t n);
double sum(const double* a, std::size_t n);
double sumsq(const double* a, std::size_t n);
double dist2(const double* a, const double* b, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);
}  // namespace avx2
#endif

#if defined(__aarch64__)
namespace neon {
double dot(const double* a, const double* b, std::size_t n);
double sum(const double* a, std::size_t n);
double sumsq(const double* a, std::size_t n);
double dist2(const double* a, const double* b, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);
}  // namespace neon
#endif

}  // namespace synflow::simd
