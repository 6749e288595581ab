// Copyright 2026 The synflow Authors
// SPDX-License-Identifier: Apache-2.0

#include "synflow/simd.hpp"

#include <cstdlib>
#include <stdexcept>
#include <string>

namespace synflow::simd {

namespace {

struct Vtable {
  double (*dot)(const double*, const double*, std::size_t);
  double (*sum)(const double*, std::size_t);
  double (*sumsq)(const double*, std::size_t);
  double (*dist2)(const double*, const double*, std::size_t);
  void (*axpy)(double, const double*, double*, std::size_t);
};

constexpr Vtable kScalarTable{scalar::dot, scalar::sum, scalar::sumsq,
                              scalar::dist2, scalar::axpy};

#if defined(__x86_64__) || defined(_M_X64)
constexpr Vtable kAvx2Table{avx2::dot, avx2::sum, avx2::sumsq, avx2::dist2,
                            avx2::axpy};
#endif
#if defined(__aarch64__)
constexpr Vtable kNeonTable{neon::dot, neon::sum, neon::sumsq, neon::dist2,
                            neon::axpy};
#endif

Backend g_backend = Backend::kScalar;
const Vtable* g_table = &kScalarTable;

Backend detect_default() {
#if defined(__x86_64__) || defined(_M_X64)
  if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma")) {
    return Backend::kAvx2;
  }
#endif
#if defined(__aarch64__)
  return Backend::kNeon;
#endif
  return Backend::kScalar;
}

void set_backend(Backend backend) {
  switch (backend) {
    case Backend::kScalar:
      g_table = &kScalarTable;
      break;
    case Backend::kAvx2:
#if defined(__x86_64__) || defined(_M_X64)
      g_table = &kAvx2Table;
      break;
#else
      throw std::invalid_argument("AVX2 backend not available on this platform");
#endif
    case Backend::kNeon:
#if defined(__aarch64__)
      g_table = &kNeonTable;
      break;
#else
      throw std::invalid_argument("NEON backend not available on this platform");
#endif
  }
  g_backend = backend;
}

bool g_initialized = [] {
  Backend backend = detect_default();
  if (const char* env = std::getenv("SYNFLOW_SIMD")) {
    const std::string v(env);
    if (v == "scalar") {
      backend = Backend::kScalar;
    } else if (v == "avx2" && backend_available(Backend::kAvx2)) {
      backend = Backend::kAvx2;
    } else if (v == "neon" && backend_available(Backend::kNeon)) {
      backend = Backend::kNeon;
    }
    // unknown or unavailable values fall back to the detected default
  }
  set_backend(backend);
  return true;
}();

}  // namespace

Backend active_backend() { return g_backend; }

const char* backend_name() {
  switch (g_backend) {
    case Backend::kScalar: return "scalar";
    case Backend::kAvx2: return "avx2";
    case Backend::kNeon: return "neon";
  }
  return "unknown";
}

bool backend_available(Backend backend) {
  switch (backend) {
    case Backend::kScalar:
      return true;
    case Backend::kAvx2:
#if defined(__x86_64__) || defined(_M_X64)
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
    case Backend::kNeon:
#if defined(__aarch64__)
      return true;
#else
      return false;
#endif
  }
  return false;
}

void force_backend(Backend backend) {
  if (!backend_available(backend)) {
    throw std::invalid_argument("requested SIMD backend not available");
  }
  set_backend(backend);
}

double dot(const double* a, const double* b, std::size_t n) {
  return g_table->dot(a, b, n);
}
double sum(const double* a, std::size_t n) { return g_table->sum(a, n); }
double sumsq(const double* a, std::size_t n) { return g_table->sumsq(a, n); }
double dist2(const double* a, const double* b, std::size_t n) {
  return g_table->dist2(a, b, n);
}
void axpy(double alpha, const double* x, double* y, std::size_t n) {
  g_table->axpy(alpha, x, y, n);
}

}  // namespace synflow::simd
