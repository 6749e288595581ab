// Copyright 2026 The synflow Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "synflow/rng.hpp"
#include "synflow/simd.hpp"

namespace {

std::vector<double> random_vector(std::size_t n, std::uint64_t stream) {
  synflow::CounterRng rng(42);
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = rng.normal(stream, i) * 3.0;
  return out;
}

}  // namespace

TEST_CASE("scalar kernels match straightforward math") {
  using namespace synflow::simd;
  const std::vector<double> a{1.0, 2.0, -3.0};
  const std::vector<double> b{0.5, -1.0, 2.0};
  CHECK(scalar::dot(a.data(), b.data(), 3) == doctest::Approx(-7.5));
  CHECK(scalar::sum(a.data(), 3) == doctest::Approx(0.0));
  CHECK(scalar::sumsq(a.data(), 3) == doctest::Approx(14.0));
  CHECK(scalar::dist2(a.data(), b.data(), 3) == doctest::Approx(0.25 + 9.0 + 25.0));
  std::vector<double> y = b;
  scalar::axpy(2.0, a.data(), y.data(), 3);
  CHECK(y[0] == doctest::Approx(2.5));
  CHECK(y[1] == doctest::Approx(3.0));
  CHECK(y[2] == doctest::Approx(-4.0));
}

TEST_CASE("vector backends agree with the scalar reference") {
  using namespace synflow::simd;
  for (Backend backend : {Backend::kAvx2, Backend::kNeon}) {
    if (!backend_available(backend)) continue;
    CAPTURE(static_cast<int>(backend));
    // lengths straddling the vector width, including remainders and empty
    for (std::size_t n : {std::size_t{0}, std::size_t{1}, std::size_t{3},
                          std::size_t{4}, std::size_t{7}, std::size_t{8},
                          std::size_t{63}, std::size_t{64}, std::size_t{1021}}) {
      const auto a = random_vector(n, 1);
      const auto b = random_vector(n, 2);
      const double scale = static_cast<double>(n) + 1.0;

      force_backend(backend);
      const double dot_v = dot(a.data(), b.data(), n);
      const double sum_v = sum(a.data(), n);
      const double sumsq_v = sumsq(a.data(), n);
      const double dist_v = dist2(a.data(), b.data(), n);
      std::vector<double> y_v = b;
      axpy(0.37, a.data(), y_v.data(), n);

      force_backend(Backend::kScalar);
      CHECK(dot_v == doctest::Approx(dot(a.data(), b.data(), n)).epsilon(1e-12));
      CHECK(sum_v == doctest::Approx(sum(a.data(), n)).epsilon(1e-12));
      CHECK(sumsq_v ==
            doctest::Approx(sumsq(a.data(), n)).scale(scale).epsilon(1e-12));
      CHECK(dist_v ==
            doctest::Approx(dist2(a.data(), b.data(), n)).scale(scale).epsilon(1e-12));
      std::vector<double> y_s = b;
      axpy(0.37, a.data(), y_s.data(), n);
      for (std::size_t i = 0; i < n; ++i) {
        CHECK(y_v[i] == doctest::Approx(y_s[i]).epsilon(1e-13));
      }
    }
  }
  // restore the default for the rest of the suite
  force_backend(backend_available(Backend::kAvx2)
                    ? Backend::kAvx2
                    : (backend_available(Backend::kNeon) ? Backend::kNeon
                                                         : Backend::kScalar));
}

TEST_CASE("force_backend rejects unavailable backends") {
  using namespace synflow::simd;
  CHECK(backend_available(Backend::kScalar));
  CHECK_NOTHROW(force_backend(Backend::kScalar));
  if (!backend_available(Backend::kNeon)) {
    CHECK_THROWS_AS(force_backend(Backend::kNeon), std::invalid_argument);
  }
  if (!backend_available(Backend::kAvx2)) {
    CHECK_THROWS_AS(force_backend(Backend::kAvx2), std::invalid_argument);
  }
  force_backend(backend_available(Backend::kAvx2)
                    ? Backend::kAvx2
                    : (backend_available(Backend::kNeon) ? Backend::kNeon
                                                         : Backend::kScalar));
  CHECK(backend_name() != nullptr);
}
