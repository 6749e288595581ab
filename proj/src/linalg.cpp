// Copyright 2026 The synflow Authors
// SPDX-License-Identifier: Apache-2.0

#include "synflow/linalg.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <numeric>

#include "synflow/simd.hpp"

namespace synflow {

bool cholesky_factor(Matrix& a, double rel_tol) {
  const std::size_t n = a.rows();
  assert(a.cols() == n);
  double max_diag = 0.0;
  for (std::size_t i = 0; i < n; ++i) max_diag = std::max(max_diag, a(i, i));
  const double floor = std::max(rel_tol * max_diag, 0.0);

  for (std::size_t j = 0; j < n; ++j) {
    double d = a(j, j) - simd::dot(a.row(j), a.row(j), j);
    if (!(d > floor) || !std::isfinite(d)) return false;
    d = std::sqrt(d);
    a(j, j) = d;
    for (std::size_t i = j + 1; i < n; ++i) {
      a(i, j) = (a(i, j) - simd::dot(a.row(i), a.row(j), j)) / d;
    }
  }
  // zero the strict upper triangle so the factor is self-describing
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) a(i, j) = 0.0;
  }
  return true;
}

std::vector<double> cholesky_solve(const Matrix& l, const std::vector<double>& b) {
  const std::size_t n = l.rows();
  assert(b.size() == n);
  std::vector<double> x(b);
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = (x[i] - simd::dot(l.row(i), x.data(), i)) / l(i, i);
  }
  for (std::size_t i = n; i-- > 0;) {
    double s = x[i];
    for (std::size_t k = i + 1; k < n; ++k) s -= l(k, i) * x[k];
    x[i] = s / l(i, i);
  }
  return x;
}

std::optional<std::vector<double>> solve_spd(const Matrix& a, double lambda,
                                             const std::vector<double>& b) {
  Matrix l = a;
  for (std::size_t i = 0; i < l.rows(); ++i) l(i, i) += lambda;
  if (!cholesky_factor(l)) return std::nullopt;
  return cholesky_solve(l, b);
}

EigenSym jacobi_eigensym(const Matrix& a, int max_sweeps) {
  const std::size_t n = a.rows();
  assert(a.cols() == n);
  Matrix m = a;
  Matrix v(n, n);
  for (std::size_t i = 0; i < n; ++i) v(i, i) = 1.0;

  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) off += m(p, q) * m(p, q);
    }
    if (off < 1e-30 * static_cast<double>(n * n)) break;

    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = m(p, q);
        if (std::abs(apq) < 1e-300) continue;
        const double theta = (m(q, q) - m(p, p)) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;

        for (std::size_t k = 0; k < n; ++k) {
          const double mkp = m(k, p);
          const double mkq = m(k, q);
          m(k, p) = c * mkp - s * mkq;
          m(k, q) = s * mkp + c * mkq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double mpk = m(p, k);
          const double mqk = m(q, k);
          m(p, k) = c * mpk - s * mqk;
          m(q, k) = s * mpk + c * mqk;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v(k, p);
          const double vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t i, std::size_t j) { return m(i, i) > m(j, j); });

  EigenSym out;
  out.values.resize(n);
  out.vectors = Matrix(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    out.values[j] = m(order[j], order[j]);
    for (std::size_t i = 0; i < n; ++i) out.vectors(i, j) = v(i, order[j]);
  }
  return out;
}

}  // namespace synflow
