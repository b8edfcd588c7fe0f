#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

#include "ftnisac/errors.hpp"

namespace ftnisac::detail {

// Dense row-major Hermitian kernels, sized for desk-scale matrices
// (N <= ~1024). Log-determinants go through a Cholesky factorization so the
// positive-definiteness check is part of the computation; an explicit inverse
// is never formed.

/// In-place lower Cholesky of a Hermitian positive-definite matrix.
/// Returns log(det) in natural log. Throws ConditioningError on a
/// non-positive pivot.
inline double cholesky_log_det_inplace(std::vector<std::complex<double>>& a,
                                       std::size_t n) {
  double log_det = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    double d = a[j * n + j].real();
    for (std::size_t k = 0; k < j; ++k) d -= std::norm(a[j * n + k]);
    if (!(d > 0.0) || !std::isfinite(d)) {
      throw ConditioningError(
          "cholesky: non-positive pivot at index " + std::to_string(j) +
          " (matrix numerically singular at working precision)");
    }
    const double ljj = std::sqrt(d);
    a[j * n + j] = ljj;
    log_det += std::log(ljj);
    for (std::size_t i = j + 1; i < n; ++i) {
      std::complex<double> s = a[i * n + j];
      for (std::size_t k = 0; k < j; ++k) {
        s -= a[i * n + k] * std::conj(a[j * n + k]);
      }
      a[i * n + j] = s / ljj;
    }
  }
  return 2.0 * log_det;
}

inline double cholesky_log_det(std::vector<std::complex<double>> a,
                               std::size_t n) {
  return cholesky_log_det_inplace(a, n);
}

/// Real symmetric variant (same contract).
inline double cholesky_log_det_real(const std::vector<double>& a,
                                    std::size_t n) {
  std::vector<std::complex<double>> c(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) c[i] = a[i];
  return cholesky_log_det_inplace(c, n);
}

/// Lower Cholesky factor of a real SPD matrix, for solve-based iteration.
inline std::vector<double> cholesky_factor_real(const std::vector<double>& a,
                                                std::size_t n) {
  std::vector<double> l(n * n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    double d = a[j * n + j];
    for (std::size_t k = 0; k < j; ++k) d -= l[j * n + k] * l[j * n + k];
    if (!(d > 0.0) || !std::isfinite(d)) {
      throw ConditioningError("cholesky: non-positive pivot at index " +
                              std::to_string(j));
    }
    l[j * n + j] = std::sqrt(d);
    for (std::size_t i = j + 1; i < n; ++i) {
      double s = a[i * n + j];
      for (std::size_t k = 0; k < j; ++k) s -= l[i * n + k] * l[j * n + k];
      l[i * n + j] = s / l[j * n + j];
    }
  }
  return l;
}

/// Solves (L L^T) x = b given the lower factor L.
inline void llt_solve_real(const std::vector<double>& l, std::size_t n,
                           std::vector<double>& x) {
  for (std::size_t i = 0; i < n; ++i) {
    double s = x[i];
    for (std::size_t k = 0; k < i; ++k) s -= l[i * n + k] * x[k];
    x[i] = s / l[i * n + i];
  }
  for (std::size_t ii = n; ii-- > 0;) {
    double s = x[ii];
    for (std::size_t k = ii + 1; k < n; ++k) s -= l[k * n + ii] * x[k];
    x[ii] = s / l[ii * n + ii];
  }
}

}  // namespace ftnisac::detail
