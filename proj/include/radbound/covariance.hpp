#pragma once

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <cstddef>
#include <vector>

#include "radbound/eigen.hpp"
#include "radbound/errors.hpp"
#include "radbound/matrix.hpp"

namespace radbound {

// Spectral summary of an uncentered second-moment matrix (1/n) sum x_i x_i^T.
struct CovarianceSummary {
  std::size_t dim = 0;           // feature dimension (Gram size for kernel summaries)
  double trace = 0.0;            // (1/n) sum ||x_i||^2
  std::vector<double> spectrum;  // descending, roundoff negatives clamped to zero
  double lambda_max = 0.0;
  std::size_t rank = 0;
};

namespace detail {

// Clamps eigenvalues that are negative by roundoff and assembles the summary.
// Eigenvalues below -1e-10 * trace indicate a broken input and are rejected.
inline CovarianceSummary finalize_summary(std::size_t dim, double trace,
                                          std::vector<double> values,
                                          bool truncate_zeros) {
  std::sort(values.begin(), values.end(), std::greater<>());
  const double clamp_floor = -1e-10 * std::max(trace, 0.0);
  for (double& v : values) {
    if (v < 0.0) {
      if (v < clamp_floor)
        throw numeric_failure("covariance spectrum has a significantly negative eigenvalue");
      v = 0.0;
    }
  }
  if (truncate_zeros) {
    const double tiny = 1e-14 * std::max(1.0, values.empty() ? 0.0 : values.front());
    while (values.size() > 1 && values.back() <= tiny) values.pop_back();
  }
  CovarianceSummary s;
  s.dim = dim;
  s.trace = trace;
  s.lambda_max = values.empty() ? 0.0 : values.front();
  const double rank_tol =
      static_cast<double>(std::max<std::size_t>(dim, values.size())) * DBL_EPSILON * s.lambda_max;
  s.rank = static_cast<std::size_t>(
      std::count_if(values.begin(), values.end(), [&](double v) { return v > rank_tol; }));
  s.spectrum = std::move(values);
  return s;
}

}  // namespace detail

// Spectral summary of (1/n) X^T X for an n-by-d sample matrix X.
// Decomposes the d-by-d moment matrix when d <= n and the n-by-n Gram matrix
// otherwise; the nonzero spectra agree, so the summary is route-independent.
[[nodiscard]] inline CovarianceSummary covariance(const Matrix& data) {
  const std::size_t n = data.rows(), d = data.cols();
  if (n == 0 || d == 0) throw invalid_input("covariance: empty data");
  require_finite(data, "covariance");

  double trace = 0.0;
  for (std::size_t i = 0; i < n; ++i) trace += squared_norm(data.row(i));
  trace /= static_cast<double>(n);

  Matrix m;
  if (d <= n) {
    m = Matrix(d, d);
    for (std::size_t i = 0; i < n; ++i) {
      const auto xi = data.row(i);
      for (std::size_t a = 0; a < d; ++a) {
        const double xa = xi[a];
        if (xa == 0.0) continue;
        for (std::size_t b = a; b < d; ++b) m(a, b) += xa * xi[b];
      }
    }
    for (std::size_t a = 0; a < d; ++a)
      for (std::size_t b = a; b < d; ++b) {
        m(a, b) /= static_cast<double>(n);
        m(b, a) = m(a, b);
      }
  } else {
    m = Matrix(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i; j < n; ++j)
        m(i, j) = m(j, i) = dot(data.row(i), data.row(j)) / static_cast<double>(n);
  }
  return detail::finalize_summary(d, trace, sym_eigen(m).values, false);
}

// Subtracts column means. Two correction passes keep the residual means at
// roundoff level even for large offsets.
[[nodiscard]] inline Matrix center(const Matrix& data) {
  const std::size_t n = data.rows(), d = data.cols();
  if (n == 0 || d == 0) throw invalid_input("center: empty data");
  require_finite(data, "center");
  Matrix out = data;
  for (int pass = 0; pass < 2; ++pass) {
    for (std::size_t j = 0; j < d; ++j) {
      double mean = 0.0;
      for (std::size_t i = 0; i < n; ++i) mean += out(i, j);
      mean /= static_cast<double>(n);
      for (std::size_t i = 0; i < n; ++i) out(i, j) -= mean;
    }
  }
  return out;
}

}  // namespace radbound
