#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include "radbound/covariance.hpp"
#include "radbound/errors.hpp"
#include "radbound/matrix.hpp"

namespace radbound {

// Kernel Gram matrix together with the width that generated it.
// `kernel_width` is zero for grams built from explicit inner products.
struct GramMatrix {
  Matrix entries;
  double kernel_width = 0.0;

  std::size_t size() const { return entries.rows(); }
};

// Gram matrix of the Gaussian kernel exp(-||x-y||^2 / sigma^2).
[[nodiscard]] inline GramMatrix gaussian_gram(const Matrix& data, double sigma) {
  if (!(sigma > 0.0)) throw invalid_input("gaussian_gram: kernel width must be positive");
  const std::size_t n = data.rows();
  if (n == 0 || data.cols() == 0) throw invalid_input("gaussian_gram: empty data");
  require_finite(data, "gaussian_gram");

  GramMatrix g;
  g.kernel_width = sigma;
  g.entries = Matrix(n, n);
  const double inv = 1.0 / (sigma * sigma);
  for (std::size_t i = 0; i < n; ++i) {
    g.entries(i, i) = 1.0;
    const auto xi = data.row(i);
    for (std::size_t j = i + 1; j < n; ++j) {
      const auto xj = data.row(j);
      double d2 = 0.0;
      for (std::size_t k = 0; k < xi.size(); ++k) {
        const double t = xi[k] - xj[k];
        d2 += t * t;
      }
      g.entries(i, j) = g.entries(j, i) = std::exp(-d2 * inv);
    }
  }
  return g;
}

// Covariance summary of the (implicit) feature-space second-moment matrix:
// its nonzero spectrum equals spectrum(K)/n. The reported dim is the Gram size.
[[nodiscard]] inline CovarianceSummary kernel_cov_summary(const GramMatrix& gram) {
  const std::size_t n = gram.size();
  if (n == 0) throw invalid_input("kernel_cov_summary: empty gram");
  double trace = 0.0;
  for (std::size_t i = 0; i < n; ++i) trace += gram.entries(i, i);
  trace /= static_cast<double>(n);

  std::vector<double> values = sym_eigen(gram.entries).values;
  for (double& v : values) v /= static_cast<double>(n);
  return detail::finalize_summary(n, trace, std::move(values), true);
}

// Smallest pairwise Euclidean distance, by exhaustive scan.
[[nodiscard]] inline double min_pairwise_distance(const Matrix& data) {
  const std::size_t n = data.rows();
  if (n < 2) throw invalid_input("min_pairwise_distance: need at least two points");
  require_finite(data, "min_pairwise_distance");
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    const auto xi = data.row(i);
    for (std::size_t j = i + 1; j < n; ++j) {
      const auto xj = data.row(j);
      double d2 = 0.0;
      for (std::size_t k = 0; k < xi.size(); ++k) {
        const double t = xi[k] - xj[k];
        d2 += t * t;
      }
      best = std::min(best, d2);
    }
  }
  return std::sqrt(best);
}

// Separation-based bound on the top eigenvalue of the Gaussian kernel
// covariance: lambda_max <= 1/n + exp(-min_distance^2 / sigma^2).
[[nodiscard]] inline double gaussian_lambda_bound(std::size_t n, double min_distance,
                                                  double sigma) {
  if (n == 0) throw invalid_input("gaussian_lambda_bound: n must be positive");
  if (!(sigma > 0.0)) throw invalid_input("gaussian_lambda_bound: kernel width must be positive");
  if (!(min_distance >= 0.0))
    throw invalid_input("gaussian_lambda_bound: distance must be nonnegative");
  return 1.0 / static_cast<double>(n) +
         std::exp(-min_distance * min_distance / (sigma * sigma));
}

}  // namespace radbound
