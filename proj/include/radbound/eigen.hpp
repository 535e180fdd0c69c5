#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <vector>

#include "radbound/errors.hpp"
#include "radbound/matrix.hpp"

namespace radbound {

struct EigenDecomposition {
  std::vector<double> values;  // descending
  Matrix vectors;              // column j pairs with values[j]
};

// Eigendecomposition of a symmetric matrix by cyclic Jacobi sweeps.
// Stops when the off-diagonal Frobenius norm falls below 1e-13 * ||a||_F;
// throws numeric_failure if 100 sweeps are not enough.
[[nodiscard]] inline EigenDecomposition sym_eigen(const Matrix& a) {
  const std::size_t d = a.rows();
  if (d == 0 || a.cols() != d) throw invalid_input("sym_eigen: matrix must be square and non-empty");
  require_finite(a, "sym_eigen");

  const double scale = max_abs(a);
  double asym = 0.0;
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = i + 1; j < d; ++j)
      asym = std::max(asym, std::abs(a(i, j) - a(j, i)));
  if (asym > 1e-10 * std::max(scale, 1e-300))
    throw invalid_input("sym_eigen: matrix is not symmetric");

  Matrix b = a;
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = i + 1; j < d; ++j)
      b(i, j) = b(j, i) = 0.5 * (a(i, j) + a(j, i));
  Matrix v = Matrix::identity(d);

  const double off_threshold = 1e-13 * frobenius_norm(b);
  // Skipping rotations below this leaves the off-diagonal sum under the threshold.
  const double rotate_tol = off_threshold / (2.0 * static_cast<double>(d));

  double* bd = b.data().data();
  double* vd = v.data().data();

  bool converged = false;
  for (int sweep = 0; sweep < 100 && !converged; ++sweep) {
    double off2 = 0.0;
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = i + 1; j < d; ++j) off2 += 2.0 * b(i, j) * b(i, j);
    if (std::sqrt(off2) <= off_threshold) {
      converged = true;
      break;
    }
    for (std::size_t p = 0; p < d; ++p) {
      for (std::size_t q = p + 1; q < d; ++q) {
        const double apq = bd[p * d + q];
        if (std::abs(apq) <= rotate_tol) continue;
        const double theta = (bd[q * d + q] - bd[p * d + p]) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        double* rp = bd + p * d;
        double* rq = bd + q * d;
        for (std::size_t k = 0; k < d; ++k) {
          const double bpk = rp[k], bqk = rq[k];
          rp[k] = c * bpk - s * bqk;
          rq[k] = s * bpk + c * bqk;
        }
        for (std::size_t k = 0; k < d; ++k) {
          double* rk = bd + k * d;
          const double bkp = rk[p], bkq = rk[q];
          rk[p] = c * bkp - s * bkq;
          rk[q] = s * bkp + c * bkq;
        }
        for (std::size_t k = 0; k < d; ++k) {
          double* rk = vd + k * d;
          const double vkp = rk[p], vkq = rk[q];
          rk[p] = c * vkp - s * vkq;
          rk[q] = s * vkp + c * vkq;
        }
      }
    }
  }
  if (!converged) {
    double off2 = 0.0;
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = i + 1; j < d; ++j) off2 += 2.0 * b(i, j) * b(i, j);
    if (std::sqrt(off2) > off_threshold)
      throw numeric_failure("sym_eigen: Jacobi did not converge in 100 sweeps");
  }

  std::vector<std::size_t> order(d);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t i, std::size_t j) { return b(i, i) > b(j, j); });

  EigenDecomposition out;
  out.values.resize(d);
  out.vectors = Matrix(d, d);
  for (std::size_t j = 0; j < d; ++j) {
    out.values[j] = b(order[j], order[j]);
    for (std::size_t i = 0; i < d; ++i) out.vectors(i, j) = v(i, order[j]);
  }
  return out;
}

// Sum of the k largest eigenvalues of a symmetric matrix.
[[nodiscard]] inline double top_eigenvalue_sum(const Matrix& a, std::size_t k) {
  const EigenDecomposition e = sym_eigen(a);
  double s = 0.0;
  for (std::size_t j = 0; j < std::min(k, e.values.size()); ++j) s += e.values[j];
  return s;
}

// Lower Cholesky factor of a symmetric positive semidefinite matrix.
// `jitter` is added to the diagonal to absorb roundoff in rank-deficient inputs.
[[nodiscard]] inline Matrix cholesky_lower(const Matrix& a, double jitter = 0.0) {
  const std::size_t n = a.rows();
  if (n == 0 || a.cols() != n) throw invalid_input("cholesky_lower: matrix must be square");
  Matrix l(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    double diag = a(j, j) + jitter;
    for (std::size_t k = 0; k < j; ++k) diag -= l(j, k) * l(j, k);
    if (!(diag > 0.0))
      throw numeric_failure("cholesky_lower: matrix is not positive definite");
    l(j, j) = std::sqrt(diag);
    for (std::size_t i = j + 1; i < n; ++i) {
      double v = a(i, j);
      for (std::size_t k = 0; k < j; ++k) v -= l(i, k) * l(j, k);
      l(i, j) = v / l(j, j);
    }
  }
  return l;
}

}  // namespace radbound
