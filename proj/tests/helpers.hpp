#pragma once

// Test-side numerics kept deliberately independent of the library's
// algorithms: LU determinants, power iteration, mesh maximizers, and mt19937
// data generation. Only the Matrix container is shared.

#include <cmath>
#include <cstddef>
#include <functional>
#include <random>
#include <vector>

#include "radbound/dataset.hpp"
#include "radbound/matrix.hpp"

namespace testutil {

using radbound::Matrix;

inline Matrix random_matrix(std::mt19937& gen, std::size_t rows, std::size_t cols,
                            double lo = -1.0, double hi = 1.0) {
  std::uniform_real_distribution<double> dist(lo, hi);
  Matrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = dist(gen);
  return m;
}

inline Matrix random_symmetric(std::mt19937& gen, std::size_t d, double scale = 1.0) {
  std::uniform_real_distribution<double> dist(-scale, scale);
  Matrix m(d, d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j <= i; ++j) m(i, j) = m(j, i) = dist(gen);
  return m;
}

inline radbound::MultitaskDataset random_dataset(std::mt19937& gen, std::size_t tasks,
                                                 std::size_t n, std::size_t d,
                                                 double scale = 1.0) {
  std::vector<Matrix> t;
  for (std::size_t k = 0; k < tasks; ++k) t.push_back(random_matrix(gen, n, d, -scale, scale));
  return radbound::MultitaskDataset(std::move(t));
}

// Determinant by LU with partial pivoting.
inline double lu_determinant(Matrix a) {
  const std::size_t n = a.rows();
  double det = 1.0;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t pivot = k;
    for (std::size_t i = k + 1; i < n; ++i)
      if (std::abs(a(i, k)) > std::abs(a(pivot, k))) pivot = i;
    if (a(pivot, k) == 0.0) return 0.0;
    if (pivot != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(pivot, j), a(k, j));
      det = -det;
    }
    det *= a(k, k);
    for (std::size_t i = k + 1; i < n; ++i) {
      const double f = a(i, k) / a(k, k);
      for (std::size_t j = k; j < n; ++j) a(i, j) -= f * a(k, j);
    }
  }
  return det;
}

// Top eigenvalue of a symmetric PSD matrix by plain power iteration.
inline double power_lambda_max(const Matrix& a, std::size_t iterations = 5000) {
  const std::size_t d = a.rows();
  std::vector<double> v(d, 1.0 / std::sqrt(static_cast<double>(d))), w(d);
  double lambda = 0.0;
  for (std::size_t it = 0; it < iterations; ++it) {
    for (std::size_t i = 0; i < d; ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < d; ++j) s += a(i, j) * v[j];
      w[i] = s;
    }
    double nrm = 0.0;
    for (double x : w) nrm += x * x;
    nrm = std::sqrt(nrm);
    if (nrm == 0.0) return 0.0;
    lambda = nrm;
    for (std::size_t i = 0; i < d; ++i) v[i] = w[i] / nrm;
  }
  return lambda;
}

inline std::vector<double> random_unit(std::mt19937& gen, std::size_t d) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> v(d);
  double nrm = 0.0;
  do {
    nrm = 0.0;
    for (double& x : v) {
      x = normal(gen);
      nrm += x * x;
    }
  } while (nrm == 0.0);
  nrm = std::sqrt(nrm);
  for (double& x : v) x /= nrm;
  return v;
}

// Random rotation: Gram-Schmidt on a random square matrix.
inline Matrix random_rotation(std::mt19937& gen, std::size_t d) {
  Matrix q = random_matrix(gen, d, d);
  for (std::size_t c = 0; c < d; ++c) {
    for (std::size_t p = 0; p < c; ++p) {
      double dot = 0.0;
      for (std::size_t i = 0; i < d; ++i) dot += q(i, c) * q(i, p);
      for (std::size_t i = 0; i < d; ++i) q(i, c) -= dot * q(i, p);
    }
    double nrm = 0.0;
    for (std::size_t i = 0; i < d; ++i) nrm += q(i, c) * q(i, c);
    nrm = std::sqrt(nrm);
    for (std::size_t i = 0; i < d; ++i) q(i, c) /= nrm;
  }
  return q;
}

// max over unit vectors of `objective`, by coarse random mesh plus shrinking
// local resampling around the incumbent.
inline double mesh_max_direction(const std::function<double(const std::vector<double>&)>& objective,
                                 std::size_t d, std::mt19937& gen,
                                 std::size_t coarse = 20000, std::size_t rounds = 60,
                                 std::size_t per_round = 120) {
  std::vector<double> best = random_unit(gen, d);
  double best_value = objective(best);
  for (std::size_t i = 0; i < coarse; ++i) {
    const std::vector<double> v = random_unit(gen, d);
    const double val = objective(v);
    if (val > best_value) {
      best_value = val;
      best = v;
    }
  }
  std::normal_distribution<double> normal(0.0, 1.0);
  double radius = 0.5;
  for (std::size_t r = 0; r < rounds; ++r) {
    for (std::size_t i = 0; i < per_round; ++i) {
      std::vector<double> v(d);
      double nrm = 0.0;
      for (std::size_t j = 0; j < d; ++j) {
        v[j] = best[j] + radius * normal(gen);
        nrm += v[j] * v[j];
      }
      nrm = std::sqrt(nrm);
      if (nrm == 0.0) continue;
      for (double& x : v) x /= nrm;
      const double val = objective(v);
      if (val > best_value) {
        best_value = val;
        best = v;
      }
    }
    radius *= 0.7;
  }
  return best_value;
}

}  // namespace testutil
