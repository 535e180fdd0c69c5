#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <span>
#include <vector>

#include "radbound/eigen.hpp"
#include "radbound/errors.hpp"
#include "radbound/matrix.hpp"
#include "radbound/oracles.hpp"

namespace radbound {

// Quadrature rule for integrals against the standard normal density.
struct GaussHermiteRule {
  std::vector<double> nodes;
  std::vector<double> weights;  // sums to 1
};

// Golub-Welsch: nodes are the eigenvalues of the Jacobi matrix of the
// (probabilists') Hermite recurrence, weights the squared first eigenvector
// components.
[[nodiscard]] inline GaussHermiteRule gauss_hermite(std::size_t points) {
  if (points == 0) throw invalid_input("gauss_hermite: need at least one point");
  Matrix j(points, points);
  for (std::size_t k = 1; k < points; ++k) {
    const double b = std::sqrt(static_cast<double>(k));
    j(k - 1, k) = j(k, k - 1) = b;
  }
  const EigenDecomposition e = sym_eigen(j);
  GaussHermiteRule rule;
  rule.nodes.resize(points);
  rule.weights.resize(points);
  std::vector<std::size_t> order(points);
  for (std::size_t i = 0; i < points; ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return e.values[a] < e.values[b]; });
  for (std::size_t i = 0; i < points; ++i) {
    rule.nodes[i] = e.values[order[i]];
    const double v0 = e.vectors(0, order[i]);
    rule.weights[i] = v0 * v0;
  }
  return rule;
}

namespace detail {

[[nodiscard]] inline double normal_pdf(double x) {
  return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
}

[[nodiscard]] inline double normal_cdf(double x) {
  return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

// E_t max_i (slope_i * t + intercept_i) for t ~ N(0,1), exactly: build the
// upper envelope of the lines (inputs pre-sorted by ascending slope) and
// integrate each linear segment against the normal density in closed form.
// `order` carries the slope-sorted point indices, `slopes`/`intercepts` are
// indexed by original point id. Scratch vectors avoid reallocation.
struct EnvelopeIntegrator {
  std::vector<std::size_t> hull;
  std::vector<double> cuts;  // breakpoint between hull[i-1] and hull[i]

  [[nodiscard]] double expectation(std::span<const std::size_t> order,
                                   std::span<const double> slopes,
                                   std::span<const double> intercepts) {
    hull.clear();
    cuts.clear();
    for (std::size_t pos = 0; pos < order.size(); ++pos) {
      const std::size_t id = order[pos];
      const double a = slopes[id], b = intercepts[id];
      while (!hull.empty()) {
        const std::size_t top = hull.back();
        if (slopes[top] == a) {
          if (intercepts[top] >= b) goto skip_line;
          hull.pop_back();
          if (!cuts.empty()) cuts.pop_back();
          continue;
        }
        // intersection with the current top line
        const double x = (intercepts[top] - b) / (a - slopes[top]);
        if (!cuts.empty() && x <= cuts.back()) {
          hull.pop_back();
          cuts.pop_back();
          continue;
        }
        cuts.push_back(x);
        break;
      }
      hull.push_back(id);
    skip_line:;
    }

    double total = 0.0;
    for (std::size_t i = 0; i < hull.size(); ++i) {
      const double lo = i == 0 ? -std::numeric_limits<double>::infinity() : cuts[i - 1];
      const double hi = i + 1 == hull.size() ? std::numeric_limits<double>::infinity() : cuts[i];
      const double pdf_lo = std::isinf(lo) ? 0.0 : normal_pdf(lo);
      const double pdf_hi = std::isinf(hi) ? 0.0 : normal_pdf(hi);
      const double cdf_lo = std::isinf(lo) ? 0.0 : normal_cdf(lo);
      const double cdf_hi = std::isinf(hi) ? 1.0 : normal_cdf(hi);
      total += slopes[hull[i]] * (pdf_lo - pdf_hi) + intercepts[hull[i]] * (cdf_hi - cdf_lo);
    }
    return total;
  }
};

}  // namespace detail

struct SetExpectations {
  std::vector<double> class_expectations;  // E sup over each set
  double union_expectation = 0.0;          // E sup over the union of all sets
};

// E max_{z in A} <g, z> for g standard normal, for each point set and their
// union. The first coordinate is integrated exactly (piecewise-linear upper
// envelope against the normal density); the remaining coordinates run on a
// tensor Gauss-Hermite grid with `points_per_coordinate` nodes each.
[[nodiscard]] inline SetExpectations gaussian_set_expectation(
    const std::vector<Matrix>& sets, std::size_t points_per_coordinate = 200,
    const Budget& budget = {}) {
  if (sets.empty()) throw invalid_input("gaussian_set_expectation: no sets");
  const std::size_t n = sets.front().cols();
  if (n == 0) throw invalid_input("gaussian_set_expectation: empty points");
  std::size_t total_points = 0;
  for (const Matrix& s : sets) {
    if (s.cols() != n)
      throw invalid_input("gaussian_set_expectation: sets must share one dimension");
    if (s.rows() == 0) throw invalid_input("gaussian_set_expectation: empty set");
    require_finite(s, "gaussian_set_expectation");
    total_points += s.rows();
  }
  const double grid_size =
      std::pow(static_cast<double>(points_per_coordinate), static_cast<double>(n - 1));
  if (grid_size > static_cast<double>(budget.max_evaluations))
    throw resource_limit("gaussian_set_expectation: quadrature grid exceeds budget");

  // Flatten: slopes = first coordinate, rest feeds the grid inner products.
  const std::size_t m = sets.size();
  std::vector<double> slopes(total_points);
  Matrix rest(total_points, n > 1 ? n - 1 : 1);
  std::vector<std::size_t> set_of(total_points);
  {
    std::size_t row = 0;
    for (std::size_t s = 0; s < m; ++s)
      for (std::size_t i = 0; i < sets[s].rows(); ++i, ++row) {
        slopes[row] = sets[s](i, 0);
        for (std::size_t c = 1; c < n; ++c) rest(row, c - 1) = sets[s](i, c);
        set_of[row] = s;
      }
  }

  // Slope-sorted point orders, per set and for the union.
  std::vector<std::vector<std::size_t>> set_order(m);
  std::vector<std::size_t> union_order(total_points);
  for (std::size_t i = 0; i < total_points; ++i) union_order[i] = i;
  std::sort(union_order.begin(), union_order.end(),
            [&](std::size_t a, std::size_t b) { return slopes[a] < slopes[b]; });
  for (std::size_t i : union_order) set_order[set_of[i]].push_back(i);

  std::vector<double> intercepts(total_points, 0.0);
  detail::EnvelopeIntegrator envelope;
  SetExpectations out;
  out.class_expectations.assign(m, 0.0);

  if (n == 1) {
    for (std::size_t s = 0; s < m; ++s)
      out.class_expectations[s] = envelope.expectation(set_order[s], slopes, intercepts);
    out.union_expectation = envelope.expectation(union_order, slopes, intercepts);
    return out;
  }

  const GaussHermiteRule rule = gauss_hermite(points_per_coordinate);
  std::vector<std::size_t> idx(n - 1, 0);
  std::vector<double> eps(n - 1);
  bool carry_done = false;
  while (!carry_done) {
    double w = 1.0;
    for (std::size_t c = 0; c < n - 1; ++c) {
      eps[c] = rule.nodes[idx[c]];
      w *= rule.weights[idx[c]];
    }
    for (std::size_t i = 0; i < total_points; ++i) intercepts[i] = dot(rest.row(i), eps);
    for (std::size_t s = 0; s < m; ++s)
      out.class_expectations[s] += w * envelope.expectation(set_order[s], slopes, intercepts);
    out.union_expectation += w * envelope.expectation(union_order, slopes, intercepts);

    std::size_t c = 0;
    for (; c < n - 1; ++c) {
      if (++idx[c] < points_per_coordinate) break;
      idx[c] = 0;
    }
    carry_done = c == n - 1;
  }
  return out;
}

}  // namespace radbound
