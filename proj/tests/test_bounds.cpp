#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <vector>

#include "helpers.hpp"
#include "radbound/bounds.hpp"
#include "radbound/covariance.hpp"
#include "radbound/dataset.hpp"
#include "radbound/errors.hpp"
#include "radbound/kernel.hpp"
#include "radbound/oracles.hpp"

using Catch::Approx;
using namespace radbound;

namespace {

GramMatrix linear_gram(const Matrix& x) {
  GramMatrix g;
  g.entries = Matrix(x.rows(), x.rows());
  for (std::size_t i = 0; i < x.rows(); ++i)
    for (std::size_t j = 0; j < x.rows(); ++j) g.entries(i, j) = dot(x.row(i), x.row(j));
  return g;
}

double named(const std::vector<std::pair<std::string, double>>& entries,
             const std::string& key) {
  for (const auto& [name, v] : entries)
    if (name == key) return v;
  FAIL("missing entry " + key);
  return 0.0;
}

}  // namespace

TEST_CASE("union lemma bound with one class is just its expectation") {
  const std::vector<double> e{7.5};
  const LemmaBound b = lemma_main_bound(e, 2.0, Variant::rademacher);
  REQUIRE(b.value == Approx(7.5).margin(1e-15));
  REQUIRE(b.small_class_count);
}

TEST_CASE("union lemma bound pinned values") {
  const std::vector<double> e{1.0, 2.0, 3.0, 4.0};
  const LemmaBound b = lemma_main_bound(e, 1.0, Variant::rademacher);
  REQUIRE(b.value == Approx(4.0 + 4.0 * std::sqrt(std::log(4.0))).margin(1e-14));
  REQUIRE_FALSE(b.small_class_count);

  const LemmaBound g = lemma_main_bound(e, 1.0, Variant::gaussian);
  REQUIRE(g.value == Approx(4.0 + 2.0 * std::sqrt(std::log(4.0))).margin(1e-14));
}

TEST_CASE("union lemma flags fewer than four classes but still computes") {
  const std::vector<double> two{1.0, 2.0}, three{1.0, 2.0, 3.0};
  REQUIRE(lemma_main_bound(two, 1.0, Variant::rademacher).small_class_count);
  REQUIRE(lemma_main_bound(three, 1.0, Variant::rademacher).small_class_count);
  const LemmaBound b = lemma_main_bound(two, 3.0, Variant::rademacher);
  REQUIRE(b.value == Approx(2.0 + 12.0 * std::sqrt(std::log(2.0))).margin(1e-14));
}

TEST_CASE("union lemma rejects bad arguments") {
  const std::vector<double> none;
  const std::vector<double> one{1.0};
  REQUIRE_THROWS_AS(lemma_main_bound(none, 1.0, Variant::rademacher), invalid_input);
  REQUIRE_THROWS_AS(lemma_main_bound(one, -1.0, Variant::rademacher), invalid_input);
}

TEST_CASE("corollary bound pinned value") {
  // strongest 0.1, weak scale 0.2, n 100, class count e: ln M / n = 1/100
  const double b = corollary_bound(0.1, 0.2, std::exp(1.0), 100, Variant::rademacher);
  REQUIRE(b == Approx(0.1 + 8.0 * 0.2 * std::sqrt(1.0 / 100.0)).margin(1e-14));
  REQUIRE(b == Approx(0.26).margin(1e-14));
  const double g = corollary_bound(0.1, 0.2, std::exp(1.0), 100, Variant::gaussian);
  REQUIRE(g == Approx(0.1 + 4.0 * 0.2 * std::sqrt(1.0 / 100.0)).margin(1e-14));
}

TEST_CASE("corollary bound is monotone in each argument") {
  const double base = corollary_bound(1.0, 0.5, 8.0, 50, Variant::rademacher);
  REQUIRE(corollary_bound(1.2, 0.5, 8.0, 50, Variant::rademacher) > base);
  REQUIRE(corollary_bound(1.0, 0.6, 8.0, 50, Variant::rademacher) > base);
  REQUIRE(corollary_bound(1.0, 0.5, 16.0, 50, Variant::rademacher) > base);
  REQUIRE(corollary_bound(1.0, 0.5, 8.0, 25, Variant::rademacher) > base);
  REQUIRE_THROWS_AS(corollary_bound(1.0, 0.5, 0.5, 50, Variant::rademacher), invalid_input);
  REQUIRE_THROWS_AS(corollary_bound(1.0, -0.5, 8.0, 50, Variant::rademacher), invalid_input);
}

TEST_CASE("mkl bound on the identity gram") {
  GramMatrix g;
  g.entries = Matrix::identity(16);
  const BoundReport r = mkl_bound(std::vector<GramMatrix>{g});
  // kernel trace is the mean diagonal = 1, so the strong term is 2 sqrt(1/16),
  // and a single class has no union slack
  REQUIRE(r.strong == Approx(0.5).margin(1e-12));
  REQUIRE(named(r.terms, "weak") == Approx(0.0).margin(1e-15));
  REQUIRE(r.bound == Approx(0.5).margin(1e-12));
  REQUIRE(r.class_count == 1.0);
}

TEST_CASE("mkl bound from grams equals the summary route") {
  std::mt19937 gen(201);
  const Matrix x = testutil::random_matrix(gen, 12, 3);
  std::vector<GramMatrix> grams;
  grams.push_back(gaussian_gram(x, 0.9));
  grams.push_back(gaussian_gram(x, 2.1));
  grams.push_back(linear_gram(x));
  std::vector<CovarianceSummary> summaries;
  for (const GramMatrix& g : grams) summaries.push_back(kernel_cov_summary(g));
  const BoundReport from_grams = mkl_bound(grams);
  const BoundReport from_summaries = mkl_bound(summaries, 12);
  REQUIRE(from_grams.bound == Approx(from_summaries.bound).margin(1e-12));
  REQUIRE(from_grams.strong == Approx(from_summaries.strong).margin(1e-12));
  REQUIRE(from_grams.weak == Approx(from_summaries.weak).margin(1e-12));
}

TEST_CASE("mkl bound terms follow the trace and lambda_max maxima") {
  std::mt19937 gen(202);
  const Matrix x = testutil::random_matrix(gen, 10, 4);
  std::vector<GramMatrix> grams;
  grams.push_back(gaussian_gram(x, 0.7));
  grams.push_back(gaussian_gram(x, 1.5));
  grams.push_back(gaussian_gram(x, 3.0));
  grams.push_back(gaussian_gram(x, 6.0));
  double max_trace = 0.0, max_lambda = 0.0;
  for (const GramMatrix& g : grams) {
    const CovarianceSummary s = kernel_cov_summary(g);
    max_trace = std::max(max_trace, s.trace);
    max_lambda = std::max(max_lambda, s.lambda_max);
  }
  const BoundReport r = mkl_bound(grams);
  REQUIRE(r.strong == Approx(2.0 * std::sqrt(max_trace / 10.0)).margin(1e-12));
  REQUIRE(r.weak == Approx(std::sqrt(max_lambda)).margin(1e-12));
  REQUIRE(named(r.terms, "weak") ==
          Approx(8.0 * std::sqrt(max_lambda * std::log(4.0) / 10.0)).margin(1e-12));
  REQUIRE(r.bound == Approx(r.strong + named(r.terms, "weak")).margin(1e-13));
  REQUIRE(r.class_count == 4.0);
  // gaussian grams have unit diagonal, so the trace is exactly one
  REQUIRE(r.strong == Approx(2.0 / std::sqrt(10.0)).margin(1e-12));
  const BoundReport gv = mkl_bound(grams, Variant::gaussian);
  REQUIRE(gv.strong == Approx(r.strong).margin(1e-13));
  REQUIRE(named(gv.terms, "weak") == Approx(0.5 * named(r.terms, "weak")).margin(1e-13));
}

TEST_CASE("structured sparsity with the identity operator matches mkl on the linear gram") {
  std::mt19937 gen(203);
  const Matrix x = testutil::random_matrix(gen, 9, 3);
  const BoundReport proj = structured_sparsity_bound(x, {Matrix::identity(3)});
  const BoundReport mkl = mkl_bound(std::vector<GramMatrix>{linear_gram(x)});
  REQUIRE(proj.bound == Approx(mkl.bound).margin(1e-10));
  REQUIRE(proj.family == Family::projection);
}

TEST_CASE("structured sparsity with axis operators uses per-axis moments") {
  Matrix x(2, 2);
  x(0, 0) = 1.0;
  x(0, 1) = 3.0;
  x(1, 0) = 2.0;
  x(1, 1) = 1.0;
  Matrix p0(2, 2), p1(2, 2);
  p0(0, 0) = 1.0;
  p1(1, 1) = 1.0;
  const BoundReport r = structured_sparsity_bound(x, {p0, p1});
  // axis 0 keeps {1, 2}: trace = 5/2; axis 1 keeps {3, 1}: trace = 5
  REQUIRE(r.strong == Approx(2.0 * std::sqrt(5.0 / 2.0)).margin(1e-12));
  REQUIRE(named(r.terms, "weak") ==
          Approx(8.0 * std::sqrt(5.0 * std::log(2.0) / 2.0)).margin(1e-12));
  REQUIRE(r.class_count == 2.0);
}

TEST_CASE("structured sparsity rejects mismatched operators") {
  std::mt19937 gen(230);
  const Matrix x = testutil::random_matrix(gen, 4, 3);
  REQUIRE_THROWS_AS(structured_sparsity_bound(x, {}), invalid_input);
  REQUIRE_THROWS_AS(structured_sparsity_bound(x, {Matrix::identity(2)}), invalid_input);
}

TEST_CASE("dictionary sparsity bound pinned single-point value") {
  Matrix x(1, 2);
  x(0, 0) = 1.0;
  std::vector<Matrix> tasks;
  tasks.push_back(x);
  const MultitaskDataset data(std::move(tasks));
  const BoundReport r = dict_sparsity_bound(data, 1);
  // n = T = K = 1 and a unit sample: strong 2, weak term 8 sqrt(ln 2)
  REQUIRE(r.strong == Approx(2.0).margin(1e-14));
  REQUIRE(named(r.terms, "weak") == Approx(8.0 * std::sqrt(std::log(2.0))).margin(1e-14));
  REQUIRE(r.bound == Approx(2.0 + 8.0 * std::sqrt(std::log(2.0))).margin(1e-13));
  REQUIRE(r.class_count == Approx(2.0).margin(1e-14));
}

TEST_CASE("dictionary sparsity bound assembles pooled and per-task moments") {
  std::mt19937 gen(204);
  const std::size_t t_count = 3, n = 5, k = 2;
  const MultitaskDataset data = testutil::random_dataset(gen, t_count, n, 4);
  const BoundReport r = dict_sparsity_bound(data, k);

  const CovarianceSummary pooled = covariance(data.pooled());
  double mean_lambda = 0.0;
  for (std::size_t t = 0; t < t_count; ++t)
    mean_lambda += covariance(data.task(t)).lambda_max;
  mean_lambda /= static_cast<double>(t_count);

  const double strong =
      2.0 * std::sqrt(static_cast<double>(k) * pooled.trace /
                      static_cast<double>(n * t_count));
  const double weak = 8.0 * std::sqrt(mean_lambda * std::log(2.0 * static_cast<double>(k)) /
                                      static_cast<double>(n));
  REQUIRE(r.strong == Approx(strong).margin(1e-12));
  REQUIRE(named(r.terms, "weak") == Approx(weak).margin(1e-12));
  REQUIRE(r.class_count ==
          Approx(std::pow(2.0 * static_cast<double>(k), static_cast<double>(t_count)))
              .margin(1e-9));
  REQUIRE(named(r.info, "pooled_trace") == Approx(pooled.trace).margin(1e-12));
  REQUIRE(named(r.info, "mean_task_lambda_max") == Approx(mean_lambda).margin(1e-12));
}

TEST_CASE("pooled covariance averages the per-task covariances") {
  std::mt19937 gen(205);
  const MultitaskDataset data = testutil::random_dataset(gen, 4, 6, 3);
  const CovarianceSummary pooled = covariance(data.pooled());
  double trace_mean = 0.0;
  for (std::size_t t = 0; t < 4; ++t) trace_mean += covariance(data.task(t)).trace;
  trace_mean /= 4.0;
  REQUIRE(pooled.trace == Approx(trace_mean).margin(1e-12));
  // full pooled covariance matrix equals the average of task covariances
  Matrix avg(3, 3);
  for (std::size_t t = 0; t < 4; ++t) {
    const Matrix& m = data.task(t);
    for (std::size_t a = 0; a < 3; ++a)
      for (std::size_t b = 0; b < 3; ++b) {
        double acc = 0.0;
        for (std::size_t i = 0; i < 6; ++i) acc += m(i, a) * m(i, b);
        avg(a, b) += acc / (6.0 * 4.0);
      }
  }
  const Matrix p = data.pooled();
  for (std::size_t a = 0; a < 3; ++a)
    for (std::size_t b = 0; b < 3; ++b) {
      double acc = 0.0;
      for (std::size_t i = 0; i < p.rows(); ++i) acc += p(i, a) * p(i, b);
      REQUIRE(acc / static_cast<double>(p.rows()) == Approx(avg(a, b)).margin(1e-12));
    }
}

TEST_CASE("dictionary sharing bound pinned weak term at one atom") {
  std::mt19937 gen(206);
  const MultitaskDataset data = testutil::random_dataset(gen, 2, 6, 3);
  const BoundReport r = dict_sharing_bound(data, 1);
  const CovarianceSummary pooled = covariance(data.pooled());
  REQUIRE(named(r.terms, "weak") ==
          Approx(8.0 * std::sqrt(pooled.lambda_max * std::log(2.0) / 6.0)).margin(1e-12));
  REQUIRE(r.class_count == Approx(4.0).margin(1e-12));  // 2^T * K with T = 2, K = 1
}

TEST_CASE("dictionary sharing bound uses the diluted log factor") {
  std::mt19937 gen(207);
  const std::size_t t_count = 4, n = 5, k = 3;
  const MultitaskDataset data = testutil::random_dataset(gen, t_count, n, 3);
  const BoundReport r = dict_sharing_bound(data, k);
  const CovarianceSummary pooled = covariance(data.pooled());
  const double strong = 2.0 * std::sqrt(pooled.trace / static_cast<double>(n * t_count));
  const double weak =
      8.0 * std::sqrt(pooled.lambda_max *
                      (std::log(2.0) + std::log(static_cast<double>(k)) /
                                           static_cast<double>(t_count)) /
                      static_cast<double>(n));
  REQUIRE(r.strong == Approx(strong).margin(1e-12));
  REQUIRE(named(r.terms, "weak") == Approx(weak).margin(1e-12));
  REQUIRE(r.class_count ==
          Approx(std::pow(2.0, static_cast<double>(t_count)) * static_cast<double>(k))
              .margin(1e-9));
}

TEST_CASE("sharing never exceeds sparsity for the same data and atoms") {
  std::mt19937 gen(208);
  for (int rep = 0; rep < 20; ++rep) {
    const std::size_t t_count = 1 + gen() % 5, n = 2 + gen() % 6, k = 1 + gen() % 4;
    const MultitaskDataset data = testutil::random_dataset(gen, t_count, n, 3);
    const BoundReport share = dict_sharing_bound(data, k);
    const BoundReport sparse = dict_sparsity_bound(data, k);
    REQUIRE(share.strong <= sparse.strong + 1e-12);
  }
}

TEST_CASE("dictionary bounds grow with the atom count") {
  std::mt19937 gen(209);
  const MultitaskDataset data = testutil::random_dataset(gen, 3, 5, 4);
  double prev_sparse = 0.0, prev_share = 0.0;
  for (std::size_t k = 1; k <= 5; ++k) {
    const double sp = dict_sparsity_bound(data, k).bound;
    const double sh = dict_sharing_bound(data, k).bound;
    REQUIRE(sp >= prev_sparse - 1e-12);
    REQUIRE(sh >= prev_share - 1e-12);
    prev_sparse = sp;
    prev_share = sh;
  }
}

TEST_CASE("subspace bound terms at the pinned grid point") {
  std::mt19937 gen(210);
  const std::size_t n = 8, k = 2;
  const MultitaskDataset data = testutil::random_dataset(gen, 3, n, 4);
  const double eta = 4.0 / std::exp(1.0);
  const BoundReport r = subspace_bound(data, k, eta);
  const CovarianceSummary pooled = covariance(data.pooled());
  // ln(4 / eta) = 1 at eta = 4/e, so the weak term loses its log factor
  REQUIRE(named(r.terms, "weak") ==
          Approx(8.0 * std::sqrt(static_cast<double>(k) * pooled.lambda_max /
                                 static_cast<double>(n))).margin(1e-12));
  REQUIRE(named(r.terms, "covering") ==
          Approx(2.0 * eta * std::sqrt(pooled.trace / static_cast<double>(n))).margin(1e-12));
  REQUIRE(named(r.info, "eta") == Approx(eta).margin(1e-15));
}

TEST_CASE("subspace bound grid does at least as well as any fixed eta") {
  std::mt19937 gen(211);
  const MultitaskDataset data = testutil::random_dataset(gen, 2, 7, 5);
  const BoundReport grid = subspace_bound(data, 2);
  for (double eta : {0.01, 0.1, 0.5, 1.0, 2.0}) {
    const BoundReport fixed = subspace_bound(data, 2, eta);
    REQUIRE(grid.bound <= fixed.bound + 1e-12);
  }
  // the sqrt(K/d) point belongs to the default grid
  const BoundReport at_kd = subspace_bound(data, 2, std::sqrt(2.0 / 5.0));
  REQUIRE(grid.bound <= at_kd.bound + 1e-12);
  REQUIRE(named(grid.info, "eta") > 0.0);
  REQUIRE(named(grid.info, "bound_at_eta_sqrt_k_over_d") ==
          Approx(at_kd.bound).margin(1e-12));
  REQUIRE(named(grid.info, "eta_sqrt_k_over_d") ==
          Approx(std::sqrt(2.0 / 5.0)).margin(1e-14));
}

TEST_CASE("subspace bound validates eta and the dimension cap") {
  std::mt19937 gen(212);
  const MultitaskDataset data = testutil::random_dataset(gen, 2, 6, 4);
  REQUIRE_THROWS_AS(subspace_bound(data, 2, -0.5), invalid_input);
  REQUIRE_THROWS_AS(subspace_bound(data, 2, 4.0), invalid_input);
  REQUIRE_THROWS_AS(subspace_bound(data, 0), invalid_input);
  REQUIRE_THROWS_AS(subspace_bound(data, 5), invalid_input);
}

TEST_CASE("subspace simplified bound dominates the headline bound") {
  std::mt19937 gen(213);
  const std::size_t n = 6, k = 2, d = 4;
  const MultitaskDataset data = testutil::random_dataset(gen, 2, n, d);
  const BoundReport r = subspace_bound(data, k);
  const CovarianceSummary pooled = covariance(data.pooled());
  const double simplified =
      r.strong + 8.0 * std::sqrt(static_cast<double>(k) * pooled.lambda_max *
                                 std::log(16.0 * static_cast<double>(d) /
                                          static_cast<double>(k)) /
                                 static_cast<double>(n));
  REQUIRE(named(r.info, "simplified_bound") == Approx(simplified).margin(1e-12));
  REQUIRE(named(r.info, "simplified_bound") >= r.bound - 1e-12);
}

TEST_CASE("subspace bound strong term uses the pooled trace") {
  std::mt19937 gen(214);
  const std::size_t t_count = 3, n = 6, k = 2;
  const MultitaskDataset data = testutil::random_dataset(gen, t_count, n, 4);
  const BoundReport r = subspace_bound(data, k);
  const CovarianceSummary pooled = covariance(data.pooled());
  REQUIRE(r.strong ==
          Approx(2.0 * std::sqrt(static_cast<double>(k) * pooled.trace /
                                 static_cast<double>(n * t_count))).margin(1e-12));
}

TEST_CASE("bound reports are internally consistent") {
  std::mt19937 gen(215);
  const MultitaskDataset data = testutil::random_dataset(gen, 3, 5, 4);
  const Matrix x = testutil::random_matrix(gen, 8, 3);
  std::vector<BoundReport> reports;
  reports.push_back(mkl_bound(std::vector<GramMatrix>{gaussian_gram(x, 1.0),
                                                      gaussian_gram(x, 2.0)}));
  reports.push_back(structured_sparsity_bound(x, {Matrix::identity(3)}));
  reports.push_back(dict_sparsity_bound(data, 2));
  reports.push_back(dict_sharing_bound(data, 2));
  reports.push_back(subspace_bound(data, 2));
  for (const BoundReport& r : reports) {
    double sum = 0.0;
    for (const auto& [name, v] : r.terms) {
      REQUIRE(std::isfinite(v));
      sum += v;
    }
    REQUIRE(r.bound == Approx(sum).margin(1e-12));
    REQUIRE(r.bound >= r.strong - 1e-14);
    REQUIRE(r.strong >= 0.0);
    REQUIRE(r.weak >= 0.0);
    REQUIRE(r.class_count >= 1.0);
  }
}

TEST_CASE("bounds scale linearly with the data") {
  std::mt19937 gen(216);
  const double c = 3.25;
  const MultitaskDataset data = testutil::random_dataset(gen, 2, 5, 3);
  std::vector<Matrix> scaled_tasks;
  for (std::size_t t = 0; t < 2; ++t) {
    Matrix m = data.task(t);
    for (std::size_t i = 0; i < m.rows(); ++i)
      for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) *= c;
    scaled_tasks.push_back(std::move(m));
  }
  const MultitaskDataset scaled(std::move(scaled_tasks));
  REQUIRE(dict_sparsity_bound(scaled, 2).bound ==
          Approx(c * dict_sparsity_bound(data, 2).bound).margin(1e-10));
  REQUIRE(dict_sharing_bound(scaled, 2).bound ==
          Approx(c * dict_sharing_bound(data, 2).bound).margin(1e-10));
  REQUIRE(subspace_bound(scaled, 2, 0.7).bound ==
          Approx(c * subspace_bound(data, 2, 0.7).bound).margin(1e-10));

  const Matrix x = data.pooled();
  Matrix xs = x;
  for (std::size_t i = 0; i < xs.rows(); ++i)
    for (std::size_t j = 0; j < xs.cols(); ++j) xs(i, j) *= c;
  REQUIRE(structured_sparsity_bound(xs, {Matrix::identity(3)}).bound ==
          Approx(c * structured_sparsity_bound(x, {Matrix::identity(3)}).bound)
              .margin(1e-10));
}

TEST_CASE("gaussian variant never exceeds the rademacher bound") {
  std::mt19937 gen(217);
  const MultitaskDataset data = testutil::random_dataset(gen, 3, 5, 4);
  const BoundReport r1 = dict_sparsity_bound(data, 2);
  const BoundReport g1 = dict_sparsity_bound(data, 2, Variant::gaussian);
  REQUIRE(g1.strong == Approx(r1.strong).margin(1e-13));
  REQUIRE(named(g1.terms, "weak") == Approx(0.5 * named(r1.terms, "weak")).margin(1e-13));
  const BoundReport r2 = dict_sharing_bound(data, 2);
  const BoundReport g2 = dict_sharing_bound(data, 2, Variant::gaussian);
  REQUIRE(named(g2.terms, "weak") == Approx(0.5 * named(r2.terms, "weak")).margin(1e-13));
  const BoundReport r3 = subspace_bound(data, 2, 0.5);
  const BoundReport g3 = subspace_bound(data, 2, 0.5, Variant::gaussian);
  REQUIRE(named(g3.terms, "weak") == Approx(0.5 * named(r3.terms, "weak")).margin(1e-13));
  REQUIRE(named(g3.terms, "covering") == Approx(named(r3.terms, "covering")).margin(1e-13));
}

TEST_CASE("generalization gap pinned value") {
  // delta = 2 / e^2 makes ln(2/delta) = 2 and n = 9 turns the tail into 1
  const double gap = generalization_gap(3.0, 9, 2.0 / std::exp(2.0));
  REQUIRE(gap == Approx(4.0).margin(1e-13));
}

TEST_CASE("generalization gap arithmetic and validation") {
  const double r = 0.8, delta = 0.05;
  const double expected = r + 3.0 * std::sqrt(std::log(2.0 / delta) / (2.0 * 100.0));
  REQUIRE(generalization_gap(r, 100, delta) == Approx(expected).margin(1e-14));
  REQUIRE_THROWS_AS(generalization_gap(r, 100, 0.0), invalid_input);
  REQUIRE_THROWS_AS(generalization_gap(r, 100, 1.0), invalid_input);
  REQUIRE_THROWS_AS(generalization_gap(r, 0, 0.5), invalid_input);
}

TEST_CASE("expected lambda bound pinned value") {
  // lambda = 1/d with n = d: sqrt(1/d) + 4 sqrt((ln d + 1) / d)
  const std::size_t d = 16;
  const double got = expected_lambda_bound(1.0 / 16.0, d, d);
  const double expected =
      std::sqrt(1.0 / 16.0) + 4.0 * std::sqrt((std::log(16.0) + 1.0) / 16.0);
  REQUIRE(got == Approx(expected).margin(1e-13));
}

TEST_CASE("expected lambda bound follows the stated formula") {
  const double lambda = 0.37;
  const std::size_t n = 40, dim = 100;
  // min(dim, n) enters the log factor
  const double expected =
      std::sqrt(lambda) + 4.0 * std::sqrt((std::log(40.0) + 1.0) / 40.0);
  REQUIRE(expected_lambda_bound(lambda, n, dim) == Approx(expected).margin(1e-13));
  const double small_dim =
      std::sqrt(lambda) + 4.0 * std::sqrt((std::log(5.0) + 1.0) / 40.0);
  REQUIRE(expected_lambda_bound(lambda, n, 5) == Approx(small_dim).margin(1e-13));
  REQUIRE_THROWS_AS(expected_lambda_bound(-1.0, 10, 5), invalid_input);
  REQUIRE_THROWS_AS(expected_lambda_bound(1.0, 0, 5), invalid_input);
}

TEST_CASE("bound lambda_max agrees with an independent power iteration") {
  std::mt19937 gen(218);
  const MultitaskDataset data = testutil::random_dataset(gen, 2, 8, 4);
  const BoundReport r = dict_sharing_bound(data, 2);
  // reassemble the pooled covariance and take its top eigenvalue without the
  // library eigensolver
  const Matrix pooled = data.pooled();
  Matrix c(4, 4);
  for (std::size_t a = 0; a < 4; ++a)
    for (std::size_t b = 0; b < 4; ++b) {
      double acc = 0.0;
      for (std::size_t i = 0; i < pooled.rows(); ++i) acc += pooled(i, a) * pooled(i, b);
      c(a, b) = acc / static_cast<double>(pooled.rows());
    }
  const double lambda = testutil::power_lambda_max(c);
  const double weak =
      8.0 * std::sqrt(lambda * (std::log(2.0) + std::log(2.0) / 2.0) / 8.0);
  REQUIRE(named(r.terms, "weak") == Approx(weak).epsilon(1e-9));
  REQUIRE(r.weak == Approx(std::sqrt(lambda)).epsilon(1e-9));
}
