#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "radbound/errors.hpp"
#include "radbound/matrix.hpp"
#include "radbound/mc.hpp"
#include "radbound/oracles.hpp"
#include "radbound/quadrature.hpp"
#include "radbound/rng.hpp"

namespace radbound {

// Empirical vs theoretical tail curve for Pr{F > mean(F) + s} on a fixed
// s grid. A grid point violates when the empirical tail exceeds the curve by
// more than the binomial slack.
struct TailCheckReport {
  std::vector<double> s_grid;
  std::vector<double> empirical_tail;
  std::vector<double> theoretical_tail;
  std::vector<double> slack;
  std::size_t trials = 0;
  std::size_t violations = 0;
  double scale = 0.0;  // grid spans [0.1*scale, 4*scale]
  double sample_mean = 0.0;
  Variant variant = Variant::rademacher;
  std::string slack_rule;
};

namespace detail {

inline constexpr std::size_t tail_grid_points = 32;

// Builds the 32-point report. `curve` maps s to the theoretical tail bound.
template <class Curve>
[[nodiscard]] TailCheckReport make_tail_report(std::span<const double> samples, double scale,
                                               Curve&& curve, Variant variant) {
  if (samples.empty()) throw invalid_input("tail check: no samples");
  if (!all_finite(samples)) throw invalid_input("tail check: non-finite sample");
  if (!(scale > 0.0)) throw invalid_input("tail check: scale must be positive");

  TailCheckReport r;
  r.trials = samples.size();
  r.scale = scale;
  r.variant = variant;
  r.slack_rule = "4*sqrt(p*(1-p)/trials) + 1/trials";

  long double acc = 0.0L;
  for (double x : samples) acc += x;
  r.sample_mean = static_cast<double>(acc / static_cast<long double>(samples.size()));

  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());

  const double n = static_cast<double>(samples.size());
  for (std::size_t j = 0; j < tail_grid_points; ++j) {
    const double s =
        scale * (0.1 + (4.0 - 0.1) * static_cast<double>(j) /
                           static_cast<double>(tail_grid_points - 1));
    const auto it = std::upper_bound(sorted.begin(), sorted.end(), r.sample_mean + s);
    const double p = static_cast<double>(sorted.end() - it) / n;
    const double t = curve(s);
    const double sl = 4.0 * std::sqrt(p * (1.0 - p) / n) + 1.0 / n;
    r.s_grid.push_back(s);
    r.empirical_tail.push_back(p);
    r.theoretical_tail.push_back(t);
    r.slack.push_back(sl);
    if (p > t + sl) ++r.violations;
  }
  return r;
}

// Constant-sample degenerate case: empty grid, nothing to violate.
[[nodiscard]] inline TailCheckReport constant_tail_report(std::span<const double> samples,
                                                          Variant variant) {
  TailCheckReport r;
  r.trials = samples.size();
  r.variant = variant;
  r.slack_rule = "degenerate: constant samples, empty grid";
  long double acc = 0.0L;
  for (double x : samples) acc += x;
  r.sample_mean = static_cast<double>(acc / static_cast<long double>(samples.size()));
  return r;
}

}  // namespace detail

// Tail check for a supremum F(eps) = sup_{z in A} <eps, z> against the
// subgaussian curve exp(-s^2/(8 v^2)) (sign vectors) or exp(-s^2/(2 v^2))
// (normal vectors), v = sup_{z in A} ||z||.
[[nodiscard]] inline TailCheckReport tail_check_supremum(std::span<const double> samples,
                                                         double sup_norm, Variant variant) {
  if (!(sup_norm > 0.0)) throw invalid_input("tail_check_supremum: sup_norm must be positive");
  const double denom = variant == Variant::gaussian ? 2.0 : 8.0;
  auto report = detail::make_tail_report(
      samples, sup_norm, [&](double s) { return std::exp(-s * s / (denom * sup_norm * sup_norm)); },
      variant);
  // The normal-variant curve is pointwise below the sign-variant curve at
  // equal v; a failure here means the curve wiring broke.
  for (double s : report.s_grid) {
    const double g = std::exp(-s * s / (2.0 * sup_norm * sup_norm));
    const double rad = std::exp(-s * s / (8.0 * sup_norm * sup_norm));
    if (g > rad) throw numeric_failure("tail_check_supremum: curve ordering violated");
  }
  return report;
}

// A real function of n independently sampled coordinates.
struct ProductFunction {
  std::size_t coordinates = 0;
  std::function<double(std::span<const double>)> f;
};

// Draws coordinate values; must depend only on (rng, position) so that the
// whole harness stays deterministic and replayable.
using CoordinateSampler = std::function<double(const CounterRng&, std::uint64_t)>;

struct BoundedDifferenceOptions {
  // Closed-form functionals when the caller knows them; otherwise estimated
  // by coordinate resampling on probe points.
  std::optional<double> a_squared;
  std::optional<double> b_squared;
  std::size_t probe_points = 64;
  std::size_t probe_resamples = 64;
};

struct BoundedDifferenceReport {
  TailCheckReport range_part;  // Pr{F > EF + s} <= exp(-2 s^2 / A^2)
  TailCheckReport drop_part;   // Pr{F > EF + s} <= exp(-s^2 / (2 B^2))
  double a_squared = 0.0;
  double b_squared = 0.0;
};

// Tail checks for functions of independent variables with the functionals
//   A^2 = sup_x sum_k (sup_k F - inf_k F)^2,
//   B^2 = sup_x sum_k (F - inf_k F)^2,
// estimated (unless supplied) as maxima over probe points with per-coordinate
// resampling. Trial t draws coordinates at stream t; probe p at stream
// trials + p, base coordinates at positions 0..n-1 and the r-th resample of
// coordinate k at position n + k*R + r.
[[nodiscard]] inline BoundedDifferenceReport bounded_difference_check(
    const ProductFunction& fn, const CoordinateSampler& sampler, std::size_t trials,
    std::uint64_t seed, const BoundedDifferenceOptions& options = {}) {
  if (fn.coordinates == 0) throw invalid_input("bounded_difference_check: no coordinates");
  if (!fn.f) throw invalid_input("bounded_difference_check: missing function");
  if (!sampler) throw invalid_input("bounded_difference_check: missing sampler");
  if (trials == 0) throw invalid_input("bounded_difference_check: need at least one trial");
  const std::size_t n = fn.coordinates;

  std::vector<double> x(n);
  std::vector<double> samples(trials);
  for (std::size_t t = 0; t < trials; ++t) {
    const CounterRng rng(seed, t);
    for (std::size_t k = 0; k < n; ++k) x[k] = sampler(rng, k);
    samples[t] = fn.f(x);
  }
  if (!all_finite(samples)) throw invalid_input("bounded_difference_check: non-finite value");

  double a2 = options.a_squared.value_or(0.0);
  double b2 = options.b_squared.value_or(0.0);
  if (!options.a_squared || !options.b_squared) {
    const std::size_t resamples = std::max<std::size_t>(options.probe_resamples, 1);
    double a2_probe = 0.0, b2_probe = 0.0;
    for (std::size_t p = 0; p < std::max<std::size_t>(options.probe_points, 1); ++p) {
      const CounterRng rng(seed, trials + p);
      for (std::size_t k = 0; k < n; ++k) x[k] = sampler(rng, k);
      const double base = fn.f(x);
      double range_sum = 0.0, drop_sum = 0.0;
      for (std::size_t k = 0; k < n; ++k) {
        const double keep = x[k];
        double lo = base, hi = base;
        for (std::size_t r = 0; r < resamples; ++r) {
          x[k] = sampler(rng, n + k * resamples + r);
          const double v = fn.f(x);
          lo = std::min(lo, v);
          hi = std::max(hi, v);
        }
        x[k] = keep;
        range_sum += (hi - lo) * (hi - lo);
        drop_sum += (base - lo) * (base - lo);
      }
      a2_probe = std::max(a2_probe, range_sum);
      b2_probe = std::max(b2_probe, drop_sum);
    }
    if (!options.a_squared) a2 = a2_probe;
    if (!options.b_squared) b2 = b2_probe;
  }

  BoundedDifferenceReport out;
  out.a_squared = a2;
  out.b_squared = b2;
  const auto [min_it, max_it] = std::minmax_element(samples.begin(), samples.end());
  const bool constant = *min_it == *max_it;
  if (a2 <= 0.0 || b2 <= 0.0) {
    if (!constant)
      throw invalid_input("bounded_difference_check: zero functional with varying samples");
    out.range_part = detail::constant_tail_report(samples, Variant::rademacher);
    out.drop_part = out.range_part;
    return out;
  }
  const double a = std::sqrt(a2), b = std::sqrt(b2);
  out.range_part = detail::make_tail_report(
      samples, a / 2.0, [&](double s) { return std::exp(-2.0 * s * s / a2); },
      Variant::rademacher);
  out.drop_part = detail::make_tail_report(
      samples, b, [&](double s) { return std::exp(-s * s / (2.0 * b2)); }, Variant::rademacher);
  return out;
}

// Tail check for a Lipschitz function of an n-dimensional standard normal
// vector against exp(-s^2 / (2 L^2)). The declared constant is probed on
// 10^3 random pairs first; a falsifying pair rejects the call.
[[nodiscard]] inline TailCheckReport gaussian_lipschitz_check(
    const std::function<double(std::span<const double>)>& f, std::size_t n, double lipschitz,
    std::size_t trials, std::uint64_t seed) {
  if (!f) throw invalid_input("gaussian_lipschitz_check: missing function");
  if (n == 0) throw invalid_input("gaussian_lipschitz_check: zero dimension");
  if (!(lipschitz > 0.0)) throw invalid_input("gaussian_lipschitz_check: constant must be positive");
  if (trials == 0) throw invalid_input("gaussian_lipschitz_check: need at least one trial");

  std::vector<double> x(n), y(n);
  for (std::size_t p = 0; p < 1000; ++p) {
    const CounterRng rng(seed, trials + p);
    for (std::size_t k = 0; k < n; ++k) {
      x[k] = rng.normal(k);
      y[k] = rng.normal(n + k);
    }
    double dist_sq = 0.0;
    for (std::size_t k = 0; k < n; ++k) dist_sq += (x[k] - y[k]) * (x[k] - y[k]);
    const double allowed = lipschitz * std::sqrt(dist_sq);
    if (std::abs(f(x) - f(y)) > allowed + 1e-9 * (1.0 + allowed))
      throw invalid_input("gaussian_lipschitz_check: declared constant falsified on a probe pair");
  }

  std::vector<double> samples(trials);
  for (std::size_t t = 0; t < trials; ++t) {
    CounterRng(seed, t).fill_normals(x);
    samples[t] = f(x);
  }
  if (!all_finite(samples)) throw invalid_input("gaussian_lipschitz_check: non-finite value");
  return detail::make_tail_report(
      samples, lipschitz,
      [&](double s) { return std::exp(-s * s / (2.0 * lipschitz * lipschitz)); },
      Variant::gaussian);
}

struct TraceCheckReport {
  double empirical_mean = 0.0;
  double mean_std_error = 0.0;
  double mean_bound = 0.0;  // sqrt(n * trace)
  double second_moment = 0.0;
  double second_moment_std_error = 0.0;
  double second_moment_target = 0.0;  // n * trace, matched exactly in expectation
  bool mean_pass = false;
  bool second_moment_pass = false;
  bool pass = false;
  std::size_t trials = 0;
};

// Checks E||sum_i eps_i x_i|| <= sqrt(n * trace) (3 standard errors of head
// room) and the exact identity E||sum_i eps_i x_i||^2 = n * trace (within 4).
[[nodiscard]] inline TraceCheckReport trace_inequality_check(const Matrix& data,
                                                             std::size_t trials,
                                                             std::uint64_t seed) {
  if (data.rows() == 0 || data.cols() == 0)
    throw invalid_input("trace_inequality_check: empty data");
  require_finite(data, "trace_inequality_check");
  if (trials < 2) throw invalid_input("trace_inequality_check: need at least two trials");
  const std::size_t n = data.rows(), d = data.cols();

  double trace = 0.0;
  for (std::size_t i = 0; i < n; ++i) trace += squared_norm(data.row(i));
  trace /= static_cast<double>(n);

  detail::RunningMoments norm_m, sq_m;
  std::vector<double> signs(n), u(d);
  for (std::size_t t = 0; t < trials; ++t) {
    CounterRng(seed, t).fill_signs(signs);
    std::fill(u.begin(), u.end(), 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      const auto row = data.row(i);
      for (std::size_t j = 0; j < d; ++j) u[j] += signs[i] * row[j];
    }
    const double sq = squared_norm(u);
    norm_m.add(std::sqrt(sq));
    sq_m.add(sq);
  }

  const RademacherEstimate mean_e = norm_m.finish(trials, seed, Variant::rademacher, 1.0);
  const RademacherEstimate sq_e = sq_m.finish(trials, seed, Variant::rademacher, 1.0);
  TraceCheckReport r;
  r.trials = trials;
  r.empirical_mean = mean_e.mean;
  r.mean_std_error = mean_e.std_error;
  r.mean_bound = std::sqrt(static_cast<double>(n) * trace);
  r.second_moment = sq_e.mean;
  r.second_moment_std_error = sq_e.std_error;
  r.second_moment_target = static_cast<double>(n) * trace;
  r.mean_pass = r.empirical_mean <= r.mean_bound + 3.0 * r.mean_std_error;
  r.second_moment_pass =
      std::abs(r.second_moment - r.second_moment_target) <= 4.0 * r.second_moment_std_error;
  r.pass = r.mean_pass && r.second_moment_pass;
  return r;
}

enum class CheckMode { exact, monte_carlo };

struct LemmaCheckReport {
  double union_expectation = 0.0;
  double max_class_expectation = 0.0;
  std::vector<double> class_expectations;
  double sup_norm = 0.0;
  double slack_term = 0.0;  // c * sup_norm * sqrt(ln M)
  double margin = 0.0;      // right side minus left side
  double stat_slack = 0.0;  // tolerance granted before declaring a violation
  bool pass = false;
  bool small_class_count = false;  // fewer than 4 classes: stated bound not covered
  std::size_t class_count = 0;
  std::size_t trials = 0;
  Variant variant = Variant::rademacher;
  CheckMode mode = CheckMode::exact;
};

// Verifies E sup over the union of finite sets against
// max_m E sup_{A_m} + c * v * sqrt(ln M), the inequality every union bound
// in the library leans on. Exact mode enumerates all sign vectors (sign
// variant) or integrates on a tensor quadrature grid with an exact innermost
// coordinate (normal variant); MC mode uses shared draws with a 3 standard
// error allowance.
[[nodiscard]] inline LemmaCheckReport lemma_main_check(const std::vector<Matrix>& sets,
                                                       CheckMode mode,
                                                       Variant variant = Variant::rademacher,
                                                       std::size_t trials = 100000,
                                                       std::uint64_t seed = 1,
                                                       const Budget& budget = {},
                                                       std::size_t quadrature_nodes = 200) {
  if (sets.empty()) throw invalid_input("lemma_main_check: no sets");
  const std::size_t n = sets.front().cols();
  if (n == 0) throw invalid_input("lemma_main_check: zero dimension");
  std::size_t total_points = 0;
  for (const Matrix& s : sets) {
    if (s.rows() == 0) throw invalid_input("lemma_main_check: empty set");
    if (s.cols() != n) throw invalid_input("lemma_main_check: sets must share one dimension");
    require_finite(s, "lemma_main_check");
    total_points += s.rows();
  }

  LemmaCheckReport r;
  r.class_count = sets.size();
  r.variant = variant;
  r.mode = mode;
  r.small_class_count = sets.size() < 4;
  for (const Matrix& s : sets)
    for (std::size_t i = 0; i < s.rows(); ++i) r.sup_norm = std::max(r.sup_norm, norm(s.row(i)));
  const double c = variant == Variant::gaussian ? 2.0 : 4.0;
  r.slack_term = c * r.sup_norm * std::sqrt(std::log(static_cast<double>(sets.size())));

  const std::size_t m = sets.size();
  if (mode == CheckMode::exact && variant == Variant::rademacher) {
    if (n >= 63 || (1ull << n) > static_cast<std::uint64_t>(budget.max_evaluations))
      throw resource_limit("lemma_main_check: sign enumeration exceeds budget");
    // Gray-code walk: one sign flip per step, dot products updated in place.
    std::vector<double> dots(total_points, 0.0);
    std::vector<std::size_t> first(m + 1, 0);
    Matrix flat(total_points, n);
    {
      std::size_t row = 0;
      for (std::size_t s = 0; s < m; ++s) {
        first[s] = row;
        for (std::size_t i = 0; i < sets[s].rows(); ++i, ++row)
          for (std::size_t j = 0; j < n; ++j) flat(row, j) = sets[s](i, j);
      }
      first[m] = row;
    }
    std::vector<double> signs(n, 1.0);
    for (std::size_t p = 0; p < total_points; ++p) {
      double acc = 0.0;
      for (std::size_t j = 0; j < n; ++j) acc += flat(p, j);
      dots[p] = acc;
    }
    std::vector<long double> class_sum(m, 0.0L);
    long double union_sum = 0.0L;
    const std::uint64_t steps = 1ull << n;
    for (std::uint64_t i = 0;;) {
      double union_max = -std::numeric_limits<double>::infinity();
      for (std::size_t s = 0; s < m; ++s) {
        double best = dots[first[s]];
        for (std::size_t p = first[s] + 1; p < first[s + 1]; ++p) best = std::max(best, dots[p]);
        class_sum[s] += best;
        union_max = std::max(union_max, best);
      }
      union_sum += union_max;
      if (++i == steps) break;
      const std::size_t j = static_cast<std::size_t>(std::countr_zero(i));
      signs[j] = -signs[j];
      const double delta = 2.0 * signs[j];
      for (std::size_t p = 0; p < total_points; ++p) dots[p] += delta * flat(p, j);
    }
    const long double denom = static_cast<long double>(steps);
    for (std::size_t s = 0; s < m; ++s)
      r.class_expectations.push_back(static_cast<double>(class_sum[s] / denom));
    r.union_expectation = static_cast<double>(union_sum / denom);
    r.trials = 0;
  } else if (mode == CheckMode::exact) {
    const SetExpectations e = gaussian_set_expectation(sets, quadrature_nodes, budget);
    r.class_expectations = e.class_expectations;
    r.union_expectation = e.union_expectation;
    r.trials = 0;
  } else {
    if (trials < 2) throw invalid_input("lemma_main_check: need at least two trials");
    std::vector<detail::RunningMoments> class_m(m);
    detail::RunningMoments union_m;
    std::vector<double> eps(n);
    for (std::size_t t = 0; t < trials; ++t) {
      detail::fill_trial(CounterRng(seed, t), variant, eps);
      double union_max = -std::numeric_limits<double>::infinity();
      for (std::size_t s = 0; s < m; ++s) {
        double best = -std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < sets[s].rows(); ++i)
          best = std::max(best, dot(sets[s].row(i), eps));
        class_m[s].add(best);
        union_max = std::max(union_max, best);
      }
      union_m.add(union_max);
    }
    r.trials = trials;
    const RademacherEstimate ue = union_m.finish(trials, seed, variant, 1.0);
    r.union_expectation = ue.mean;
    double best_mean = 0.0, max_se = 0.0;
    for (std::size_t s = 0; s < m; ++s) {
      const RademacherEstimate ce = class_m[s].finish(trials, seed, variant, 1.0);
      r.class_expectations.push_back(ce.mean);
      if (s == 0 || ce.mean > best_mean) {
        best_mean = ce.mean;
        max_se = ce.std_error;
      }
    }
    r.stat_slack = 3.0 * (ue.std_error + max_se);
  }

  r.max_class_expectation =
      *std::max_element(r.class_expectations.begin(), r.class_expectations.end());
  if (mode == CheckMode::exact)
    r.stat_slack = 1e-12 * std::max(1.0, std::abs(r.union_expectation));
  r.margin = r.max_class_expectation + r.slack_term - r.union_expectation;
  r.pass = r.margin + r.stat_slack >= 0.0;
  return r;
}

}  // namespace radbound
