#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <memory>
#include <vector>

#include "radbound/dataset.hpp"
#include "radbound/errors.hpp"
#include "radbound/oracles.hpp"
#include "radbound/rng.hpp"

namespace radbound {

// Monte Carlo estimate of a normalized complexity. `mean` carries the
// 2/(n*T) normalizer; `std_error` is the sample standard deviation of the
// *raw* supremum draws divided by sqrt(trials), so a normalized confidence
// radius is std_error * normalizer.
struct RademacherEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t trials = 0;
  std::uint64_t seed = 0;
  Variant variant = Variant::rademacher;
  double normalizer = 0.0;
};

// Lower/upper estimates from one shared stream of draws. For exact oracles
// the two sides coincide; for bracketed oracles (subspace) they straddle the
// true complexity.
struct ComplexityEstimate {
  RademacherEstimate lower;
  RademacherEstimate upper;
  bool bracketed = false;
};

namespace detail {

struct RunningMoments {
  long double sum = 0.0L;
  long double sum_sq = 0.0L;

  void add(double x) {
    sum += x;
    sum_sq += static_cast<long double>(x) * x;
  }

  [[nodiscard]] RademacherEstimate finish(std::size_t trials, std::uint64_t seed,
                                          Variant variant, double normalizer) const {
    RademacherEstimate e;
    e.trials = trials;
    e.seed = seed;
    e.variant = variant;
    e.normalizer = normalizer;
    const long double n = static_cast<long double>(trials);
    const long double mean_raw = sum / n;
    e.mean = static_cast<double>(mean_raw) * normalizer;
    if (trials > 1) {
      long double var = (sum_sq - n * mean_raw * mean_raw) / (n - 1.0L);
      if (var < 0.0L) var = 0.0L;
      e.std_error = static_cast<double>(std::sqrt(static_cast<double>(var)) /
                                        std::sqrt(static_cast<double>(trials)));
    }
    return e;
  }
};

inline void fill_trial(const CounterRng& rng, Variant variant, std::span<double> out) {
  if (variant == Variant::gaussian)
    rng.fill_normals(out);
  else
    rng.fill_signs(out);
}

}  // namespace detail

// Estimates the normalized complexity (2/(nT)) E sup by averaging the family
// oracle over `trials` independent draws. Trial j always sees the draws of
// counter stream j, so results are bit-identical for a given
// (oracle, trials, seed, variant) regardless of batching.
[[nodiscard]] inline ComplexityEstimate estimate_complexity(const SupOracle& oracle,
                                                            std::size_t trials,
                                                            std::uint64_t seed,
                                                            Variant variant = Variant::rademacher) {
  if (trials == 0) throw invalid_input("estimate_complexity: need at least one trial");
  const std::size_t n = oracle.sign_count();
  const double normalizer = 2.0 / static_cast<double>(n);

  const std::size_t block = std::clamp<std::size_t>(std::size_t{65536} / std::max<std::size_t>(n, 1),
                                                    1, 256);
  std::vector<double> signs(block * n);
  std::vector<double> values(block), uppers(block);

  detail::RunningMoments lower_m, upper_m;
  std::size_t done = 0;
  while (done < trials) {
    const std::size_t count = std::min(block, trials - done);
    for (std::size_t c = 0; c < count; ++c)
      detail::fill_trial(CounterRng(seed, done + c), variant,
                         {signs.data() + c * n, n});
    oracle.evaluate_batch(signs.data(), count, values.data(), uppers.data());
    for (std::size_t c = 0; c < count; ++c) {
      lower_m.add(values[c]);
      upper_m.add(uppers[c]);
    }
    done += count;
  }

  ComplexityEstimate out;
  out.lower = lower_m.finish(trials, seed, variant, normalizer);
  out.upper = upper_m.finish(trials, seed, variant, normalizer);
  out.bracketed = !oracle.exact();
  return out;
}

[[nodiscard]] inline ComplexityEstimate estimate_complexity(
    const ClassSpec& spec, const MultitaskDataset& data, std::size_t trials, std::uint64_t seed,
    Variant variant = Variant::rademacher, const OracleOptions& options = {}) {
  return estimate_complexity(*make_oracle(spec, data, options), trials, seed, variant);
}

// Raw supremum draws F(eps_1), ..., F(eps_trials) (not normalized), for tail
// diagnostics. Trial j sees counter stream j of `seed`.
[[nodiscard]] inline std::vector<double> sample_sup_distribution(
    const SupOracle& oracle, std::size_t trials, std::uint64_t seed,
    Variant variant = Variant::rademacher) {
  if (trials == 0) throw invalid_input("sample_sup_distribution: need at least one trial");
  const std::size_t n = oracle.sign_count();
  std::vector<double> signs(n);
  std::vector<double> out(trials);
  for (std::size_t t = 0; t < trials; ++t) {
    detail::fill_trial(CounterRng(seed, t), variant, signs);
    out[t] = oracle.evaluate(signs).value;
  }
  return out;
}

[[nodiscard]] inline std::vector<double> sample_sup_distribution(
    const ClassSpec& spec, const MultitaskDataset& data, std::size_t trials, std::uint64_t seed,
    Variant variant = Variant::rademacher, const OracleOptions& options = {}) {
  return sample_sup_distribution(*make_oracle(spec, data, options), trials, seed, variant);
}

}  // namespace radbound
