#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "radbound/dataset.hpp"
#include "radbound/eigen.hpp"
#include "radbound/errors.hpp"
#include "radbound/kernel.hpp"
#include "radbound/matrix.hpp"
#include "radbound/rng.hpp"

namespace radbound {

enum class Family { mkl, projection, dict_sparsity, dict_sharing, subspace };

[[nodiscard]] inline const char* family_name(Family f) {
  switch (f) {
    case Family::mkl: return "mkl";
    case Family::projection: return "projection";
    case Family::dict_sparsity: return "dict_sparsity";
    case Family::dict_sharing: return "dict_sharing";
    case Family::subspace: return "subspace";
  }
  return "unknown";
}

[[nodiscard]] inline Family family_from_name(const std::string& s) {
  if (s == "mkl") return Family::mkl;
  if (s == "projection") return Family::projection;
  if (s == "dict_sparsity") return Family::dict_sparsity;
  if (s == "dict_sharing") return Family::dict_sharing;
  if (s == "subspace") return Family::subspace;
  throw invalid_input("unknown family: " + s);
}

// Which function class to analyze. Only the fields of the chosen family are
// read: grams for mkl, projections for projection, dictionary_size for the
// dictionary and subspace families.
struct ClassSpec {
  Family family = Family::mkl;
  std::vector<GramMatrix> grams;
  std::vector<Matrix> projections;
  std::size_t dictionary_size = 0;
};

// Value of one supremum evaluation. `value` is exact when `exact` is set and
// a certified lower bound otherwise; `upper` is always a certified upper
// bound and equals `value` in the exact case.
struct SupResult {
  double value = 0.0;
  double upper = 0.0;
  bool exact = true;
};

struct Budget {
  std::int64_t max_evaluations = 10'000'000;
};

// ----- mkl ------------------------------------------------------------------

// sup over the union of M kernel-expansion balls: max_m sqrt(eps^T K_m eps),
// using ||sum_i eps_i psi(x_i)||^2 = eps^T K eps.
[[nodiscard]] inline SupResult mkl_sup(std::span<const double> signs,
                                       const std::vector<GramMatrix>& grams) {
  if (grams.empty()) throw invalid_input("mkl_sup: no kernels");
  const std::size_t n = signs.size();
  double best = 0.0;
  for (const GramMatrix& g : grams) {
    if (g.size() != n) throw invalid_input("mkl_sup: gram size does not match sign count");
    double q = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double si = signs[i];
      if (si != 0.0) q += si * dot(g.entries.row(i), signs);
    }
    best = std::max(best, std::sqrt(std::max(q, 0.0)));
  }
  return {best, best, true};
}

// ----- structured sparsity (projection classes) -------------------------------

// sup over the union of projected unit balls: max_m ||P_m u||, u = sum eps_i x_i.
[[nodiscard]] inline SupResult projection_sup(std::span<const double> signs, const Matrix& data,
                                              const std::vector<Matrix>& projections) {
  const std::size_t n = data.rows(), d = data.cols();
  if (signs.size() != n) throw invalid_input("projection_sup: sign count must match samples");
  if (projections.empty()) throw invalid_input("projection_sup: no operators");

  std::vector<double> u(d, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double si = signs[i];
    if (si == 0.0) continue;
    const auto xi = data.row(i);
    for (std::size_t j = 0; j < d; ++j) u[j] += si * xi[j];
  }

  std::vector<double> pu(d);
  double best = 0.0;
  for (const Matrix& p : projections) {
    if (p.rows() != d || p.cols() != d)
      throw invalid_input("projection_sup: operator shape must match data dimension");
    matvec(p, u, pu);
    best = std::max(best, norm(pu));
  }
  return {best, best, true};
}

// ----- dictionary learning ----------------------------------------------------

namespace detail {

// Number of partitions of T items into at most k nonempty unlabeled blocks.
[[nodiscard]] inline double partition_count(std::size_t t, std::size_t k) {
  // Stirling numbers of the second kind, summed over block counts.
  std::vector<double> row(t + 1, 0.0);  // row[j] = S(i, j)
  row[0] = 1.0;
  for (std::size_t i = 1; i <= t; ++i) {
    std::vector<double> next(t + 1, 0.0);
    for (std::size_t j = 1; j <= i; ++j)
      next[j] = row[j - 1] + static_cast<double>(j) * row[j];
    row = std::move(next);
  }
  double total = 0.0;
  for (std::size_t j = 1; j <= std::min(k, t); ++j) total += row[j];
  return total;
}

// Per-task sign sums u_t = sum_i signs[t*n+i] * x_{t,i}, as a T-by-d matrix.
[[nodiscard]] inline Matrix task_sign_sums(std::span<const double> signs,
                                           const MultitaskDataset& data) {
  const std::size_t tc = data.task_count(), n = data.points_per_task(), d = data.dimension();
  if (signs.size() != tc * n)
    throw invalid_input("oracle: sign count must equal tasks * points per task");
  Matrix u(tc, d);
  for (std::size_t t = 0; t < tc; ++t) {
    const Matrix& x = data.task(t);
    auto ut = u.row(t);
    for (std::size_t i = 0; i < n; ++i) {
      const double s = signs[t * n + i];
      if (s == 0.0) continue;
      const auto xi = x.row(i);
      for (std::size_t j = 0; j < d; ++j) ut[j] += s * xi[j];
    }
  }
  return u;
}

// max over sign patterns of || sum_{t in mask} (+/-) u_t ||; the first member's
// sign is fixed to + since negating every sign preserves the norm.
[[nodiscard]] inline double block_max_norm(std::uint32_t mask, const Matrix& u) {
  const std::size_t d = u.cols();
  std::vector<std::size_t> idx;
  for (std::size_t t = 0; t < u.rows(); ++t)
    if (mask & (1u << t)) idx.push_back(t);
  // start from the all-plus pattern
  std::vector<double> s(d, 0.0);
  for (std::size_t t : idx) {
    const auto ut = u.row(t);
    for (std::size_t j = 0; j < d; ++j) s[j] += ut[j];
  }
  const std::size_t free_count = idx.size() - 1;
  double best = norm(s);
  if (free_count == 0) return best;
  // Gray-code walk over the free signs: exactly one flip per step.
  std::vector<int> cur(free_count, 1);
  for (std::uint64_t step = 1; step < (1ull << free_count); ++step) {
    const std::size_t bit = static_cast<std::size_t>(std::countr_zero(step));
    const auto ut = u.row(idx[bit + 1]);
    const double delta = cur[bit] == 1 ? -2.0 : 2.0;
    cur[bit] = -cur[bit];
    for (std::size_t j = 0; j < d; ++j) s[j] += delta * ut[j];
    best = std::max(best, norm(s));
  }
  return best;
}

}  // namespace detail

// sup for the entry-sparsity dictionary class: each task picks one atom and a
// sign, so the supremum is max over task partitions (atoms of a dictionary are
// interchangeable) of the sum of per-block sign-maximized norms.
[[nodiscard]] inline SupResult dict_sparsity_sup(std::span<const double> signs,
                                                 const MultitaskDataset& data, std::size_t k,
                                                 const Budget& budget = {}) {
  if (k == 0) throw invalid_input("dict_sparsity_sup: dictionary size must be positive");
  const std::size_t tc = data.task_count();
  if (tc > 31) throw resource_limit("dict_sparsity_sup: too many tasks to enumerate");
  const double combos =
      detail::partition_count(tc, k) * std::pow(2.0, static_cast<double>(tc));
  if (combos > static_cast<double>(budget.max_evaluations))
    throw resource_limit("dict_sparsity_sup: enumeration budget exceeded");

  const Matrix u = detail::task_sign_sums(signs, data);

  // Sum of block values is maximized per block, and blocks repeat across
  // partitions, so cache the sign-maximized norm per task subset (skipped for
  // very wide datasets, where the cache itself would dwarf the work).
  std::vector<double> block_value(tc <= 20 ? std::size_t{1} << tc : 0, -1.0);
  const auto block = [&](std::uint32_t mask) {
    if (block_value.empty()) return detail::block_max_norm(mask, u);
    double& v = block_value[mask];
    if (v < 0.0) v = detail::block_max_norm(mask, u);
    return v;
  };

  // Restricted growth strings enumerate partitions into at most k blocks.
  std::vector<std::uint32_t> blocks(tc, 0);
  double best = 0.0;
  const auto recurse = [&](auto&& self, std::size_t t, std::size_t used) -> void {
    if (t == tc) {
      double total = 0.0;
      for (std::size_t b = 0; b < used; ++b) total += block(blocks[b]);
      best = std::max(best, total);
      return;
    }
    const std::size_t limit = std::min(used + 1, k);
    for (std::size_t b = 0; b < limit; ++b) {
      const bool fresh = b == used;
      blocks[b] |= (1u << t);
      self(self, t + 1, fresh ? used + 1 : used);
      blocks[b] &= ~(1u << t);
    }
  };
  recurse(recurse, 0, 0);
  return {best, best, true};
}

// sup for the atom-sharing dictionary class: one sign per task on a shared
// atom, so the supremum is max over v in {+/-1}^T of || sum v_t u_t ||.
[[nodiscard]] inline SupResult dict_sharing_sup(std::span<const double> signs,
                                                const MultitaskDataset& data,
                                                const Budget& budget = {}) {
  const std::size_t tc = data.task_count();
  if (tc > 31 || std::pow(2.0, static_cast<double>(tc)) >
                     static_cast<double>(budget.max_evaluations))
    throw resource_limit("dict_sharing_sup: enumeration budget exceeded");
  const Matrix u = detail::task_sign_sums(signs, data);
  const std::uint32_t all = (1u << tc) - 1u;
  const double best = detail::block_max_norm(all, u);
  return {best, best, true};
}

// ----- subspace norm ----------------------------------------------------------

struct SubspaceOptions {
  std::size_t restarts = 8;    // one spectral init plus random frames
  std::size_t max_iterations = 100;
  double tolerance = 1e-9;     // relative objective change
  bool iterate = true;         // false: stop at the spectral-init objective
  std::uint64_t seed = 0xAB5F2ACEull;  // restart frames are pure functions of this
  // shrinking-radius perturbations of the best frame, each followed by a short
  // ascent; zero rounds disables the polish stage
  std::size_t polish_rounds = 0;
  std::size_t polish_probes = 16;
};

namespace detail {

// Objective sum_t ||V^T u_t|| for an orthonormal frame V (d-by-k columns).
[[nodiscard]] inline double frame_objective(const Matrix& v, const Matrix& u) {
  double total = 0.0;
  for (std::size_t t = 0; t < u.rows(); ++t) {
    const auto ut = u.row(t);
    double s = 0.0;
    for (std::size_t j = 0; j < v.cols(); ++j) {
      double c = 0.0;
      for (std::size_t a = 0; a < v.rows(); ++a) c += v(a, j) * ut[a];
      s += c * c;
    }
    total += std::sqrt(s);
  }
  return total;
}

// Twice-iterated modified Gram-Schmidt; returns false on rank deficiency.
[[nodiscard]] inline bool orthonormalize_columns(Matrix& v) {
  const std::size_t d = v.rows(), k = v.cols();
  for (int pass = 0; pass < 2; ++pass) {
    for (std::size_t j = 0; j < k; ++j) {
      for (std::size_t p = 0; p < j; ++p) {
        double c = 0.0;
        for (std::size_t a = 0; a < d; ++a) c += v(a, p) * v(a, j);
        for (std::size_t a = 0; a < d; ++a) v(a, j) -= c * v(a, p);
      }
      double nn = 0.0;
      for (std::size_t a = 0; a < d; ++a) nn += v(a, j) * v(a, j);
      if (nn < 1e-24) return false;
      const double inv = 1.0 / std::sqrt(nn);
      for (std::size_t a = 0; a < d; ++a) v(a, j) *= inv;
    }
  }
  return true;
}

}  // namespace detail

// Bracket for the subspace-class supremum sup_{dim S = k} sum_t ||P_S u_t||.
// Exact when k = d (value sum_t ||u_t||) or T = 1 (value ||u_1||); otherwise
// `value` is the best objective found by reweighted eigenspace iteration and
// `upper` combines the Cauchy-Schwarz certificate sqrt(T * top-k eigenvalue
// sum of sum_t u_t u_t^T) with the projection contraction sum_t ||u_t||.
[[nodiscard]] inline SupResult subspace_sup(std::span<const double> signs,
                                            const MultitaskDataset& data, std::size_t k,
                                            const SubspaceOptions& options = {}) {
  const std::size_t tc = data.task_count(), d = data.dimension();
  if (k == 0 || k > d) throw invalid_input("subspace_sup: need 1 <= k <= dimension");
  const Matrix u = detail::task_sign_sums(signs, data);

  double total_norm = 0.0;
  for (std::size_t t = 0; t < tc; ++t) total_norm += norm(u.row(t));

  Matrix m0(d, d);
  for (std::size_t t = 0; t < tc; ++t) {
    const auto ut = u.row(t);
    for (std::size_t a = 0; a < d; ++a)
      for (std::size_t b = a; b < d; ++b) m0(a, b) += ut[a] * ut[b];
  }
  for (std::size_t a = 0; a < d; ++a)
    for (std::size_t b = a; b < d; ++b) m0(b, a) = m0(a, b);

  const EigenDecomposition em0 = sym_eigen(m0);
  double topk = 0.0;
  for (std::size_t j = 0; j < std::min(k, em0.values.size()); ++j)
    topk += std::max(em0.values[j], 0.0);
  const double upper = std::min(std::sqrt(static_cast<double>(tc) * topk), total_norm);

  if (k == d || tc == 1 || upper == 0.0) {
    const double v = k == d ? total_norm : (tc == 1 ? norm(u.row(0)) : 0.0);
    return {v, v, true};
  }

  // Frame from the top-k eigenvectors of a weighting matrix.
  const auto top_frame = [&](const EigenDecomposition& e) {
    Matrix v(d, k);
    for (std::size_t j = 0; j < k; ++j)
      for (std::size_t a = 0; a < d; ++a) v(a, j) = e.vectors(a, j);
    return v;
  };

  // Reweighted eigenspace ascent from `v`; leaves `v` at the best frame seen
  // and returns its objective.
  const auto ascend = [&](Matrix& v, std::size_t iterations) {
    double obj = detail::frame_objective(v, u);
    Matrix held = v;
    double held_obj = obj;
    for (std::size_t it = 0; it < iterations; ++it) {
      Matrix mw(d, d);
      for (std::size_t t = 0; t < tc; ++t) {
        const auto ut = u.row(t);
        double s = 0.0;
        for (std::size_t j = 0; j < k; ++j) {
          double c = 0.0;
          for (std::size_t a = 0; a < d; ++a) c += v(a, j) * ut[a];
          s += c * c;
        }
        const double w = 1.0 / std::max(std::sqrt(s), 1e-12);
        for (std::size_t a = 0; a < d; ++a)
          for (std::size_t b = a; b < d; ++b) mw(a, b) += w * ut[a] * ut[b];
      }
      for (std::size_t a = 0; a < d; ++a)
        for (std::size_t b = a; b < d; ++b) mw(b, a) = mw(a, b);
      v = top_frame(sym_eigen(mw));
      const double next = detail::frame_objective(v, u);
      if (next > held_obj) {
        held = v;
        held_obj = next;
      }
      if (std::abs(next - obj) <= options.tolerance * std::max(1.0, std::abs(next))) break;
      obj = next;
    }
    v = held;
    return held_obj;
  };

  double best = 0.0;
  Matrix best_v(d, k);
  const CounterRng rng(options.seed);
  std::uint64_t draw = 0;
  for (std::size_t r = 0; r < std::max<std::size_t>(options.restarts, 1); ++r) {
    Matrix v(d, k);
    if (r == 0) {
      v = top_frame(em0);
    } else {
      bool ok = false;
      while (!ok) {
        for (std::size_t a = 0; a < d; ++a)
          for (std::size_t j = 0; j < k; ++j) v(a, j) = rng.normal(draw++);
        ok = detail::orthonormalize_columns(v);
      }
    }
    const double obj = options.iterate ? ascend(v, options.max_iterations)
                                       : detail::frame_objective(v, u);
    if (obj > best) {
      best = obj;
      best_v = v;
    }
  }

  if (options.iterate && options.polish_rounds > 0 && best > 0.0) {
    double radius = 0.5;
    for (std::size_t round = 0; round < options.polish_rounds; ++round) {
      for (std::size_t probe = 0; probe < options.polish_probes; ++probe) {
        Matrix cand = best_v;
        for (std::size_t a = 0; a < d; ++a)
          for (std::size_t j = 0; j < k; ++j) cand(a, j) += radius * rng.normal(draw++);
        if (!detail::orthonormalize_columns(cand)) continue;
        const double obj = ascend(cand, 12);
        if (obj > best) {
          best = obj;
          best_v = cand;
        }
      }
      radius *= 0.8;
    }
  }
  return {std::min(best, upper), upper, false};
}

// ----- exact expectation ------------------------------------------------------

// Average of `oracle` over all 2^n_total sign vectors.
template <typename F>
[[nodiscard]] double exact_expectation(F&& oracle, std::size_t n_total,
                                       const Budget& budget = {}) {
  if (n_total == 0) throw invalid_input("exact_expectation: empty sign vector");
  if (n_total > 62 || (std::int64_t{1} << n_total) > budget.max_evaluations)
    throw resource_limit("exact_expectation: enumeration budget exceeded");
  std::vector<double> signs(n_total, 1.0);
  long double total = 0.0L;
  const std::uint64_t count = std::uint64_t{1} << n_total;
  total += oracle(std::span<const double>(signs));
  // Gray-code order: flip exactly one coordinate per step.
  for (std::uint64_t step = 1; step < count; ++step) {
    const std::size_t bit = static_cast<std::size_t>(std::countr_zero(step));
    signs[bit] = -signs[bit];
    total += oracle(std::span<const double>(signs));
  }
  return static_cast<double>(total / static_cast<long double>(count));
}

// ----- reusable oracle objects --------------------------------------------------

// A family supremum bound to fixed data, evaluated on sign (or Gaussian)
// vectors. Oracles are immutable after construction and safe to share across
// threads; `evaluate_batch` exists so implementations can amortize work over
// consecutive trial vectors without changing any value.
class SupOracle {
 public:
  virtual ~SupOracle() = default;
  virtual std::size_t sign_count() const = 0;
  // False when evaluations return value < upper brackets instead of one number.
  virtual bool exact() const { return true; }
  virtual SupResult evaluate(std::span<const double> signs) const = 0;
  virtual void evaluate_batch(const double* signs, std::size_t count, double* values,
                              double* uppers) const {
    const std::size_t n = sign_count();
    for (std::size_t c = 0; c < count; ++c) {
      const SupResult r = evaluate({signs + c * n, n});
      values[c] = r.value;
      if (uppers) uppers[c] = r.upper;
    }
  }
};

struct OracleOptions {
  Budget budget;
  SubspaceOptions subspace;
};

namespace detail {

// mkl with per-gram Cholesky factors: eps^T K eps = ||L^T eps||^2, evaluated
// against the stored upper factor so batch rows stream contiguously. A tiny
// diagonal jitter absorbs PSD roundoff; it can only nudge values upward by
// O(sqrt(jitter * n)), far below Monte Carlo resolution.
class MklOracle final : public SupOracle {
 public:
  MklOracle(const std::vector<GramMatrix>& grams, std::size_t n) : n_(n) {
    if (grams.empty()) throw invalid_input("mkl oracle: no kernels");
    const double jitter = 1e-10 * static_cast<double>(n);
    for (const GramMatrix& g : grams) {
      if (g.size() != n_) throw invalid_input("mkl oracle: gram size mismatch");
      require_finite(g.entries, "mkl oracle");
      const Matrix l = cholesky_lower(g.entries, jitter);
      Matrix ut(n_, n_);  // row j holds (L^T)(j, j..n): contiguous dot ranges
      for (std::size_t j = 0; j < n_; ++j)
        for (std::size_t i = j; i < n_; ++i) ut(j, i) = l(i, j);
      factors_.push_back(std::move(ut));
    }
  }

  std::size_t sign_count() const override { return n_; }

  SupResult evaluate(std::span<const double> signs) const override {
    double v = 0.0, u = 0.0;
    evaluate_batch(signs.data(), 1, &v, &u);
    return {v, u, true};
  }

  void evaluate_batch(const double* signs, std::size_t count, double* values,
                      double* uppers) const override {
    for (std::size_t c = 0; c < count; ++c) values[c] = 0.0;
    for (const Matrix& f : factors_) {
      for (std::size_t c = 0; c < count; ++c) {
        const double* eps = signs + c * n_;
        double q = 0.0;
        for (std::size_t j = 0; j < n_; ++j) {
          const double* row = f.data().data() + j * n_ + j;
          double z = 0.0;
          for (std::size_t i = 0; i < n_ - j; ++i) z += row[i] * eps[j + i];
          q += z * z;
        }
        values[c] = std::max(values[c], std::sqrt(q));
      }
    }
    if (uppers)
      for (std::size_t c = 0; c < count; ++c) uppers[c] = values[c];
  }

 private:
  std::size_t n_;
  std::vector<Matrix> factors_;
};

class ProjectionOracle final : public SupOracle {
 public:
  ProjectionOracle(std::vector<Matrix> projections, Matrix data)
      : projections_(std::move(projections)), data_(std::move(data)) {
    const std::size_t d = data_.cols();
    for (const Matrix& p : projections_) {
      if (p.rows() != d || p.cols() != d)
        throw invalid_input("projection oracle: operator shape mismatch");
      require_finite(p, "projection oracle");
      double scale = max_abs(p), asym = 0.0;
      for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = i + 1; j < d; ++j)
          asym = std::max(asym, std::abs(p(i, j) - p(j, i)));
      if (asym > 1e-10 * std::max(scale, 1e-300))
        throw invalid_input("projection oracle: operators must be symmetric");
    }
  }

  std::size_t sign_count() const override { return data_.rows(); }

  SupResult evaluate(std::span<const double> signs) const override {
    return projection_sup(signs, data_, projections_);
  }

 private:
  std::vector<Matrix> projections_;
  Matrix data_;
};

class DictSparsityOracle final : public SupOracle {
 public:
  DictSparsityOracle(MultitaskDataset data, std::size_t k, Budget budget)
      : data_(std::move(data)), k_(k), budget_(budget) {}

  std::size_t sign_count() const override { return data_.total_points(); }

  SupResult evaluate(std::span<const double> signs) const override {
    return dict_sparsity_sup(signs, data_, k_, budget_);
  }

 private:
  MultitaskDataset data_;
  std::size_t k_;
  Budget budget_;
};

class DictSharingOracle final : public SupOracle {
 public:
  DictSharingOracle(MultitaskDataset data, Budget budget)
      : data_(std::move(data)), budget_(budget) {}

  std::size_t sign_count() const override { return data_.total_points(); }

  SupResult evaluate(std::span<const double> signs) const override {
    return dict_sharing_sup(signs, data_, budget_);
  }

 private:
  MultitaskDataset data_;
  Budget budget_;
};

class SubspaceOracle final : public SupOracle {
 public:
  SubspaceOracle(MultitaskDataset data, std::size_t k, SubspaceOptions options)
      : data_(std::move(data)), k_(k), options_(options) {}

  std::size_t sign_count() const override { return data_.total_points(); }

  bool exact() const override { return k_ == data_.dimension() || data_.task_count() == 1; }

  SupResult evaluate(std::span<const double> signs) const override {
    return subspace_sup(signs, data_, k_, options_);
  }

 private:
  MultitaskDataset data_;
  std::size_t k_;
  SubspaceOptions options_;
};

// sup over an explicit finite set of points: F(eps) = max_z <eps, z>.
class FiniteSetOracle final : public SupOracle {
 public:
  explicit FiniteSetOracle(Matrix points) : points_(std::move(points)) {
    if (points_.rows() == 0 || points_.cols() == 0)
      throw invalid_input("finite set oracle: empty point set");
    require_finite(points_, "finite set oracle");
  }

  std::size_t sign_count() const override { return points_.cols(); }

  SupResult evaluate(std::span<const double> signs) const override {
    double best = dot(points_.row(0), signs);
    for (std::size_t z = 1; z < points_.rows(); ++z)
      best = std::max(best, dot(points_.row(z), signs));
    return {best, best, true};
  }

 private:
  Matrix points_;
};

}  // namespace detail

[[nodiscard]] inline std::unique_ptr<SupOracle> make_oracle(const ClassSpec& spec,
                                                            const MultitaskDataset& data,
                                                            const OracleOptions& options = {}) {
  switch (spec.family) {
    case Family::mkl:
      if (data.task_count() != 1)
        throw invalid_input("mkl family expects single-task data");
      return std::make_unique<detail::MklOracle>(spec.grams, data.points_per_task());
    case Family::projection:
      if (data.task_count() != 1)
        throw invalid_input("projection family expects single-task data");
      return std::make_unique<detail::ProjectionOracle>(spec.projections, data.task(0));
    case Family::dict_sparsity:
      return std::make_unique<detail::DictSparsityOracle>(data, spec.dictionary_size,
                                                          options.budget);
    case Family::dict_sharing:
      return std::make_unique<detail::DictSharingOracle>(data, options.budget);
    case Family::subspace:
      return std::make_unique<detail::SubspaceOracle>(data, spec.dictionary_size,
                                                      options.subspace);
  }
  throw invalid_input("make_oracle: unknown family");
}

// sup over an explicit finite set A of points (rows): F(eps) = max_{z in A} <eps, z>.
[[nodiscard]] inline std::unique_ptr<SupOracle> make_finite_set_oracle(Matrix points) {
  return std::make_unique<detail::FiniteSetOracle>(std::move(points));
}

}  // namespace radbound
