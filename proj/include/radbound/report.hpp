#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "radbound/bounds.hpp"
#include "radbound/concentration.hpp"
#include "radbound/covariance.hpp"
#include "radbound/dataset.hpp"
#include "radbound/errors.hpp"
#include "radbound/io.hpp"
#include "radbound/kernel.hpp"
#include "radbound/mc.hpp"
#include "radbound/oracles.hpp"

namespace radbound {

inline constexpr const char* tool_version = "0.1.0";
inline constexpr std::uint64_t default_seed = 1;

struct RunConfig {
  std::string command;  // analyze | verify | mc | kernel-spectrum | conc-check
  std::string input_path;
  std::string output_path = "report.json";
  Family family = Family::mkl;
  std::size_t dictionary_size = 2;  // K for the dictionary and subspace families
  std::size_t class_count = 1;      // M: kernel widths (mkl) or coordinate blocks (projection)
  double sigma = 1.0;
  std::size_t trials = 0;  // 0 = command default: 10^4 estimates, 10^6 tails
  std::uint64_t seed = default_seed;
  Variant variant = Variant::rademacher;
  bool center = false;
  std::optional<double> eta;
  Budget budget;
};

// Incremental JSON emitter with a fixed member order and 17-significant-digit
// doubles, so equal inputs produce byte-identical documents.
class JsonWriter {
 public:
  void begin_object() {
    element_prefix();
    out_ += '{';
    has_element_.push_back(false);
  }
  void end_object() {
    out_ += '}';
    has_element_.pop_back();
  }
  void begin_array() {
    element_prefix();
    out_ += '[';
    has_element_.push_back(false);
  }
  void end_array() {
    out_ += ']';
    has_element_.pop_back();
  }
  void key(std::string_view k) {
    if (has_element_.back()) out_ += ',';
    has_element_.back() = true;
    append_string(k);
    out_ += ':';
    pending_key_ = true;
  }
  void value(double v) {
    element_prefix();
    if (!std::isfinite(v)) throw numeric_failure("report: non-finite value");
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    out_ += buf;
  }
  void value(bool b) {
    element_prefix();
    out_ += b ? "true" : "false";
  }
  void value(std::string_view s) {
    element_prefix();
    append_string(s);
  }
  void value_uint(std::uint64_t v) {
    element_prefix();
    out_ += std::to_string(v);
  }
  void null_value() {
    element_prefix();
    out_ += "null";
  }

  void kv(std::string_view k, double v) {
    key(k);
    value(v);
  }
  void kv(std::string_view k, bool v) {
    key(k);
    value(v);
  }
  void kv(std::string_view k, std::string_view v) {
    key(k);
    value(v);
  }
  void kv_uint(std::string_view k, std::uint64_t v) {
    key(k);
    value_uint(v);
  }

  [[nodiscard]] const std::string& str() const { return out_; }

 private:
  void element_prefix() {
    if (pending_key_) {
      pending_key_ = false;
      return;
    }
    if (!has_element_.empty()) {
      if (has_element_.back()) out_ += ',';
      has_element_.back() = true;
    }
  }

  void append_string(std::string_view s) {
    out_ += '"';
    for (char c : s) {
      switch (c) {
        case '"': out_ += "\\\""; break;
        case '\\': out_ += "\\\\"; break;
        case '\n': out_ += "\\n"; break;
        case '\t': out_ += "\\t"; break;
        case '\r': out_ += "\\r"; break;
        default:
          if (static_cast<unsigned char>(c) < 0x20) {
            char buf[8];
            std::snprintf(buf, sizeof(buf), "\\u%04x", c);
            out_ += buf;
          } else {
            out_ += c;
          }
      }
    }
    out_ += '"';
  }

  std::string out_;
  std::vector<bool> has_element_;
  bool pending_key_ = false;
};

struct AnalysisReport {
  RunConfig config;  // with trials resolved to the value actually used
  std::size_t points_per_task = 0;
  std::size_t task_count = 0;
  std::size_t dimension = 0;
  std::optional<CovarianceSummary> pooled_cov;
  std::vector<CovarianceSummary> task_covs;
  std::vector<CovarianceSummary> class_covs;
  std::optional<BoundReport> bound;
  std::optional<ComplexityEstimate> estimate;
  std::optional<double> slack;            // bound - upper estimate mean
  std::optional<double> slack_threshold;  // 3 * stderr * normalizer
  std::optional<bool> verification_pass;
  std::optional<CovarianceSummary> kernel_summary;
  std::optional<double> kernel_width;
  std::optional<double> min_distance;
  std::optional<double> kernel_lambda_bound;
  std::optional<bool> kernel_bound_holds;
  std::vector<std::pair<std::string, TailCheckReport>> tail_checks;
  std::optional<TraceCheckReport> trace_check;
  bool pass = true;
};

namespace detail {

inline void write_covariance(JsonWriter& w, const CovarianceSummary& s) {
  w.begin_object();
  w.kv_uint("dim", s.dim);
  w.kv("trace", s.trace);
  w.kv("lambda_max", s.lambda_max);
  w.kv_uint("rank", s.rank);
  w.key("spectrum");
  w.begin_array();
  for (double v : s.spectrum) w.value(v);
  w.end_array();
  w.end_object();
}

inline void write_bound(JsonWriter& w, const BoundReport& r) {
  w.begin_object();
  w.kv("family", family_name(r.family));
  w.kv("variant", variant_name(r.variant));
  w.kv_uint("n", r.n);
  w.kv_uint("task_count", r.task_count);
  w.kv("class_count", r.class_count);
  w.kv("strong", r.strong);
  w.kv("weak", r.weak);
  w.kv("bound", r.bound);
  w.key("terms");
  w.begin_object();
  for (const auto& [name, v] : r.terms) w.kv(name, v);
  w.end_object();
  w.key("info");
  w.begin_object();
  for (const auto& [name, v] : r.info) w.kv(name, v);
  w.end_object();
  w.end_object();
}

inline void write_estimate(JsonWriter& w, const RademacherEstimate& e) {
  w.begin_object();
  w.kv("mean", e.mean);
  w.kv("std_error", e.std_error);
  w.kv_uint("trials", e.trials);
  w.kv_uint("seed", e.seed);
  w.kv("variant", variant_name(e.variant));
  w.kv("normalizer", e.normalizer);
  w.end_object();
}

inline void write_tail(JsonWriter& w, const TailCheckReport& t) {
  w.begin_object();
  w.kv_uint("trials", t.trials);
  w.kv("scale", t.scale);
  w.kv("sample_mean", t.sample_mean);
  w.kv("variant", variant_name(t.variant));
  w.kv_uint("violations", t.violations);
  w.kv("slack_rule", t.slack_rule);
  w.key("s_grid");
  w.begin_array();
  for (double v : t.s_grid) w.value(v);
  w.end_array();
  w.key("empirical_tail");
  w.begin_array();
  for (double v : t.empirical_tail) w.value(v);
  w.end_array();
  w.key("theoretical_tail");
  w.begin_array();
  for (double v : t.theoretical_tail) w.value(v);
  w.end_array();
  w.key("slack");
  w.begin_array();
  for (double v : t.slack) w.value(v);
  w.end_array();
  w.end_object();
}

inline void write_trace_check(JsonWriter& w, const TraceCheckReport& t) {
  w.begin_object();
  w.kv("empirical_mean", t.empirical_mean);
  w.kv("mean_std_error", t.mean_std_error);
  w.kv("mean_bound", t.mean_bound);
  w.kv("second_moment", t.second_moment);
  w.kv("second_moment_std_error", t.second_moment_std_error);
  w.kv("second_moment_target", t.second_moment_target);
  w.kv("mean_pass", t.mean_pass);
  w.kv("second_moment_pass", t.second_moment_pass);
  w.kv("pass", t.pass);
  w.kv_uint("trials", t.trials);
  w.end_object();
}

inline void write_config(JsonWriter& w, const RunConfig& c) {
  w.begin_object();
  w.kv("command", c.command);
  w.kv("input", c.input_path);
  w.kv("output", c.output_path);
  w.kv("family", family_name(c.family));
  w.kv_uint("dictionary_size", c.dictionary_size);
  w.kv_uint("class_count", c.class_count);
  w.kv("sigma", c.sigma);
  w.kv_uint("trials", c.trials);
  w.kv_uint("seed", c.seed);
  w.kv("variant", variant_name(c.variant));
  w.kv("center", c.center);
  w.key("eta");
  if (c.eta)
    w.value(*c.eta);
  else
    w.null_value();
  w.kv_uint("budget", static_cast<std::uint64_t>(c.budget.max_evaluations));
  w.end_object();
}

}  // namespace detail

// The deterministic document: same config + same input bytes give the same
// string. The volatile timestamp lives in the separate "meta" object.
[[nodiscard]] inline std::string report_json(const AnalysisReport& r,
                                             const std::string& timestamp) {
  JsonWriter w;
  w.begin_object();
  w.kv_uint("schema_version", 1);
  w.key("report");
  w.begin_object();
  w.kv("tool_version", tool_version);
  w.key("config");
  detail::write_config(w, r.config);
  w.key("dataset");
  w.begin_object();
  w.kv_uint("points_per_task", r.points_per_task);
  w.kv_uint("task_count", r.task_count);
  w.kv_uint("dimension", r.dimension);
  w.end_object();
  if (r.pooled_cov) {
    w.key("pooled_covariance");
    detail::write_covariance(w, *r.pooled_cov);
  }
  if (!r.task_covs.empty()) {
    w.key("task_covariances");
    w.begin_array();
    for (const CovarianceSummary& s : r.task_covs) detail::write_covariance(w, s);
    w.end_array();
  }
  if (!r.class_covs.empty()) {
    w.key("class_covariances");
    w.begin_array();
    for (const CovarianceSummary& s : r.class_covs) detail::write_covariance(w, s);
    w.end_array();
  }
  if (r.bound) {
    w.key("bound");
    detail::write_bound(w, *r.bound);
  }
  if (r.estimate) {
    w.key("estimate");
    w.begin_object();
    w.key("lower");
    detail::write_estimate(w, r.estimate->lower);
    w.key("upper");
    detail::write_estimate(w, r.estimate->upper);
    w.kv("bracketed", r.estimate->bracketed);
    w.end_object();
  }
  if (r.slack) w.kv("slack", *r.slack);
  if (r.slack_threshold) w.kv("slack_threshold", *r.slack_threshold);
  if (r.verification_pass) w.kv("verification_pass", *r.verification_pass);
  if (r.kernel_summary) {
    w.key("kernel");
    w.begin_object();
    w.kv("width", *r.kernel_width);
    w.kv("min_pairwise_distance", *r.min_distance);
    w.kv("lambda_max_bound", *r.kernel_lambda_bound);
    w.kv("lambda_max_bound_holds", *r.kernel_bound_holds);
    w.key("summary");
    detail::write_covariance(w, *r.kernel_summary);
    w.end_object();
  }
  if (!r.tail_checks.empty()) {
    w.key("tail_checks");
    w.begin_object();
    for (const auto& [name, t] : r.tail_checks) {
      w.key(name);
      detail::write_tail(w, t);
    }
    w.end_object();
  }
  if (r.trace_check) {
    w.key("trace_check");
    detail::write_trace_check(w, *r.trace_check);
  }
  w.kv("pass", r.pass);
  w.end_object();
  w.key("meta");
  w.begin_object();
  w.kv("timestamp", timestamp);
  w.end_object();
  w.end_object();
  return w.str();
}

namespace detail {

// M log-spaced kernel widths on [sigma/4, 4*sigma] (just sigma when M = 1).
[[nodiscard]] inline std::vector<double> kernel_width_grid(double sigma, std::size_t m) {
  std::vector<double> widths;
  if (m <= 1) {
    widths.push_back(sigma);
    return widths;
  }
  for (std::size_t i = 0; i < m; ++i)
    widths.push_back(sigma / 4.0 *
                     std::pow(16.0, static_cast<double>(i) / static_cast<double>(m - 1)));
  return widths;
}

// M near-equal contiguous coordinate blocks as diagonal 0/1 operators.
[[nodiscard]] inline std::vector<Matrix> coordinate_block_projections(std::size_t d,
                                                                      std::size_t m) {
  if (m == 0 || m > d)
    throw invalid_input("projection family: class count must lie in [1, dimension]");
  std::vector<Matrix> out;
  for (std::size_t b = 0; b < m; ++b) {
    const std::size_t lo = b * d / m, hi = (b + 1) * d / m;
    Matrix p(d, d);
    for (std::size_t j = lo; j < hi; ++j) p(j, j) = 1.0;
    out.push_back(std::move(p));
  }
  return out;
}

struct FamilySetup {
  ClassSpec spec;
  BoundReport bound;
  std::vector<CovarianceSummary> class_covs;
};

[[nodiscard]] inline FamilySetup build_family(const RunConfig& config,
                                              const MultitaskDataset& data) {
  FamilySetup out;
  out.spec.family = config.family;
  switch (config.family) {
    case Family::mkl: {
      if (data.task_count() != 1) throw invalid_input("mkl family expects single-task data");
      if (!(config.sigma > 0.0)) throw invalid_input("mkl family: sigma must be positive");
      for (double w : kernel_width_grid(config.sigma, config.class_count))
        out.spec.grams.push_back(gaussian_gram(data.task(0), w));
      for (const GramMatrix& g : out.spec.grams) out.class_covs.push_back(kernel_cov_summary(g));
      out.bound = mkl_bound(out.class_covs, data.points_per_task(), config.variant);
      break;
    }
    case Family::projection: {
      if (data.task_count() != 1)
        throw invalid_input("projection family expects single-task data");
      out.spec.projections =
          coordinate_block_projections(data.dimension(), config.class_count);
      out.bound = structured_sparsity_bound(data.task(0), out.spec.projections, config.variant);
      for (const Matrix& p : out.spec.projections) {
        Matrix mapped(data.points_per_task(), data.dimension());
        std::vector<double> y(data.dimension());
        for (std::size_t i = 0; i < data.points_per_task(); ++i) {
          matvec(p, data.task(0).row(i), y);
          for (std::size_t j = 0; j < data.dimension(); ++j) mapped(i, j) = y[j];
        }
        out.class_covs.push_back(covariance(mapped));
      }
      break;
    }
    case Family::dict_sparsity:
      out.spec.dictionary_size = config.dictionary_size;
      out.bound = dict_sparsity_bound(data, config.dictionary_size, config.variant);
      break;
    case Family::dict_sharing:
      out.spec.dictionary_size = config.dictionary_size;
      out.bound = dict_sharing_bound(data, config.dictionary_size, config.variant);
      break;
    case Family::subspace:
      out.spec.dictionary_size = config.dictionary_size;
      out.bound = subspace_bound(data, config.dictionary_size, config.eta, config.variant);
      break;
  }
  return out;
}

[[nodiscard]] inline std::string utc_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw invalid_input("cannot write " + path);
  out << text;
}

// s, empirical_tail, theoretical_tail table next to the JSON report.
inline void write_tail_csv(const std::string& path, const TailCheckReport& t) {
  std::string text = "s,empirical_tail,theoretical_tail\n";
  for (std::size_t i = 0; i < t.s_grid.size(); ++i) {
    text += format_double(t.s_grid[i]);
    text += ',';
    text += format_double(t.empirical_tail[i]);
    text += ',';
    text += format_double(t.theoretical_tail[i]);
    text += '\n';
  }
  write_text_file(path, text);
}

}  // namespace detail

// Executes one command: loads the input, computes what the command asks for,
// writes the JSON report (plus CSV tail tables for conc-check), and returns
// the report. `report.pass` drives the process exit code.
[[nodiscard]] inline AnalysisReport run(const RunConfig& config) {
  AnalysisReport r;
  r.config = config;
  const bool tail_command = config.command == "conc-check";
  if (r.config.trials == 0) r.config.trials = tail_command ? 1000000 : 10000;
  const std::size_t trials = r.config.trials;

  MultitaskDataset data = load_dataset(config.input_path);
  if (config.center) data = data.centered();
  r.points_per_task = data.points_per_task();
  r.task_count = data.task_count();
  r.dimension = data.dimension();

  OracleOptions oracle_options;
  oracle_options.budget = config.budget;

  if (config.command == "analyze" || config.command == "verify") {
    r.pooled_cov = covariance(data.pooled());
    if (data.task_count() > 1)
      for (std::size_t t = 0; t < data.task_count(); ++t)
        r.task_covs.push_back(covariance(data.task(t)));
    detail::FamilySetup fam = detail::build_family(r.config, data);
    r.class_covs = std::move(fam.class_covs);
    r.bound = std::move(fam.bound);
    if (config.command == "verify") {
      r.estimate = estimate_complexity(fam.spec, data, trials, config.seed, config.variant,
                                       oracle_options);
      r.slack = r.bound->bound - r.estimate->upper.mean;
      // the absolute floor absorbs factorization jitter when the estimator
      // variance is zero, e.g. a constant supremum
      r.slack_threshold =
          3.0 * r.estimate->upper.std_error * r.estimate->upper.normalizer +
          1e-8 * std::max(1.0, std::abs(r.bound->bound));
      r.verification_pass = *r.slack >= -*r.slack_threshold;
      r.pass = *r.verification_pass;
    }
  } else if (config.command == "mc") {
    detail::FamilySetup fam = detail::build_family(r.config, data);
    r.estimate = estimate_complexity(fam.spec, data, trials, config.seed, config.variant,
                                     oracle_options);
  } else if (config.command == "kernel-spectrum") {
    if (!(config.sigma > 0.0)) throw invalid_input("kernel-spectrum: sigma must be positive");
    const Matrix pooled = data.pooled();
    if (pooled.rows() < 2)
      throw invalid_input("kernel-spectrum: need at least two points");
    const GramMatrix gram = gaussian_gram(pooled, config.sigma);
    r.kernel_summary = kernel_cov_summary(gram);
    r.kernel_width = config.sigma;
    r.min_distance = min_pairwise_distance(pooled);
    r.kernel_lambda_bound =
        gaussian_lambda_bound(pooled.rows(), *r.min_distance, config.sigma);
    r.kernel_bound_holds = r.kernel_summary->lambda_max <= *r.kernel_lambda_bound + 1e-10;
    r.pass = *r.kernel_bound_holds;
  } else if (config.command == "conc-check") {
    detail::FamilySetup fam = detail::build_family(r.config, data);
    r.bound = fam.bound;
    const auto oracle = make_oracle(fam.spec, data, oracle_options);
    // Theorem-2 shape applies to the exact supremum; a bracketing oracle's
    // lower path is not a fixed-class supremum, so the sup tail check only
    // runs when the oracle is exact.
    if (oracle->exact()) {
      const std::vector<double> samples =
          sample_sup_distribution(*oracle, trials, config.seed, config.variant);
      const double sup_norm =
          std::sqrt(static_cast<double>(data.total_points())) * fam.bound.weak;
      r.tail_checks.emplace_back(
          "sup_tail", tail_check_supremum(samples, sup_norm, config.variant));
    }
    r.trace_check = trace_inequality_check(data.pooled(), trials, config.seed);
    r.pass = r.trace_check->pass;
    for (const auto& [name, t] : r.tail_checks) r.pass = r.pass && t.violations == 0;
  } else {
    throw invalid_input("unknown command: " + config.command);
  }

  const std::string json = report_json(r, detail::utc_timestamp());
  detail::write_text_file(r.config.output_path, json);
  const std::string stem = r.config.output_path.substr(0, r.config.output_path.rfind('.'));
  for (const auto& [name, t] : r.tail_checks)
    detail::write_tail_csv(stem + "_" + name + ".csv", t);
  return r;
}

}  // namespace radbound
