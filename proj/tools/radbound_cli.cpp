// Command line front end: analyze | verify | mc | kernel-spectrum | conc-check.
// Exit codes: 0 pass, 1 usage or input error, 2 verification failure.

#include <cstdio>
#include <cstdlib>
#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "radbound/radbound.hpp"

namespace {

void print_summary(const radbound::AnalysisReport& r) {
  std::printf("dataset: %zu task(s), %zu points/task, dimension %zu\n", r.task_count,
              r.points_per_task, r.dimension);
  if (r.bound) {
    std::printf("bound [%s, %s]: %.6g\n", radbound::family_name(r.bound->family),
                radbound::variant_name(r.bound->variant), r.bound->bound);
    for (const auto& [name, v] : r.bound->terms) std::printf("  %-9s %.6g\n", name.c_str(), v);
  }
  if (r.estimate) {
    const radbound::RademacherEstimate& u = r.estimate->upper;
    std::printf("estimate: %.6g (std error %.3g, %zu trials)\n", u.mean,
                u.std_error * u.normalizer, u.trials);
    if (r.estimate->bracketed)
      std::printf("  bracket: lower %.6g, upper %.6g\n", r.estimate->lower.mean, u.mean);
  }
  if (r.slack)
    std::printf("slack (bound - estimate): %.6g, fail below %.6g\n", *r.slack,
                -*r.slack_threshold);
  if (r.verification_pass)
    std::printf("verification: %s\n", *r.verification_pass ? "PASS" : "FAIL");
  if (r.kernel_summary)
    std::printf("kernel lambda_max %.6g vs bound %.6g (min distance %.6g): %s\n",
                r.kernel_summary->lambda_max, *r.kernel_lambda_bound, *r.min_distance,
                *r.kernel_bound_holds ? "PASS" : "FAIL");
  for (const auto& [name, t] : r.tail_checks)
    std::printf("tail check %s: %zu violation(s) on %zu grid points\n", name.c_str(),
                t.violations, t.s_grid.size());
  if (r.trace_check)
    std::printf("trace check: mean %.6g vs bound %.6g, second moment %.6g vs %.6g: %s\n",
                r.trace_check->empirical_mean, r.trace_check->mean_bound,
                r.trace_check->second_moment, r.trace_check->second_moment_target,
                r.trace_check->pass ? "PASS" : "FAIL");
  std::printf("report: %s\n", r.config.output_path.c_str());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Data-dependent complexity bounds with Monte Carlo verification"};
  app.require_subcommand(1);

  radbound::RunConfig config;
  std::string family = "mkl";
  std::string variant = "rademacher";
  double eta_value = 0.0;
  std::vector<CLI::Option*> eta_options;

  const auto add_data_options = [&](CLI::App* cmd) {
    cmd->add_option("input", config.input_path, "dataset file (.csv or .json)")->required();
    cmd->add_option("--out", config.output_path, "report path (default report.json)");
    cmd->add_option("--seed", config.seed, "random seed (default 1)");
    cmd->add_option("--trials", config.trials,
                    "Monte Carlo trials (default 10000; conc-check 1000000)");
    cmd->add_option("--variant", variant, "rademacher | gaussian")
        ->check(CLI::IsMember({"rademacher", "gaussian"}));
    cmd->add_flag("--center", config.center, "center each task before analysis");
  };
  const auto add_family_options = [&](CLI::App* cmd) {
    cmd->add_option("--family", family,
                    "mkl | projection | dict_sparsity | dict_sharing | subspace")
        ->check(CLI::IsMember(
            {"mkl", "projection", "dict_sparsity", "dict_sharing", "subspace"}));
    cmd->add_option("--k", config.dictionary_size, "dictionary size (default 2)");
    cmd->add_option("--m", config.class_count,
                    "class count: kernel widths for mkl, coordinate blocks for projection");
    cmd->add_option("--sigma", config.sigma, "gaussian kernel width (default 1)");
    eta_options.push_back(
        cmd->add_option("--eta", eta_value, "fixed covering radius in (0,4) (subspace)"));
  };

  CLI::App* analyze = app.add_subcommand("analyze", "compute the family bound");
  add_data_options(analyze);
  add_family_options(analyze);
  CLI::App* verify =
      app.add_subcommand("verify", "bound plus Monte Carlo estimate; fails on violation");
  add_data_options(verify);
  add_family_options(verify);
  CLI::App* mc = app.add_subcommand("mc", "Monte Carlo complexity estimate only");
  add_data_options(mc);
  add_family_options(mc);
  CLI::App* kernel =
      app.add_subcommand("kernel-spectrum", "gaussian kernel spectrum and top-eigenvalue bound");
  add_data_options(kernel);
  kernel->add_option("--sigma", config.sigma, "gaussian kernel width (default 1)");
  CLI::App* conc = app.add_subcommand("conc-check", "tail and trace concentration checks");
  add_data_options(conc);
  add_family_options(conc);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    CLI::App* sub = app.get_subcommands().front();
    config.command = sub->get_name();
    config.family = radbound::family_from_name(family);
    config.variant = radbound::variant_from_name(variant);
    for (CLI::Option* opt : eta_options)
      if (opt->count() > 0) config.eta = eta_value;
    if (const char* env = std::getenv("RADBOUND_BUDGET")) {
      char* end = nullptr;
      const long long v = std::strtoll(env, &end, 10);
      if (end == env || *end != '\0' || v <= 0)
        throw radbound::invalid_input("RADBOUND_BUDGET must be a positive integer");
      config.budget.max_evaluations = v;
    }

    const radbound::AnalysisReport report = radbound::run(config);
    print_summary(report);
    return report.pass ? 0 : 2;
  } catch (const radbound::error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 1;
  }
}
