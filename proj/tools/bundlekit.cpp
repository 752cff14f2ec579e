// bundlekit: command-line harness for the bundle solvers.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "bundlekit/acceptance.hpp"
#include "bundlekit/diagnostics.hpp"
#include "bundlekit/errors.hpp"
#include "bundlekit/experiment.hpp"
#include "bundlekit/hexfloat.hpp"
#include "bundlekit/problems.hpp"
#include "bundlekit/rate_fit.hpp"
#include "bundlekit/trace_io.hpp"

namespace {

enum Exit : int { kOk = 0, kCriteria = 1, kConfig = 2, kNumeric = 3 };

unsigned thread_budget() {
  if (const char* env = std::getenv("BUNDLEKIT_THREADS")) {
    char* end = nullptr;
    const long n = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || n < 1)
      throw bundlekit::ConfigError(std::string("BUNDLEKIT_THREADS must be a positive integer, got '") + env + "'");
    return static_cast<unsigned>(n);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

int cmd_run(const std::string& path) {
  using namespace bundlekit;
  const ExperimentConfig cfg = load_experiment_config(path);
  const ExperimentSummary summary = run_experiment(cfg, thread_budget());
  bool failed_run = false;
  long violations = 0;
  for (const RunSummary& r : summary.runs) {
    if (!r.ok) {
      failed_run = true;
      std::cout << "run " << r.index << " seed " << r.seed << " eps " << shortest_decimal(r.eps)
                << ": failed: " << r.error << '\n';
      continue;
    }
    violations += r.envelope_violations + r.criterion_violations + r.xi_decay_violations;
    std::cout << "run " << r.index << " seed " << r.seed << " eps " << shortest_decimal(r.eps) << ": " << r.status
              << ", " << r.iterations << " iterations, " << r.serious_steps << " serious, max null run "
              << r.max_null_run << ", envelope violations " << r.envelope_violations << '\n';
  }
  std::cout << "summary: " << (std::filesystem::path(cfg.output_dir) / "summary.json").string() << '\n';
  if (failed_run) return kNumeric;
  return violations > 0 ? kCriteria : kOk;
}

int cmd_fit(const std::vector<std::string>& paths, const std::string& kind_name, const std::vector<double>& eps) {
  using namespace bundlekit;
  const FitKind kind = parse_fit_kind(kind_name);
  std::vector<std::vector<TraceRecord>> traces;
  for (const auto& p : paths) traces.push_back(read_trace_file(p));
  RateFit fit;
  if (kind == FitKind::Gap) {
    fit = fit_gap_rate(traces);
  } else {
    if (eps.size() != traces.size())
      throw ConfigError("--eps needs one value per trace (" + std::to_string(traces.size()) + ")");
    fit = fit_null_run_rate(traces, eps);
  }
  std::cout << "kind=" << to_string(fit.kind) << '\n'
            << "points=" << fit.points << '\n'
            << "slope=" << shortest_decimal(fit.slope) << '\n'
            << "intercept=" << shortest_decimal(fit.intercept) << '\n'
            << "r2=" << shortest_decimal(fit.r_squared) << '\n';
  return kOk;
}

int cmd_accept(const std::vector<int>& only, double tau_scale, double l_scale) {
  bundlekit::AcceptanceOptions opts;
  opts.only = only;
  opts.tau_scale = tau_scale;
  opts.l_scale = l_scale;
  const auto results = bundlekit::run_acceptance(opts);
  bundlekit::print_acceptance_report(results, std::cout);
  return bundlekit::all_passed(results) ? kOk : kCriteria;
}

int cmd_recurrence(double r0, double cprime, long kmax) {
  if (r0 < 0.0 || cprime < 0.0) throw bundlekit::ConfigError("--r0 and --cprime must be nonnegative");
  if (kmax < 1 || kmax > 1000000) throw bundlekit::ConfigError("--kmax must lie in [1, 1000000]");
  const bundlekit::RecurrenceCheck rc = bundlekit::recurrence_lemma_check(r0, cprime, kmax);
  std::cout << "holds=" << (rc.holds ? "true" : "false") << '\n'
            << "first_violation=" << rc.first_violation << '\n'
            << "worst_ratio=" << bundlekit::shortest_decimal(rc.worst_ratio) << '\n';
  return rc.holds ? kOk : kCriteria;
}

int cmd_dump_problem(const std::string& source) {
  using namespace bundlekit;
  ProblemDescriptor d;
  if (std::filesystem::is_regular_file(source)) {
    std::ifstream in(source);
    d = parse_problem_descriptor(in);
  } else {
    d = parse_problem_descriptor_inline(source);
  }
  const Problem p = make_problem(d);
  std::cout << d.serialize();
  std::cout << "L=" << shortest_decimal(p.L) << '\n';
  if (p.optimum) {
    std::cout << "f_star=" << shortest_decimal(p.optimum->f_star) << '\n'
              << "f_star_kind=" << (p.optimum->numeric ? "numeric reference" : "closed form") << '\n';
    std::cout << "x_star=";
    for (Index i = 0; i < p.optimum->x_star.size(); ++i)
      std::cout << (i ? "," : "") << shortest_decimal(p.optimum->x_star(i));
    std::cout << '\n';
  }
  std::cout << "f_x0=" << shortest_decimal(p.objective->value(p.x0)) << '\n';
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"bundlekit: accelerated proximal bundle methods and their acceptance harness"};
  app.require_subcommand(1);

  std::string config_path;
  auto* run = app.add_subcommand("run", "Run an experiment grid from a config file");
  run->add_option("config", config_path, "Experiment config (key=value lines)")->required();

  std::vector<std::string> traces;
  std::string kind = "gap";
  std::vector<double> eps;
  auto* fit = app.add_subcommand("fit", "Fit a rate to trace CSV files");
  fit->add_option("traces", traces, "Trace CSV files")->required();
  fit->add_option("--kind", kind, "gap | nullrun")->capture_default_str();
  fit->add_option("--eps", eps, "Target gap of each trace (nullrun fits)")->delimiter(',');

  std::vector<int> only;
  double tau_scale = 1.0;
  double l_scale = 1.0;
  auto* accept = app.add_subcommand("accept", "Run the acceptance suite");
  accept->add_option("--only", only, "Criterion ids to run")->delimiter(',');
  accept->add_option("--tau-scale", tau_scale, "Scale applied to tau in the xi-decay check")->capture_default_str();
  accept->add_option("--l-scale", l_scale, "Scale applied to L in the model certificates")->capture_default_str();

  double r0 = 0.0;
  double cprime = 0.0;
  long kmax = 10000;
  auto* lemma = app.add_subcommand("lemma-recurrence", "Simulate the recurrence at equality against its bound");
  lemma->add_option("--r0", r0)->required();
  lemma->add_option("--cprime", cprime)->required();
  lemma->add_option("--kmax", kmax)->capture_default_str();

  std::string descriptor;
  auto* dump = app.add_subcommand("dump-problem", "Print a generated problem");
  dump->add_option("descriptor", descriptor, "Descriptor file or inline key=value list")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfig;
  }

  try {
    if (*run) return cmd_run(config_path);
    if (*fit) return cmd_fit(traces, kind, eps);
    if (*accept) return cmd_accept(only, tau_scale, l_scale);
    if (*lemma) return cmd_recurrence(r0, cprime, kmax);
    if (*dump) return cmd_dump_problem(descriptor);
  } catch (const bundlekit::ConfigError& e) {
    std::cerr << "bundlekit: config error: " << e.what() << '\n';
    return kConfig;
  } catch (const bundlekit::InputDomainError& e) {
    std::cerr << "bundlekit: " << e.what() << '\n';
    return kConfig;
  } catch (const bundlekit::InsufficientDataError& e) {
    std::cerr << "bundlekit: " << e.what() << '\n';
    return kConfig;
  } catch (const bundlekit::Error& e) {
    std::cerr << "bundlekit: numeric failure: " << e.what() << '\n';
    return kNumeric;
  } catch (const std::exception& e) {
    std::cerr << "bundlekit: " << e.what() << '\n';
    return kNumeric;
  }
  return kOk;
}
