#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "bundlekit/problems.hpp"
#include "bundlekit/solvers.hpp"

namespace bundlekit {

const std::vector<std::string>& registered_algorithms();

/// Dispatches one of the registered algorithms on a generated problem.
/// Throws ConfigError if the algorithm does not fit the problem family.
RunResult run_algorithm(const Problem& problem, const std::string& algorithm, const SolverConfig& cfg);

/// Everything needed to reproduce a grid of runs.
///
/// Config file: key=value lines, '#' comments. Problem keys as in
/// ProblemDescriptor, plus
///   algorithm     apbm | pbm | aippa | apbm-composite
///   rho           absolute ρ (otherwise rho_scale·L)
///   rho_scale     default 1
///   L             smoothness override
///   eps           comma-separated target gaps, one run each
///   repetitions   seeds seed, seed+1, ...
///   max_iter, beta, B, bundle_cap, qp_tol, stationarity_tol,
///   rho_schedule  comma-separated, nonincreasing
///   output_dir
struct ExperimentConfig {
  ProblemDescriptor problem;
  std::string algorithm = "apbm";
  std::optional<double> rho;
  double rho_scale = 1.0;
  SolverConfig solver;
  std::vector<double> eps;
  int repetitions = 1;
  std::string output_dir = "bundlekit-out";

  void validate() const;
};

ExperimentConfig parse_experiment_config(std::istream& in);
ExperimentConfig load_experiment_config(const std::string& path);

struct RunSummary {
  std::size_t index = 0;
  std::uint64_t seed = 0;
  /// Target gap of this run; 0 when the grid is empty.
  double eps = 0.0;
  double rho = 0.0;
  std::string trace_path;
  bool ok = false;
  std::string error;
  std::string status;
  double final_gap = 0.0;
  long serious_steps = 0;
  long iterations = 0;
  long max_null_run = 0;
  long envelope_violations = 0;
  long criterion_violations = 0;
  long xi_decay_violations = 0;
};

struct ExperimentSummary {
  ExperimentConfig config;
  std::vector<RunSummary> runs;

  long total_envelope_violations() const;
  bool all_ok() const;
};

/// Runs the grid (repetitions × eps) on up to `threads` threads, writes one
/// CSV per run plus summary.json into output_dir. Per-run solver failures
/// are recorded, not thrown.
ExperimentSummary run_experiment(const ExperimentConfig& config, unsigned threads = 1);

void write_summary_json(const ExperimentSummary& summary, std::ostream& out);

}  // namespace bundlekit
