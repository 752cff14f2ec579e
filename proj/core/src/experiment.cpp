#include "bundlekit/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <istream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "bundlekit/diagnostics.hpp"
#include "bundlekit/errors.hpp"
#include "bundlekit/hexfloat.hpp"
#include "bundlekit/trace_io.hpp"

namespace bundlekit {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double real_value(const std::string& key, const std::string& v, int line) {
  try {
    return parse_hexfloat(v);
  } catch (const ConfigError&) {
    throw ConfigError(key + ": expected a number, got '" + v + "'", line);
  }
}

long integer_value(const std::string& key, const std::string& v, int line) {
  const double d = real_value(key, v, line);
  if (d != std::floor(d) || std::abs(d) > 1e15) throw ConfigError(key + ": expected an integer", line);
  return static_cast<long>(d);
}

std::vector<double> real_list(const std::string& key, const std::string& v, int line) {
  std::vector<double> out;
  std::istringstream in(v);
  std::string tok;
  while (std::getline(in, tok, ',')) {
    tok = trim(tok);
    if (!tok.empty()) out.push_back(real_value(key, tok, line));
  }
  return out;
}

template <class Fn>
void parallel_for(std::size_t count, unsigned threads, Fn&& fn) {
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(count, 1))));
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) fn(i);
  };
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
}

}  // namespace

const std::vector<std::string>& registered_algorithms() {
  static const std::vector<std::string> names = {"apbm", "pbm", "aippa", "apbm-composite"};
  return names;
}

RunResult run_algorithm(const Problem& problem, const std::string& algorithm, const SolverConfig& cfg) {
  if (algorithm == "apbm") {
    if (!problem.smooth) throw ConfigError("apbm needs a smooth problem family");
    return apbm_run(*problem.smooth, problem.x0, cfg);
  }
  if (algorithm == "pbm") return pbm_run(*problem.objective, problem.x0, cfg, problem.optimum);
  if (algorithm == "aippa") {
    auto q = std::dynamic_pointer_cast<const QuadraticFunction>(problem.smooth);
    if (!q) throw ConfigError("aippa uses the exact prox and needs the quadratic family");
    return aippa_run(*q, exact_prox_oracle(*q), problem.x0, cfg);
  }
  if (algorithm == "apbm-composite") {
    if (!problem.polyhedral) throw ConfigError("apbm-composite needs the max-affine-plus-quadratic family");
    return apbm_composite_run(*problem.polyhedral, *problem.quadratic, problem.x0, cfg, problem.optimum);
  }
  std::string msg = "unknown algorithm '" + algorithm + "'; registered:";
  for (const auto& a : registered_algorithms()) msg += " " + a;
  throw ConfigError(msg);
}

void ExperimentConfig::validate() const {
  problem.validate();
  const auto& algs = registered_algorithms();
  if (std::find(algs.begin(), algs.end(), algorithm) == algs.end()) {
    std::string msg = "unknown algorithm '" + algorithm + "'; registered:";
    for (const auto& a : algs) msg += " " + a;
    throw ConfigError(msg);
  }
  // Catch family mismatches before any run starts.
  const bool composite = problem.family == "max-affine-plus-quadratic";
  if (algorithm == "apbm" && composite) throw ConfigError("apbm needs a smooth problem family");
  if (algorithm == "aippa" && problem.family != "quadratic")
    throw ConfigError("aippa uses the exact prox and needs the quadratic family");
  if (algorithm == "apbm-composite" && !composite)
    throw ConfigError("apbm-composite needs the max-affine-plus-quadratic family");
  if (rho && !(*rho > 0.0)) throw ConfigError("rho must be positive");
  if (!(rho_scale > 0.0)) throw ConfigError("rho_scale must be positive");
  for (double e : eps)
    if (!(e > 0.0)) throw ConfigError("eps entries must be positive");
  if (repetitions < 1) throw ConfigError("repetitions must be at least 1");
  if (output_dir.empty()) throw ConfigError("output_dir must not be empty");
  try {
    SolverConfig probe = solver;
    probe.rho = rho.value_or(1.0);
    probe.validate();
  } catch (const InputDomainError& e) {
    throw ConfigError(e.what());
  }
}

ExperimentConfig parse_experiment_config(std::istream& in) {
  ExperimentConfig c;
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const std::string text = trim(raw.substr(0, raw.find('#')));
    if (text.empty()) continue;
    const auto eq = text.find('=');
    if (eq == std::string::npos) throw ConfigError("expected key=value", line);
    const std::string key = trim(text.substr(0, eq));
    const std::string v = trim(text.substr(eq + 1));
    if (c.problem.set(key, v, line)) continue;
    if (key == "algorithm") {
      c.algorithm = v;
    } else if (key == "rho") {
      c.rho = real_value(key, v, line);
    } else if (key == "rho_scale") {
      c.rho_scale = real_value(key, v, line);
    } else if (key == "L") {
      c.solver.L_override = real_value(key, v, line);
    } else if (key == "eps") {
      c.eps = real_list(key, v, line);
    } else if (key == "repetitions") {
      c.repetitions = static_cast<int>(integer_value(key, v, line));
    } else if (key == "max_iter") {
      c.solver.max_iter = integer_value(key, v, line);
    } else if (key == "beta") {
      c.solver.beta = real_value(key, v, line);
    } else if (key == "B") {
      c.solver.B = real_value(key, v, line);
    } else if (key == "bundle_cap") {
      c.solver.bundle_cap = integer_value(key, v, line);
    } else if (key == "qp_tol") {
      c.solver.qp.tol = real_value(key, v, line);
    } else if (key == "stationarity_tol") {
      c.solver.stationarity_tol = real_value(key, v, line);
    } else if (key == "rho_schedule") {
      c.solver.rho_schedule = real_list(key, v, line);
    } else if (key == "output_dir") {
      c.output_dir = v;
    } else {
      throw ConfigError("unknown key '" + key + "'", line);
    }
  }
  c.validate();
  return c;
}

ExperimentConfig load_experiment_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  return parse_experiment_config(in);
}

long ExperimentSummary::total_envelope_violations() const {
  long total = 0;
  for (const auto& r : runs) total += r.envelope_violations;
  return total;
}

bool ExperimentSummary::all_ok() const {
  return std::all_of(runs.begin(), runs.end(), [](const RunSummary& r) { return r.ok; });
}

ExperimentSummary run_experiment(const ExperimentConfig& config, unsigned threads) {
  config.validate();
  namespace fs = std::filesystem;
  fs::create_directories(config.output_dir);

  const auto reps = static_cast<std::size_t>(config.repetitions);
  std::vector<double> grid = config.eps;
  if (grid.empty()) grid.push_back(0.0);

  std::vector<std::optional<Problem>> problems(reps);
  std::vector<std::string> problem_errors(reps);
  parallel_for(reps, threads, [&](std::size_t r) {
    ProblemDescriptor d = config.problem;
    d.seed = config.problem.seed + r;
    try {
      problems[r] = make_problem(d);
    } catch (const Error& e) {
      problem_errors[r] = e.what();
    }
  });

  ExperimentSummary summary;
  summary.config = config;
  summary.runs.resize(reps * grid.size());
  parallel_for(summary.runs.size(), threads, [&](std::size_t i) {
    const std::size_t r = i / grid.size();
    RunSummary& out = summary.runs[i];
    out.index = i;
    out.seed = config.problem.seed + r;
    out.eps = grid[i % grid.size()];
    out.trace_path = (fs::path(config.output_dir) / ("run_" + std::to_string(i) + ".csv")).string();
    if (!problems[r]) {
      out.error = problem_errors[r];
      return;
    }
    const Problem& p = *problems[r];
    SolverConfig cfg = config.solver;
    cfg.rho = config.rho.value_or(config.rho_scale * (p.L > 0.0 ? p.L : 1.0));
    cfg.target_gap = out.eps;
    out.rho = cfg.rho;
    try {
      CsvTraceSink sink(out.trace_path);
      cfg.sink = &sink;
      const RunResult res = run_algorithm(p, config.algorithm, cfg);
      out.ok = true;
      out.status = to_string(res.status);
      out.serious_steps = res.serious_steps;
      out.iterations = res.iterations;
      out.max_null_run = res.max_null_run;
      out.final_gap = res.trace.empty() ? std::nan("") : res.trace.back().gap;
      out.criterion_violations = count_criterion_violations(res.trace).violations;
      if (config.algorithm == "apbm") {
        const double L = cfg.L_override.value_or(p.L);
        out.xi_decay_violations = count_xi_decay_violations(res.trace, tau_bound(L, cfg.rho)).violations;
      }
      if (p.optimum && !res.trace.empty()) {
        const double dist0_sq = (p.x0 - p.optimum->x_star).squaredNorm();
        double first_gap = 0.0;
        for (const auto& rec : res.trace)
          if (rec.kind == StepKind::Serious) {
            first_gap = rec.gap;
            break;
          }
        const double tol = 1e-9 * (1.0 + std::abs(first_gap));
        if (config.algorithm == "apbm" || config.algorithm == "aippa") {
          out.envelope_violations =
              count_accelerated_envelope_violations(res.trace, cfg.rho, dist0_sq, tol).violations;
        } else if (config.algorithm == "apbm-composite") {
          const double initial_gap = p.objective->value(p.x0) - p.optimum->f_star;
          out.envelope_violations = count_composite_envelope_violations(
                                        res.trace, cfg.rho, cfg.B, initial_gap, dist0_sq,
                                        1e-7 * (1.0 + std::abs(p.optimum->f_star)))
                                        .violations;
        }
      }
    } catch (const Error& e) {
      out.ok = false;
      out.error = e.what();
    }
  });

  std::ofstream js(fs::path(config.output_dir) / "summary.json");
  if (!js) throw ConfigError("cannot write summary.json in '" + config.output_dir + "'");
  write_summary_json(summary, js);
  return summary;
}

void write_summary_json(const ExperimentSummary& s, std::ostream& out) {
  using nlohmann::json;
  const ExperimentConfig& c = s.config;
  json cfg = {
      {"problem",
       {{"family", c.problem.family},
        {"n", c.problem.n},
        {"m", c.problem.m},
        {"condition", c.problem.condition},
        {"sigma", c.problem.sigma},
        {"seed", c.problem.seed},
        {"x0", c.problem.x0}}},
      {"algorithm", c.algorithm},
      {"rho_scale", c.rho_scale},
      {"eps", c.eps},
      {"repetitions", c.repetitions},
      {"max_iter", c.solver.max_iter},
      {"beta", c.solver.beta},
      {"B", c.solver.B},
      {"qp_tol", c.solver.qp.tol},
      {"qp_max_iterations", c.solver.qp.max_iterations},
      {"stationarity_tol", c.solver.stationarity_tol},
      {"rho_schedule", c.solver.rho_schedule},
      {"output_dir", c.output_dir},
  };
  cfg["rho"] = c.rho ? json(*c.rho) : json(nullptr);
  cfg["L"] = c.solver.L_override ? json(*c.solver.L_override) : json(nullptr);
  cfg["bundle_cap"] = c.solver.bundle_cap ? json(*c.solver.bundle_cap) : json(nullptr);

  json runs = json::array();
  for (const RunSummary& r : s.runs) {
    json j = {{"index", r.index},
              {"seed", r.seed},
              {"eps", r.eps},
              {"rho", r.rho},
              {"trace", r.trace_path},
              {"ok", r.ok}};
    if (r.ok) {
      j["status"] = r.status;
      j["final_gap"] = std::isfinite(r.final_gap) ? json(r.final_gap) : json(nullptr);
      j["serious_steps"] = r.serious_steps;
      j["iterations"] = r.iterations;
      j["max_null_run"] = r.max_null_run;
      j["envelope_violations"] = r.envelope_violations;
      j["criterion_violations"] = r.criterion_violations;
      j["xi_decay_violations"] = r.xi_decay_violations;
    } else {
      j["error"] = r.error;
    }
    runs.push_back(std::move(j));
  }
  json root = {{"config", cfg},
               {"runs", runs},
               {"envelope_violations", s.total_envelope_violations()},
               {"all_ok", s.all_ok()}};
  out << root.dump(2) << '\n';
}

}  // namespace bundlekit
