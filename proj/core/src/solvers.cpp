#include "bundlekit/solvers.hpp"

#include <cmath>
#include <limits>
#include <memory>
#include <numbers>
#include <string>

#include "bundlekit/bundle.hpp"
#include "bundlekit/errors.hpp"
#include "bundlekit/subproblem.hpp"

namespace bundlekit {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kInf = std::numeric_limits<double>::infinity();

template <class Fn>
auto with_context(long iter, Fn&& fn) {
  const std::string prefix = "iteration " + std::to_string(iter) + ": ";
  try {
    return fn();
  } catch (const SolverError& e) {
    throw SolverError(prefix + e.what(), e.residual(), e.iterations());
  } catch (const NumericError& e) {
    throw NumericError(prefix + e.what());
  }
}

void check_start(const ConvexFunction& f, const Vector& x0) {
  if (x0.size() != f.dimension()) throw InputDomainError("starting point has the wrong dimension");
  if (!x0.allFinite()) throw InputDomainError("starting point has non-finite coordinates");
}

// Extends the previous multipliers by a zero for the cut just appended; gives
// up (cold start) when eviction changed the indexing.
std::optional<Vector> pad_warm_start(const Vector& lambda, Index bundle_size) {
  if (lambda.size() + 1 != bundle_size) return std::nullopt;
  Vector w = Vector::Zero(bundle_size);
  w.head(lambda.size()) = lambda;
  return w;
}

class Recorder {
 public:
  Recorder(RunResult& result, const SolverConfig& cfg) : result_(result), cfg_(cfg) {}

  void push(TraceRecord rec, const Vector& y, const Vector& center) {
    if (cfg_.keep_points) {
      rec.y = y;
      rec.center = center;
    }
    if (cfg_.sink) cfg_.sink->record(rec);
    result_.trace.push_back(std::move(rec));
  }

 private:
  RunResult& result_;
  const SolverConfig& cfg_;
};

struct BestPoint {
  Vector x;
  double value = kInf;

  void offer(const Vector& p, double v) {
    if (v < value) {
      value = v;
      x = p;
    }
  }
};

std::optional<double> resolve_f_star(const SolverConfig& cfg, const std::optional<KnownOptimum>& opt) {
  if (cfg.f_star) return cfg.f_star;
  if (opt) return opt->f_star;
  return std::nullopt;
}

}  // namespace

const char* to_string(StepKind kind) { return kind == StepKind::Serious ? "serious" : "null"; }

const char* to_string(RunStatus status) {
  switch (status) {
    case RunStatus::TargetReached: return "target-reached";
    case RunStatus::Stationary: return "stationary";
    case RunStatus::MaxIterations: return "max-iterations";
  }
  return "unknown";
}

void SolverConfig::validate() const {
  if (!(rho > 0.0) || !std::isfinite(rho)) throw InputDomainError("rho must be positive and finite");
  if (L_override && !(*L_override > 0.0)) throw InputDomainError("L override must be positive");
  if (max_iter < 1) throw InputDomainError("max_iter must be at least 1");
  if (!(target_gap >= 0.0)) throw InputDomainError("target gap must be nonnegative");
  if (!(beta > 0.0 && beta < 1.0)) throw InputDomainError("beta must lie in (0, 1)");
  if (!(B > 0.0) || !std::isfinite(B)) throw InputDomainError("B must be positive");
  if (bundle_cap && *bundle_cap < 2) throw InputDomainError("bundle cap must be at least 2");
  if (!(qp.tol > 0.0)) throw InputDomainError("QP tolerance must be positive");
  if (!(stationarity_tol >= 0.0)) throw InputDomainError("stationarity tolerance must be nonnegative");
  for (std::size_t i = 0; i < rho_schedule.size(); ++i) {
    if (!(rho_schedule[i] > 0.0) || !std::isfinite(rho_schedule[i]))
      throw InputDomainError("rho schedule entries must be positive");
    if (i > 0 && rho_schedule[i] > rho_schedule[i - 1])
      throw InputDomainError("rho schedule must be nonincreasing");
  }
}

double SolverConfig::rho_at(long serious_count) const {
  if (rho_schedule.empty()) return rho;
  const auto i = std::min<std::size_t>(static_cast<std::size_t>(serious_count), rho_schedule.size() - 1);
  return rho_schedule[i];
}

double null_step_constant(double L, double rho) {
  if (!(L > 0.0) || !(rho > 0.0)) throw InputDomainError("null step constant: L and rho must be positive");
  const double r = 2.0 * L / rho;
  return r * (std::sqrt(r) + 1.0);
}

bool null_step_test_smooth(double C, const Vector& y_next, const Vector& y_prev, const Vector& x) {
  return C * (y_next - y_prev).norm() <= (x - y_next).norm();
}

CriterionCheck inexactness_slack(double rho, const Vector& y, const Vector& grad_y, const Vector& w,
                                 const Vector& grad_w) {
  const double lhs = (grad_y - grad_w).dot(y - w);
  const double rhs = grad_y.squaredNorm() / (2.0 * rho);
  return CriterionCheck{lhs <= rhs, rhs - lhs};
}

CriterionCheck check_inexactness_criterion(const ConvexFunction& f, double rho, const Vector& x,
                                           const Vector& y) {
  if (!(rho > 0.0)) throw InputDomainError("inexactness criterion: rho must be positive");
  const Vector gy = f.eval(y).gradient;
  const Vector w = x - gy / rho;
  return inexactness_slack(rho, y, gy, w, f.eval(w).gradient);
}

double tau_bound(double L, double rho) {
  const double C = null_step_constant(L, rho);
  const double a = L / rho + C * C;
  return a / (1.0 + a);
}

double next_momentum(double t) { return 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t)); }

double composite_epsilon(double B, double rho, long serious_count) {
  const double d = static_cast<double>(serious_count + 2);
  return std::sqrt(6.0 * B) / (std::numbers::pi * std::sqrt(rho) * d * d);
}

// ------------------------------------------------------------------ a-PBM

RunResult apbm_run(const SmoothConvexFunction& f, const Vector& x0, const SolverConfig& cfg) {
  cfg.validate();
  check_start(f, x0);
  // Any positive constant bounds the smoothness of an affine function.
  double L = cfg.L_override.value_or(f.smoothness());
  if (!(L > 0.0)) L = cfg.rho;
  const std::optional<double> f_star = resolve_f_star(cfg, f.optimum());

  RunResult result;
  Recorder recorder(result, cfg);
  const Index n = f.dimension();
  Bundle bundle(n, cfg.bundle_cap);
  const Evaluation e0 = f.eval(x0);
  bundle.add_cut(x0, e0);
  bundle.mark_serious();

  Vector x = x0;
  Vector zeta = x0;
  double f_zeta = e0.value;
  double t = 1.0;
  long k = 0;
  Vector y_prev = x0;
  BestPoint best;
  best.offer(x0, e0.value);
  double best_prox = kInf;
  long null_run = 0;
  std::optional<Vector> warm;

  for (long j = 0; j < cfg.max_iter; ++j) {
    const double rho = cfg.rho_at(k);
    const double C = null_step_constant(L, rho);
    const StepSolution sol =
        with_context(j, [&] { return solve_smooth_step(bundle, L, rho, x, cfg.qp, warm); });
    const Evaluation ey = f.eval(sol.y);
    best.offer(sol.y, ey.value);
    bundle.add_cut(sol.y, ey);
    warm = pad_warm_start(sol.lambda, bundle.size());

    const double dist = (sol.y - x).norm();
    const double prox_val = ey.value + 0.5 * rho * dist * dist;
    best_prox = std::min(best_prox, prox_val);

    TraceRecord rec;
    rec.iter = j;
    rec.f_y = ey.value;
    rec.m = sol.objective;
    rec.best_prox_val = best_prox;
    rec.xi = best_prox - sol.objective;
    rec.dist_y_to_center = dist;
    rec.rho = rho;
    rec.epsilon = kNaN;
    rec.model_gap = ey.value - sol.t;
    rec.criterion_slack = kNaN;
    rec.momentum_residual = kNaN;

    const bool serious = null_step_test_smooth(C, sol.y, y_prev, x);
    y_prev = sol.y;
    const Vector center = x;
    if (serious) {
      rec.kind = StepKind::Serious;
      const Vector zeta_new = x - ey.gradient / rho;
      const Evaluation ez = f.eval(zeta_new);
      best.offer(zeta_new, ez.value);
      rec.criterion_slack = inexactness_slack(rho, sol.y, ey.gradient, zeta_new, ez.gradient).slack;
      const double t_new = next_momentum(t);
      rec.momentum_residual = t_new * t_new - t_new - t * t;
      x = zeta_new + ((t - 1.0) / t_new) * (zeta_new - zeta);
      zeta = zeta_new;
      f_zeta = ez.value;
      t = t_new;
      ++k;
      bundle.mark_serious();
      rec.null_run_len = null_run;
      null_run = 0;
      best_prox = kInf;
    } else {
      rec.kind = StepKind::Null;
      ++null_run;
      rec.null_run_len = null_run;
      result.max_null_run = std::max(result.max_null_run, null_run);
    }
    rec.t = t;
    rec.serious_count = k;
    rec.f_zeta = f_zeta;
    rec.gap = f_star ? f_zeta - *f_star : kNaN;
    recorder.push(std::move(rec), sol.y, center);
    result.iterations = j + 1;

    if (f_star && cfg.target_gap > 0.0 && f_zeta - *f_star <= cfg.target_gap) {
      result.status = RunStatus::TargetReached;
      break;
    }
    if (rho * dist <= cfg.stationarity_tol && ey.value - sol.t <= cfg.stationarity_tol) {
      result.status = RunStatus::Stationary;
      break;
    }
  }

  result.serious_steps = k;
  result.solution = best.x;
  result.solution_value = best.value;
  result.zeta = zeta;
  return result;
}

// ------------------------------------------------------------ classic PBM

RunResult pbm_run(const ConvexFunction& f, const Vector& x0, const SolverConfig& cfg,
                  const std::optional<KnownOptimum>& optimum) {
  cfg.validate();
  check_start(f, x0);
  const std::optional<double> f_star = resolve_f_star(cfg, optimum);

  RunResult result;
  Recorder recorder(result, cfg);
  Bundle bundle(f.dimension(), cfg.bundle_cap);
  const Evaluation e0 = f.eval(x0);
  bundle.add_cut(x0, e0);
  bundle.mark_serious();

  Vector x = x0;
  double fx = e0.value;
  long k = 0;
  BestPoint best;
  best.offer(x0, fx);
  double best_prox = kInf;
  long null_run = 0;
  std::optional<Vector> warm;

  for (long j = 0; j < cfg.max_iter; ++j) {
    const double rho = cfg.rho_at(k);
    const StepSolution sol =
        with_context(j, [&] { return solve_classic_step(bundle, rho, x, cfg.qp, warm); });
    const Evaluation ey = f.eval(sol.y);
    best.offer(sol.y, ey.value);
    bundle.add_cut(sol.y, ey);
    warm = pad_warm_start(sol.lambda, bundle.size());

    const double dist = (sol.y - x).norm();
    best_prox = std::min(best_prox, ey.value + 0.5 * rho * dist * dist);
    const double predicted = fx - sol.t;
    const bool serious = cfg.beta * predicted <= fx - ey.value;

    TraceRecord rec;
    rec.iter = j;
    rec.f_y = ey.value;
    rec.m = sol.objective;
    rec.best_prox_val = best_prox;
    rec.xi = best_prox - sol.objective;
    rec.dist_y_to_center = dist;
    rec.rho = rho;
    rec.epsilon = kNaN;
    rec.model_gap = ey.value - sol.t;
    rec.criterion_slack = kNaN;
    rec.momentum_residual = kNaN;
    rec.t = 1.0;
    const Vector center = x;
    if (serious) {
      rec.kind = StepKind::Serious;
      x = sol.y;
      fx = ey.value;
      ++k;
      bundle.mark_serious();
      rec.null_run_len = null_run;
      null_run = 0;
      best_prox = kInf;
    } else {
      rec.kind = StepKind::Null;
      ++null_run;
      rec.null_run_len = null_run;
      result.max_null_run = std::max(result.max_null_run, null_run);
    }
    rec.serious_count = k;
    rec.f_zeta = fx;
    rec.gap = f_star ? fx - *f_star : kNaN;
    recorder.push(std::move(rec), sol.y, center);
    result.iterations = j + 1;

    if (f_star && cfg.target_gap > 0.0 && fx - *f_star <= cfg.target_gap) {
      result.status = RunStatus::TargetReached;
      break;
    }
    if (predicted <= cfg.stationarity_tol) {
      result.status = RunStatus::Stationary;
      break;
    }
  }

  result.serious_steps = k;
  result.solution = best.x;
  result.solution_value = best.value;
  result.zeta = x;
  return result;
}

// ------------------------------------------------------------------ a-IPPA

ProxOracle exact_prox_oracle(const QuadraticFunction& f) {
  return [&f](const Vector& x, double rho) {
    ProxResult out;
    out.y = prox_exact(f, rho, x);
    out.v = f.eval(out.y).gradient;
    return out;
  };
}

RunResult aippa_run(const SmoothConvexFunction& f, const ProxOracle& prox, const Vector& x0,
                    const SolverConfig& cfg) {
  cfg.validate();
  check_start(f, x0);
  const std::optional<double> f_star = resolve_f_star(cfg, f.optimum());

  RunResult result;
  Recorder recorder(result, cfg);
  Vector x = x0;
  Vector zeta = x0;
  double t = 1.0;
  BestPoint best;
  best.offer(x0, f.value(x0));

  for (long j = 0; j < cfg.max_iter; ++j) {
    const double rho = cfg.rho_at(j);
    const ProxResult p = with_context(j, [&] { return prox(x, rho); });
    if (p.y.size() != x.size() || p.v.size() != x.size() || !p.y.allFinite() || !p.v.allFinite())
      throw OracleFailure("prox oracle", "returned a malformed point or subgradient");
    const double f_y = f.value(p.y);
    best.offer(p.y, f_y);
    const Vector zeta_new = x - p.v / rho;
    const double f_zeta = f.value(zeta_new);
    best.offer(zeta_new, f_zeta);

    TraceRecord rec;
    rec.iter = j;
    rec.kind = StepKind::Serious;
    rec.f_y = f_y;
    rec.dist_y_to_center = (p.y - x).norm();
    rec.m = kNaN;
    rec.best_prox_val = f_y + 0.5 * rho * rec.dist_y_to_center * rec.dist_y_to_center;
    rec.xi = kNaN;
    rec.model_gap = kNaN;
    rec.rho = rho;
    rec.epsilon = kNaN;
    rec.criterion_slack = check_inexactness_criterion(f, rho, x, p.y).slack;

    const double t_new = next_momentum(t);
    rec.momentum_residual = t_new * t_new - t_new - t * t;
    const Vector center = x;
    x = zeta_new + ((t - 1.0) / t_new) * (zeta_new - zeta);
    zeta = zeta_new;
    t = t_new;
    rec.t = t;
    rec.serious_count = j + 1;
    rec.f_zeta = f_zeta;
    rec.gap = f_star ? f_zeta - *f_star : kNaN;
    recorder.push(std::move(rec), p.y, center);
    result.iterations = j + 1;
    result.serious_steps = j + 1;

    if (f_star && cfg.target_gap > 0.0 && f_zeta - *f_star <= cfg.target_gap) {
      result.status = RunStatus::TargetReached;
      break;
    }
    if (p.v.norm() <= cfg.stationarity_tol) {
      result.status = RunStatus::Stationary;
      break;
    }
  }

  result.solution = best.x;
  result.solution_value = best.value;
  result.zeta = zeta;
  return result;
}

// -------------------------------------------------------- composite a-PBM

RunResult apbm_composite_run(const MaxAffineFunction& f, const QuadraticFunction& g, const Vector& x0,
                             const SolverConfig& cfg, const std::optional<KnownOptimum>& optimum) {
  cfg.validate();
  check_start(f, x0);
  if (g.dimension() != f.dimension()) throw InputDomainError("composite run: dimension mismatch");
  const std::optional<double> h_star = resolve_f_star(cfg, optimum);

  RunResult result;
  Recorder recorder(result, cfg);
  Bundle bundle(f.dimension(), cfg.bundle_cap);
  const Evaluation e0 = f.eval(x0);
  bundle.add_cut(x0, e0);
  bundle.mark_serious();

  Vector x = x0;
  Vector zeta = x0;
  double h_zeta = e0.value + g.value(x0);
  double t = 1.0;
  long k = 0;
  double rho = cfg.rho_at(0);
  auto step = std::make_unique<CompositeStepSolver>(g, rho);
  double eps = composite_epsilon(cfg.B, rho, 0);
  BestPoint best;
  best.offer(x0, h_zeta);
  double best_prox = kInf;
  long null_run = 0;
  std::optional<Vector> warm;

  for (long j = 0; j < cfg.max_iter; ++j) {
    const double rho_now = cfg.rho_at(k);
    if (rho_now != rho) {
      rho = rho_now;
      step = std::make_unique<CompositeStepSolver>(g, rho);
    }
    const StepSolution sol = with_context(j, [&] { return step->solve(bundle, x, cfg.qp, warm); });
    const Evaluation ef = f.eval(sol.y);
    const double h_y = ef.value + g.value(sol.y);
    best.offer(sol.y, h_y);
    bundle.add_cut(sol.y, ef);
    warm = pad_warm_start(sol.lambda, bundle.size());

    const double dist = (sol.y - x).norm();
    best_prox = std::min(best_prox, h_y + 0.5 * rho * dist * dist);
    const double model_gap = ef.value - sol.t;
    const bool serious = model_gap <= 0.5 * rho * eps * eps;

    TraceRecord rec;
    rec.iter = j;
    rec.f_y = h_y;
    rec.m = sol.objective;
    rec.best_prox_val = best_prox;
    rec.xi = best_prox - sol.objective;
    rec.dist_y_to_center = dist;
    rec.rho = rho;
    rec.epsilon = eps;
    rec.model_gap = model_gap;
    rec.criterion_slack = kNaN;
    rec.momentum_residual = kNaN;
    const Vector center = x;
    if (serious) {
      rec.kind = StepKind::Serious;
      const double t_new = next_momentum(t);
      rec.momentum_residual = t_new * t_new - t_new - t * t;
      x = sol.y + ((t - 1.0) / t_new) * (sol.y - zeta);
      zeta = sol.y;
      h_zeta = h_y;
      t = t_new;
      ++k;
      eps = composite_epsilon(cfg.B, cfg.rho_at(k), k);
      bundle.mark_serious();
      rec.null_run_len = null_run;
      null_run = 0;
      best_prox = kInf;
    } else {
      rec.kind = StepKind::Null;
      ++null_run;
      rec.null_run_len = null_run;
      result.max_null_run = std::max(result.max_null_run, null_run);
    }
    rec.t = t;
    rec.serious_count = k;
    rec.f_zeta = h_zeta;
    rec.gap = h_star ? h_zeta - *h_star : kNaN;
    recorder.push(std::move(rec), sol.y, center);
    result.iterations = j + 1;

    if (h_star && cfg.target_gap > 0.0 && h_zeta - *h_star <= cfg.target_gap) {
      result.status = RunStatus::TargetReached;
      break;
    }
    if (rho * dist <= cfg.stationarity_tol && model_gap <= cfg.stationarity_tol) {
      result.status = RunStatus::Stationary;
      break;
    }
  }

  result.serious_steps = k;
  result.solution = best.x;
  result.solution_value = best.value;
  result.zeta = zeta;
  return result;
}

}  // namespace bundlekit
