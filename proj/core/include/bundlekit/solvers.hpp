#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "bundlekit/function_oracle.hpp"
#include "bundlekit/simplex_qp.hpp"

namespace bundlekit {

enum class StepKind { Serious, Null };

const char* to_string(StepKind kind);

enum class RunStatus {
  /// Gap to the known optimum fell below the target.
  TargetReached,
  /// Prox-gradient and model-gap surrogate both below tolerance.
  Stationary,
  /// Iteration budget exhausted.
  MaxIterations,
};

const char* to_string(RunStatus status);

/// One row of a solver trace. Fields that do not apply are NaN.
struct TraceRecord {
  long iter = 0;
  StepKind kind = StepKind::Null;
  /// f at the new trial point y.
  double f_y = 0.0;
  /// f(ζ) − f* for the current momentum iterate (center for the classic
  /// method); NaN without a known optimum.
  double gap = 0.0;
  /// Subproblem optimal value.
  double m = 0.0;
  /// Best f(y) + (ρ/2)‖y − x‖² over the current null sequence.
  double best_prox_val = 0.0;
  double xi = 0.0;
  double dist_y_to_center = 0.0;
  long null_run_len = 0;
  /// Momentum scalar after this step.
  double t = 1.0;
  /// Inexactness-criterion slack, serious steps only.
  double criterion_slack = 0.0;

  long serious_count = 0;
  double f_zeta = 0.0;
  double rho = 0.0;
  /// ε_j of the composite method.
  double epsilon = 0.0;
  /// f(y) − model(y) where the model is the one the step was computed from.
  double model_gap = 0.0;
  /// Momentum-identity residual t_new² − t_new − t_old², serious steps only.
  double momentum_residual = 0.0;
  /// Trial point and the center it was computed from (only with keep_points).
  Vector y;
  Vector center;
};

/// Receives trace rows as they are produced.
class TraceSink {
 public:
  virtual ~TraceSink() = default;
  virtual void record(const TraceRecord& rec) = 0;
};

struct SolverConfig {
  double rho = 1.0;
  /// Smoothness constant used by the model; defaults to the oracle's.
  std::optional<double> L_override;
  long max_iter = 10000;
  /// Stop once the gap to the known optimum is ≤ this (0 disables).
  double target_gap = 0.0;
  double beta = 0.5;
  double B = 1.0;
  std::optional<Index> bundle_cap;
  SimplexQPOptions qp;
  double stationarity_tol = 1e-10;
  /// Optional nonincreasing ρ per serious step; the last entry repeats.
  std::vector<double> rho_schedule;
  bool keep_points = false;
  TraceSink* sink = nullptr;
  /// Overrides the oracle's known optimal value.
  std::optional<double> f_star;

  /// Throws InputDomainError on out-of-range parameters.
  void validate() const;
  double rho_at(long serious_count) const;
};

struct RunResult {
  /// Best evaluated point and its value.
  Vector solution;
  double solution_value = 0.0;
  /// Final momentum iterate ζ (center for the classic method).
  Vector zeta;
  std::vector<TraceRecord> trace;
  RunStatus status = RunStatus::MaxIterations;
  long iterations = 0;
  long serious_steps = 0;
  long max_null_run = 0;
};

/// C = (2L/ρ)(√(2L/ρ) + 1).
double null_step_constant(double L, double rho);

/// C‖y_next − y_prev‖ ≤ ‖x − y_next‖ (serious when true).
bool null_step_test_smooth(double C, const Vector& y_next, const Vector& y_prev, const Vector& x);

struct CriterionCheck {
  bool holds = false;
  /// ‖∇f(y)‖²/(2ρ) − ⟨∇f(y) − ∇f(w), y − w⟩ with w = x − ∇f(y)/ρ.
  double slack = 0.0;
};

CriterionCheck check_inexactness_criterion(const ConvexFunction& f, double rho, const Vector& x,
                                           const Vector& y);
/// Same check with ∇f(y) already known and w's gradient supplied.
CriterionCheck inexactness_slack(double rho, const Vector& y, const Vector& grad_y, const Vector& w,
                                 const Vector& grad_w);

/// (L/ρ + C²)/(1 + L/ρ + C²).
double tau_bound(double L, double rho);

/// t_{k+1} = (1 + √(1 + 4t²))/2.
double next_momentum(double t);

/// Accelerated proximal bundle method on the smooth model.
RunResult apbm_run(const SmoothConvexFunction& f, const Vector& x0, const SolverConfig& cfg);

/// Classic proximal bundle method with the β descent test.
RunResult pbm_run(const ConvexFunction& f, const Vector& x0, const SolverConfig& cfg,
                  const std::optional<KnownOptimum>& optimum = std::nullopt);

/// Inexact proximal step: returns y and a subgradient v with v ≈ ρ(x − y).
struct ProxResult {
  Vector y;
  Vector v;
};
using ProxOracle = std::function<ProxResult(const Vector& x, double rho)>;

/// Exact prox of a quadratic, v = ∇f(y).
ProxOracle exact_prox_oracle(const QuadraticFunction& f);

/// Accelerated inexact proximal point method; every iteration is serious.
RunResult aippa_run(const SmoothConvexFunction& f, const ProxOracle& prox, const Vector& x0,
                    const SolverConfig& cfg);

/// ε_j = √(6B)/(π√ρ (j + 2)²), j = serious steps taken so far.
double composite_epsilon(double B, double rho, long serious_count);

/// Accelerated bundle method for h = f + g, f polyhedral, g quadratic.
RunResult apbm_composite_run(const MaxAffineFunction& f, const QuadraticFunction& g, const Vector& x0,
                             const SolverConfig& cfg,
                             const std::optional<KnownOptimum>& optimum = std::nullopt);

}  // namespace bundlekit
