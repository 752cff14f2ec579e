#pragma once

#include <vector>

#include "bundlekit/function_oracle.hpp"
#include "bundlekit/linalg.hpp"
#include "bundlekit/solvers.hpp"

namespace bundlekit {

/// Outcome of re-evaluating one inequality over a trace.
struct InequalityCount {
  long checked = 0;
  long violations = 0;
  /// Smallest (rhs + tolerance − lhs) seen; negative iff violated.
  double worst_margin = 0.0;
  /// Trace index of the worst margin, −1 if nothing was checked.
  long worst_index = -1;

  bool ok() const { return violations == 0; }
  void add(double margin, long index);
};

/// ξ_{j+1} ≤ τ ξ_j + rel_tol·(1 + ξ_j) over consecutive null records.
InequalityCount count_xi_decay_violations(const std::vector<TraceRecord>& trace, double tau,
                                          double rel_tol = 1e-9);

/// f(ζ_k) − f* ≤ 2ρ‖x0 − x*‖²/(k + 1)² + tol at every serious record.
InequalityCount count_accelerated_envelope_violations(const std::vector<TraceRecord>& trace, double rho,
                                                      double dist0_sq, double tol);

/// h(ζ_k) − h* ≤ 4/(k + 2)²·(h(x0) − h* + ρ/2‖x0 − x*‖² + B) + tol.
InequalityCount count_composite_envelope_violations(const std::vector<TraceRecord>& trace, double rho,
                                                    double B, double initial_gap, double dist0_sq,
                                                    double tol);

/// Serious records whose inexactness slack is below −tol.
InequalityCount count_criterion_violations(const std::vector<TraceRecord>& trace, double tol = 1e-10);

/// m_{j+1} ≥ m_j − rel_tol·(1 + |m_j|) inside each null sequence.
InequalityCount count_model_monotonicity_violations(const std::vector<TraceRecord>& trace,
                                                    double rel_tol = 1e-9);

/// |t_new² − t_new − t_old²| ≤ tol at every serious record.
InequalityCount count_momentum_identity_violations(const std::vector<TraceRecord>& trace,
                                                   double tol = 1e-12);

/// ξ ≥ −rel_tol·(1 + |m|) on every record carrying a ξ.
InequalityCount count_negative_xi(const std::vector<TraceRecord>& trace, double rel_tol = 1e-9);

/// ⌈√(2ρ)‖x0 − x*‖/√ε⌉.
long serious_step_budget(double rho, double dist0, double eps);

/// Checks h(p) ≥ h(y) + ⟨ρ(x − y), p − y⟩ − ε²ρ/2 at random probes p around y
/// for every serious record (the trace must carry points). Probes are drawn
/// at radii spread over [1e-3, 10]·radius.
InequalityCount type2_probe_check(const ConvexFunction& h, const std::vector<TraceRecord>& trace,
                                  double radius, int probes, Rng& rng, double rel_tol = 1e-9);

}  // namespace bundlekit

namespace bundlekit {

struct RecurrenceCheck {
  bool holds = true;
  /// First k with r_k above the bound, 0 if none.
  long first_violation = 0;
  /// max over k of r_k / (bound·k²).
  double worst_ratio = 0.0;
};

/// Runs r_{k+1} = (1 + 2/(k+2)) r_k + 2C′/(k+2) with equality and compares
/// r_k with (e²r0 + C′π²e^{3+π²/3}/3)·k² for 1 ≤ k ≤ kmax.
RecurrenceCheck recurrence_lemma_check(double r0, double c_prime, long kmax);

}  // namespace bundlekit
