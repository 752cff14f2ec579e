#pragma once

#include <optional>

#include <Eigen/Cholesky>

#include "bundlekit/bundle.hpp"
#include "bundlekit/function_oracle.hpp"
#include "bundlekit/simplex_qp.hpp"

namespace bundlekit {

/// Primal-dual solution of one bundle subproblem
///   min_y model(y) [+ g(y)] + (ρ/2)‖y − x‖².
struct StepSolution {
  Vector y;
  /// Model value at y: p(y) for the smooth step, l(y) otherwise.
  double t = 0.0;
  /// Model (sub)gradient witness Gλ.
  Vector u;
  Vector lambda;
  /// Largest constraint violation of the primal problem (unscaled).
  double primal_feasibility = 0.0;
  double dual_residual = 0.0;
  /// Subproblem value: t [+ g(y)] + (ρ/2)‖y − x‖².
  double objective = 0.0;
  long qp_iterations = 0;
};

/// Smooth-model step. Dual: min over Δ of
///   (1/(2ρ) + 1/(2L))‖Gλ‖² − ⟨Gᵀx − offsets + ‖g‖²/(2L), λ⟩,
/// recovered as y = x − Gλ/ρ, u = Gλ = ρ(x − y).
StepSolution solve_smooth_step(const Bundle& bundle, double L, double rho, const Vector& x,
                               const SimplexQPOptions& options = {},
                               const std::optional<Vector>& warm_start = std::nullopt);

/// Cutting-plane step (the L → ∞ limit of the smooth step).
StepSolution solve_classic_step(const Bundle& bundle, double rho, const Vector& x,
                                const SimplexQPOptions& options = {},
                                const std::optional<Vector>& warm_start = std::nullopt);

/// Cutting-plane step with an added quadratic g(y) = ½yᵀAy + bᵀy + c.
/// A + ρI is factored once at construction and reused by every solve.
class CompositeStepSolver {
 public:
  CompositeStepSolver(const QuadraticFunction& g, double rho);

  StepSolution solve(const Bundle& bundle, const Vector& x, const SimplexQPOptions& options = {},
                     const std::optional<Vector>& warm_start = std::nullopt) const;

  double rho() const { return rho_; }

 private:
  const QuadraticFunction* g_;
  double rho_;
  Eigen::LLT<Matrix> llt_;
};

StepSolution solve_composite_step(const Bundle& bundle, const QuadraticFunction& g, double rho,
                                  const Vector& x, const SimplexQPOptions& options = {});

/// max over cuts of (1/2L)‖u − gᵢ‖² − (fᵢ − t − ⟨u, yᵢ − y⟩): how far the
/// pair (t, u) is from being interpolable together with the bundle data by an
/// L-smooth convex function. Nonpositive (up to tolerance) at a smooth step.
double verify_nonconvex_constraints(const Bundle& bundle, double L, const StepSolution& sol);

struct KKTResiduals {
  /// |1 − Σλ|
  double simplex = 0.0;
  /// ‖Σλᵢ(u − gᵢ)‖
  double gradient = 0.0;
  /// ‖ρ(y − x) + Σλᵢgᵢ‖
  double stationarity = 0.0;
};

KKTResiduals kkt_residuals(const Bundle& bundle, const StepSolution& sol, double rho,
                           const Vector& x);

}  // namespace bundlekit
