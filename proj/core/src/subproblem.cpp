#include "bundlekit/subproblem.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "bundlekit/errors.hpp"

namespace bundlekit {

namespace {

void check_step_inputs(const Bundle& bundle, double rho, const Vector& x) {
  if (bundle.empty()) throw InputDomainError("bundle step: empty bundle");
  if (!(rho > 0.0) || !std::isfinite(rho)) throw InputDomainError("bundle step: rho must be positive");
  if (x.size() != bundle.dimension() || !x.allFinite())
    throw InputDomainError("bundle step: bad proximal center");
}

// Affine pieces fᵢ + ⟨gᵢ, y − yᵢ⟩ evaluated at y.
Vector cut_values(const Bundle& bundle, const Vector& y) {
  return bundle.gradients().transpose() * y - bundle.offsets();
}

}  // namespace

StepSolution solve_smooth_step(const Bundle& bundle, double L, double rho, const Vector& x,
                               const SimplexQPOptions& options,
                               const std::optional<Vector>& warm_start) {
  check_step_inputs(bundle, rho, x);
  if (!(L > 0.0) || !std::isfinite(L)) throw InputDomainError("smooth step: L must be positive");
  const Matrix& G = bundle.gradients();
  Vector c = -(G.transpose() * x - bundle.offsets() + bundle.squared_norms() / (2.0 * L));
  const SimplexQP qp = SimplexQP::factored(G, 1.0 / rho + 1.0 / L, std::move(c));
  const SimplexQPResult res = solve(qp, options, warm_start);

  StepSolution sol;
  sol.lambda = res.lambda;
  sol.u = G * res.lambda;
  sol.y = x - sol.u / rho;
  sol.dual_residual = res.residual;
  sol.qp_iterations = res.iterations;

  // The step multipliers also solve the model QP at y, so this is a cheap
  // confirmation solve.
  const ModelEvaluation model = eval_smooth_model(bundle, L, sol.y, options, res.lambda);
  sol.t = model.value;
  sol.qp_iterations += model.iterations;
  sol.objective = sol.t + 0.5 * rho * (sol.y - x).squaredNorm();

  const Vector pieces = cut_values(bundle, sol.y);
  double violation = 0.0;
  for (Index i = 0; i < G.cols(); ++i) {
    const double rhs = (G.col(i) - sol.u).squaredNorm() / (2.0 * L);
    violation = std::max(violation, pieces(i) + rhs - sol.t);
  }
  sol.primal_feasibility = violation;
  return sol;
}

StepSolution solve_classic_step(const Bundle& bundle, double rho, const Vector& x,
                                const SimplexQPOptions& options,
                                const std::optional<Vector>& warm_start) {
  check_step_inputs(bundle, rho, x);
  const Matrix& G = bundle.gradients();
  Vector c = -(G.transpose() * x - bundle.offsets());
  const SimplexQP qp = SimplexQP::factored(G, 1.0 / rho, std::move(c));
  const SimplexQPResult res = solve(qp, options, warm_start);

  StepSolution sol;
  sol.lambda = res.lambda;
  sol.u = G * res.lambda;
  sol.y = x - sol.u / rho;
  sol.dual_residual = res.residual;
  sol.qp_iterations = res.iterations;
  const Vector pieces = cut_values(bundle, sol.y);
  sol.t = pieces.maxCoeff();
  sol.objective = sol.t + 0.5 * rho * (sol.y - x).squaredNorm();
  sol.primal_feasibility = std::max(0.0, pieces.maxCoeff() - sol.t);
  return sol;
}

CompositeStepSolver::CompositeStepSolver(const QuadraticFunction& g, double rho) : g_(&g), rho_(rho) {
  if (!(rho > 0.0) || !std::isfinite(rho)) throw InputDomainError("composite step: rho must be positive");
  const Index n = g.dimension();
  llt_.compute(g.hessian() + rho * Matrix::Identity(n, n));
  if (llt_.info() != Eigen::Success) throw NumericError("composite step: Cholesky of A + rho I failed");
}

StepSolution CompositeStepSolver::solve(const Bundle& bundle, const Vector& x,
                                        const SimplexQPOptions& options,
                                        const std::optional<Vector>& warm_start) const {
  check_step_inputs(bundle, rho_, x);
  if (bundle.dimension() != g_->dimension()) throw InputDomainError("composite step: dimension mismatch");
  const Matrix& G = bundle.gradients();
  const Vector shifted = rho_ * x - g_->linear();
  Matrix F = llt_.matrixL().solve(G);
  const Vector z = llt_.matrixL().solve(shifted);
  // Gᵀ M⁻¹ (ρx − b) = Fᵀ L⁻¹(ρx − b)
  Vector c = -(F.transpose() * z - bundle.offsets());
  const SimplexQP qp = SimplexQP::factored(std::move(F), 1.0, std::move(c));
  const SimplexQPResult res = bundlekit::solve(qp, options, warm_start);

  StepSolution sol;
  sol.lambda = res.lambda;
  sol.u = G * res.lambda;
  sol.y = llt_.solve(shifted - sol.u);
  sol.dual_residual = res.residual;
  sol.qp_iterations = res.iterations;
  const Vector pieces = cut_values(bundle, sol.y);
  sol.t = pieces.maxCoeff();
  sol.objective = sol.t + g_->value(sol.y) + 0.5 * rho_ * (sol.y - x).squaredNorm();
  sol.primal_feasibility = 0.0;
  return sol;
}

StepSolution solve_composite_step(const Bundle& bundle, const QuadraticFunction& g, double rho,
                                  const Vector& x, const SimplexQPOptions& options) {
  return CompositeStepSolver(g, rho).solve(bundle, x, options);
}

double verify_nonconvex_constraints(const Bundle& bundle, double L, const StepSolution& sol) {
  double worst = -std::numeric_limits<double>::infinity();
  for (Index i = 0; i < bundle.size(); ++i) {
    const Cut& c = bundle.cut(i);
    const double lhs = (sol.u - c.gradient).squaredNorm() / (2.0 * L);
    const double rhs = c.value - sol.t - sol.u.dot(c.point - sol.y);
    worst = std::max(worst, lhs - rhs);
  }
  return worst;
}

KKTResiduals kkt_residuals(const Bundle& bundle, const StepSolution& sol, double rho, const Vector& x) {
  const Matrix& G = bundle.gradients();
  const Vector weighted = G * sol.lambda;
  KKTResiduals r;
  r.simplex = std::abs(1.0 - sol.lambda.sum());
  r.gradient = (sol.lambda.sum() * sol.u - weighted).norm();
  r.stationarity = (rho * (sol.y - x) + weighted).norm();
  return r;
}

}  // namespace bundlekit
