#pragma once

#include <iosfwd>
#include <optional>
#include <vector>

#include "bundlekit/linalg.hpp"

namespace bundlekit {

/// min ½λᵀHλ + cᵀλ over the probability simplex Δ_m.
///
/// H is held either densely or in factored form H = s·FᵀF. Every bundle
/// subproblem produces the factored form (F is the gradient matrix, possibly
/// premultiplied by a triangular factor), so Hλ costs O(nm) instead of O(m²).
class SimplexQP {
 public:
  /// Dense H. Throws InputDomainError unless H is symmetric within 1e-12
  /// (relative) and its smallest eigenvalue is ≥ -1e-10 (relative).
  static SimplexQP dense(Matrix H, Vector c);
  /// H = scale·FᵀF with F of size n × m.
  static SimplexQP factored(Matrix F, double scale, Vector c);

  Index size() const { return c_.size(); }
  const Vector& linear() const { return c_; }

  Vector apply_hessian(const Vector& lambda) const;
  Vector gradient(const Vector& lambda) const { return apply_hessian(lambda) + c_; }
  double objective(const Vector& lambda) const;
  /// ‖H‖₂, computed exactly at construction.
  double hessian_norm() const { return norm_; }
  /// Principal submatrix H_SS on the given index set.
  Matrix principal_block(const std::vector<Index>& support) const;
  /// Columns S of a matrix R with H = RᵀR up to scale (F itself in factored
  /// form, H in dense form): Rd = 0 implies Hd = 0.
  Matrix factor_columns(const std::vector<Index>& support) const;
  /// Materialized H (for dumps and brute-force checks).
  Matrix hessian() const;

 private:
  SimplexQP() = default;

  bool factored_ = false;
  Matrix dense_;
  Matrix factor_;
  double scale_ = 1.0;
  Vector c_;
  double norm_ = 0.0;
};

struct SimplexQPOptions {
  double tol = 1e-10;
  long max_iterations = 100000;
  /// Finish from the projected-gradient iterate with an exact active-set
  /// phase (support reduction, then primal active-set steps).
  bool polish = true;
};

struct SimplexQPResult {
  Vector lambda;
  double residual = 0.0;
  long iterations = 0;
  double objective = 0.0;
};

/// Euclidean projection onto Δ_m by the sort-and-threshold rule.
Vector project_simplex(const Vector& v);

/// ‖λ − Π_Δ(λ − (Hλ + c)/max(1, ‖H‖₂))‖: zero exactly at minimizers.
double kkt_residual(const SimplexQP& qp, const Vector& lambda);

/// Accelerated projected gradient (step 1/‖H‖₂, restart whenever the
/// objective increases), finished by an active-set phase when enabled.
/// Throws SolverError if the iteration ceiling is hit above tolerance.
SimplexQPResult solve(const SimplexQP& qp, const SimplexQPOptions& options = {},
                      const std::optional<Vector>& warm_start = std::nullopt);

/// Text dump: "m", then m rows of H, then c, all as hexadecimal floats.
void dump(const SimplexQP& qp, std::ostream& out);
SimplexQP load_simplex_qp(std::istream& in);

}  // namespace bundlekit
