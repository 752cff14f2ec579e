#pragma once

#include <memory>
#include <optional>
#include <string>

#include "bundlekit/linalg.hpp"

namespace bundlekit {

/// Value and (sub)gradient returned by a first-order oracle.
struct Evaluation {
  double value = 0.0;
  Vector gradient;
};

/// Optimal point and value of an objective. `numeric` marks values obtained
/// from a reference run rather than a closed form.
struct KnownOptimum {
  Vector x_star;
  double f_star = 0.0;
  bool numeric = false;
};

/// First-order oracle for a convex function on Rⁿ.
///
/// Instances are immutable after construction, so `eval` may be called from
/// several threads at once.
class ConvexFunction {
 public:
  virtual ~ConvexFunction() = default;

  virtual Index dimension() const = 0;
  virtual std::string name() const = 0;

  /// Checked evaluation: rejects points of the wrong size or with non-finite
  /// coordinates (InputDomainError) and non-finite results (OracleFailure).
  Evaluation eval(const Vector& x) const;
  double value(const Vector& x) const { return eval(x).value; }

 protected:
  virtual Evaluation evaluate(const Vector& x) const = 0;
};

/// Convex function with an L-Lipschitz gradient.
class SmoothConvexFunction : public ConvexFunction {
 public:
  /// Declared smoothness constant (an upper bound on the true one).
  virtual double smoothness() const = 0;

  const std::optional<KnownOptimum>& optimum() const { return optimum_; }

 protected:
  std::optional<KnownOptimum> optimum_;
};

/// ½xᵀQx + bᵀx + c with Q symmetric positive semidefinite.
class QuadraticFunction final : public SmoothConvexFunction {
 public:
  QuadraticFunction(Matrix Q, Vector b, double c = 0.0);

  /// ½‖x‖².
  static QuadraticFunction identity(Index n);
  /// The zero function on Rⁿ.
  static QuadraticFunction zero(Index n);

  Index dimension() const override { return b_.size(); }
  std::string name() const override { return "quadratic"; }
  /// Largest eigenvalue of Q.
  double smoothness() const override { return smoothness_; }

  const Matrix& hessian() const { return Q_; }
  const Vector& linear() const { return b_; }
  double constant() const { return c_; }

 protected:
  Evaluation evaluate(const Vector& x) const override;

 private:
  Matrix Q_;
  Vector b_;
  double c_;
  double smoothness_;
};

/// σ·log Σᵢ exp(aᵢᵀx/σ), rows of A are the aᵢ. Declared L = ‖A‖₂²/σ.
class LogSumExpFunction final : public SmoothConvexFunction {
 public:
  LogSumExpFunction(Matrix A, double sigma);

  Index dimension() const override { return A_.cols(); }
  std::string name() const override { return "log-sum-exp"; }
  double smoothness() const override { return smoothness_; }
  double sigma() const { return sigma_; }

 protected:
  Evaluation evaluate(const Vector& x) const override;

 private:
  Matrix A_;
  double sigma_;
  double smoothness_;
};

/// ½‖Ax − y‖². L = λ_max(AᵀA); the optimum is the least-squares solution.
class LeastSquaresFunction final : public SmoothConvexFunction {
 public:
  LeastSquaresFunction(Matrix A, Vector y);

  Index dimension() const override { return A_.cols(); }
  std::string name() const override { return "least-squares"; }
  double smoothness() const override { return smoothness_; }

 protected:
  Evaluation evaluate(const Vector& x) const override;

 private:
  Matrix A_;
  Vector y_;
  double smoothness_;
};

/// max over pieces of ⟨vᵢ, x⟩ + bᵢ; columns of V are the vᵢ.
/// The returned subgradient is v of the lowest-index maximizing piece.
class MaxAffineFunction final : public ConvexFunction {
 public:
  MaxAffineFunction(Matrix V, Vector b);

  Index dimension() const override { return V_.rows(); }
  std::string name() const override { return "max-affine"; }

  Index pieces() const { return V_.cols(); }
  const Matrix& slopes() const { return V_; }
  const Vector& intercepts() const { return b_; }

  /// Lipschitz constant M_f = max ‖vᵢ‖.
  double lipschitz() const { return lipschitz_; }
  /// D_b = max |bᵢ − bⱼ|.
  double intercept_spread() const { return intercept_spread_; }
  /// Diameter of {vᵢ}.
  double slope_diameter() const { return slope_diameter_; }

 protected:
  Evaluation evaluate(const Vector& x) const override;

 private:
  Matrix V_;
  Vector b_;
  double lipschitz_;
  double intercept_spread_;
  double slope_diameter_;
};

/// h = f + g for a max-affine f and a quadratic g.
class CompositeFunction final : public ConvexFunction {
 public:
  CompositeFunction(std::shared_ptr<const MaxAffineFunction> polyhedral,
                    std::shared_ptr<const QuadraticFunction> smooth);

  Index dimension() const override { return polyhedral_->dimension(); }
  std::string name() const override { return "max-affine-plus-quadratic"; }

  const MaxAffineFunction& polyhedral() const { return *polyhedral_; }
  const QuadraticFunction& smooth() const { return *smooth_; }

 protected:
  Evaluation evaluate(const Vector& x) const override;

 private:
  std::shared_ptr<const MaxAffineFunction> polyhedral_;
  std::shared_ptr<const QuadraticFunction> smooth_;
};

/// Exact proximal point argmin_y f(y) + (ρ/2)‖y − x‖², i.e. the solution of
/// (Q + ρI)y = ρx − b. Throws NumericError if the solve fails its residual
/// check.
Vector prox_exact(const QuadraticFunction& f, double rho, const Vector& x);

}  // namespace bundlekit
