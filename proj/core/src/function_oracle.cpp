#include "bundlekit/function_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include "bundlekit/errors.hpp"

namespace bundlekit {

Evaluation ConvexFunction::eval(const Vector& x) const {
  if (x.size() != dimension()) {
    std::ostringstream msg;
    msg << name() << ": point has dimension " << x.size() << ", expected " << dimension();
    throw InputDomainError(msg.str());
  }
  if (!x.allFinite()) throw InputDomainError(name() + ": point has non-finite coordinates");
  Evaluation out = evaluate(x);
  if (!std::isfinite(out.value)) throw OracleFailure(name(), "non-finite function value");
  if (out.gradient.size() != dimension() || !out.gradient.allFinite())
    throw OracleFailure(name(), "non-finite or misshapen gradient");
  return out;
}

// ---------------------------------------------------------------- quadratic

QuadraticFunction::QuadraticFunction(Matrix Q, Vector b, double c)
    : Q_(std::move(Q)), b_(std::move(b)), c_(c) {
  const Index n = b_.size();
  if (Q_.rows() != n || Q_.cols() != n)
    throw InputDomainError("quadratic: Q must be n x n with n = size of b");
  if (!Q_.allFinite() || !b_.allFinite() || !std::isfinite(c_))
    throw InputDomainError("quadratic: non-finite coefficients");
  const double scale = std::max(1.0, Q_.cwiseAbs().maxCoeff());
  if ((Q_ - Q_.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
    throw InputDomainError("quadratic: Q is not symmetric");
  Q_ = 0.5 * (Q_ + Q_.transpose());

  Eigen::SelfAdjointEigenSolver<Matrix> eig(Q_);
  const Vector& w = eig.eigenvalues();
  if (n > 0 && w.minCoeff() < -1e-10 * scale)
    throw InputDomainError("quadratic: Q is not positive semidefinite");
  smoothness_ = n > 0 ? std::max(0.0, w.maxCoeff()) : 0.0;

  // x* = -Q⁺b, valid when b lies in the range of Q.
  const double cutoff = 1e-12 * std::max(1.0, smoothness_);
  const Matrix& U = eig.eigenvectors();
  const Vector coeffs = U.transpose() * b_;
  Vector scaled = Vector::Zero(n);
  for (Index i = 0; i < n; ++i)
    if (w(i) > cutoff) scaled(i) = -coeffs(i) / w(i);
  const Vector x_star = U * scaled;
  const double residual = (Q_ * x_star + b_).norm();
  if (residual <= 1e-9 * (1.0 + b_.norm())) {
    const double f_star = 0.5 * x_star.dot(Q_ * x_star) + b_.dot(x_star) + c_;
    optimum_ = KnownOptimum{x_star, f_star, false};
  }
}

QuadraticFunction QuadraticFunction::identity(Index n) {
  return QuadraticFunction(Matrix::Identity(n, n), Vector::Zero(n), 0.0);
}

QuadraticFunction QuadraticFunction::zero(Index n) {
  return QuadraticFunction(Matrix::Zero(n, n), Vector::Zero(n), 0.0);
}

Evaluation QuadraticFunction::evaluate(const Vector& x) const {
  Vector Qx = Q_ * x;
  Evaluation out;
  out.value = 0.5 * x.dot(Qx) + b_.dot(x) + c_;
  out.gradient = std::move(Qx) + b_;
  return out;
}

// --------------------------------------------------------------- log-sum-exp

LogSumExpFunction::LogSumExpFunction(Matrix A, double sigma) : A_(std::move(A)), sigma_(sigma) {
  if (!(sigma_ > 0.0) || !std::isfinite(sigma_))
    throw InputDomainError("log-sum-exp: sigma must be positive");
  if (A_.rows() == 0 || !A_.allFinite()) throw InputDomainError("log-sum-exp: bad matrix A");
  smoothness_ = largest_gram_eigenvalue(A_) / sigma_;
}

Evaluation LogSumExpFunction::evaluate(const Vector& x) const {
  const Vector z = (A_ * x) / sigma_;
  const double zmax = z.maxCoeff();
  const Vector w = (z.array() - zmax).exp().matrix();
  const double total = w.sum();
  Evaluation out;
  out.value = sigma_ * (zmax + std::log(total));
  out.gradient = A_.transpose() * (w / total);
  return out;
}

// ------------------------------------------------------------- least squares

LeastSquaresFunction::LeastSquaresFunction(Matrix A, Vector y) : A_(std::move(A)), y_(std::move(y)) {
  if (A_.rows() != y_.size()) throw InputDomainError("least-squares: A and y disagree in size");
  if (!A_.allFinite() || !y_.allFinite()) throw InputDomainError("least-squares: non-finite data");
  smoothness_ = largest_gram_eigenvalue(A_);
  const Vector x_star = A_.completeOrthogonalDecomposition().solve(y_);
  const double f_star = 0.5 * (A_ * x_star - y_).squaredNorm();
  optimum_ = KnownOptimum{x_star, f_star, false};
}

Evaluation LeastSquaresFunction::evaluate(const Vector& x) const {
  const Vector r = A_ * x - y_;
  Evaluation out;
  out.value = 0.5 * r.squaredNorm();
  out.gradient = A_.transpose() * r;
  return out;
}

// ---------------------------------------------------------------- max-affine

MaxAffineFunction::MaxAffineFunction(Matrix V, Vector b) : V_(std::move(V)), b_(std::move(b)) {
  if (V_.cols() == 0 || V_.cols() != b_.size())
    throw InputDomainError("max-affine: need at least one piece and one intercept per piece");
  if (!V_.allFinite() || !b_.allFinite()) throw InputDomainError("max-affine: non-finite pieces");
  lipschitz_ = V_.colwise().norm().maxCoeff();
  intercept_spread_ = b_.maxCoeff() - b_.minCoeff();
  slope_diameter_ = 0.0;
  for (Index i = 0; i < V_.cols(); ++i)
    for (Index j = i + 1; j < V_.cols(); ++j)
      slope_diameter_ = std::max(slope_diameter_, (V_.col(i) - V_.col(j)).norm());
}

Evaluation MaxAffineFunction::evaluate(const Vector& x) const {
  const Vector values = V_.transpose() * x + b_;
  Index best = 0;
  for (Index i = 1; i < values.size(); ++i)
    if (values(i) > values(best)) best = i;
  return Evaluation{values(best), V_.col(best)};
}

// ----------------------------------------------------------------- composite

CompositeFunction::CompositeFunction(std::shared_ptr<const MaxAffineFunction> polyhedral,
                                     std::shared_ptr<const QuadraticFunction> smooth)
    : polyhedral_(std::move(polyhedral)), smooth_(std::move(smooth)) {
  if (!polyhedral_ || !smooth_) throw InputDomainError("composite: null component");
  if (polyhedral_->dimension() != smooth_->dimension())
    throw InputDomainError("composite: component dimensions differ");
}

Evaluation CompositeFunction::evaluate(const Vector& x) const {
  Evaluation f = polyhedral_->eval(x);
  const Evaluation g = smooth_->eval(x);
  f.value += g.value;
  f.gradient += g.gradient;
  return f;
}

// ---------------------------------------------------------------------- prox

Vector prox_exact(const QuadraticFunction& f, double rho, const Vector& x) {
  if (!(rho > 0.0) || !std::isfinite(rho)) throw InputDomainError("prox_exact: rho must be positive");
  if (x.size() != f.dimension() || !x.allFinite())
    throw InputDomainError("prox_exact: bad center point");
  const Index n = x.size();
  const Matrix M = f.hessian() + rho * Matrix::Identity(n, n);
  const Vector rhs = rho * x - f.linear();
  Eigen::LLT<Matrix> llt(M);
  if (llt.info() != Eigen::Success) throw NumericError("prox_exact: Cholesky of Q + rho I failed");
  Vector y = llt.solve(rhs);
  // One step of iterative refinement keeps the residual at rounding level.
  y += llt.solve(rhs - M * y);
  const double residual = (M * y - rhs).norm();
  if (!(residual <= 1e-10 * (1.0 + rhs.norm())))
    throw NumericError("prox_exact: linear solve residual too large");
  return y;
}

}  // namespace bundlekit
