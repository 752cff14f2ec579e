#include "bundlekit/simplex_qp.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <string>

#include <Eigen/LU>
#include <Eigen/QR>
#include <Eigen/Eigenvalues>

#include "bundlekit/errors.hpp"
#include "bundlekit/hexfloat.hpp"

namespace bundlekit {

SimplexQP SimplexQP::dense(Matrix H, Vector c) {
  const Index m = c.size();
  if (m == 0) throw InputDomainError("simplex QP: empty problem");
  if (H.rows() != m || H.cols() != m) throw InputDomainError("simplex QP: H must be m x m");
  if (!H.allFinite() || !c.allFinite()) throw InputDomainError("simplex QP: non-finite data");
  const double scale = std::max(1.0, H.cwiseAbs().maxCoeff());
  if ((H - H.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
    throw InputDomainError("simplex QP: H is not symmetric");
  if (smallest_eigenvalue(H) < -1e-10 * scale)
    throw InputDomainError("simplex QP: H is not positive semidefinite");
  SimplexQP qp;
  qp.dense_ = 0.5 * (H + H.transpose());
  qp.c_ = std::move(c);
  qp.norm_ = std::max(0.0, largest_eigenvalue(qp.dense_));
  return qp;
}

SimplexQP SimplexQP::factored(Matrix F, double scale, Vector c) {
  const Index m = c.size();
  if (m == 0) throw InputDomainError("simplex QP: empty problem");
  if (F.cols() != m) throw InputDomainError("simplex QP: factor must have m columns");
  if (!(scale >= 0.0) || !std::isfinite(scale)) throw InputDomainError("simplex QP: bad scale");
  if (!F.allFinite() || !c.allFinite()) throw InputDomainError("simplex QP: non-finite data");
  SimplexQP qp;
  qp.factored_ = true;
  qp.factor_ = std::move(F);
  qp.scale_ = scale;
  qp.c_ = std::move(c);
  qp.norm_ = scale * largest_gram_eigenvalue(qp.factor_);
  return qp;
}

Vector SimplexQP::apply_hessian(const Vector& lambda) const {
  if (factored_) return scale_ * (factor_.transpose() * (factor_ * lambda));
  return dense_ * lambda;
}

double SimplexQP::objective(const Vector& lambda) const {
  return 0.5 * lambda.dot(apply_hessian(lambda)) + c_.dot(lambda);
}

Matrix SimplexQP::principal_block(const std::vector<Index>& support) const {
  const auto k = static_cast<Index>(support.size());
  Matrix block(k, k);
  if (factored_) {
    Matrix cols(factor_.rows(), k);
    for (Index j = 0; j < k; ++j) cols.col(j) = factor_.col(support[j]);
    block = scale_ * (cols.transpose() * cols);
  } else {
    for (Index i = 0; i < k; ++i)
      for (Index j = 0; j < k; ++j) block(i, j) = dense_(support[i], support[j]);
  }
  return block;
}

Matrix SimplexQP::factor_columns(const std::vector<Index>& support) const {
  const Matrix& R = factored_ ? factor_ : dense_;
  Matrix out(R.rows(), static_cast<Index>(support.size()));
  for (Index j = 0; j < out.cols(); ++j) out.col(j) = R.col(support[static_cast<std::size_t>(j)]);
  return out;
}

Matrix SimplexQP::hessian() const {
  if (factored_) return scale_ * (factor_.transpose() * factor_);
  return dense_;
}

Vector project_simplex(const Vector& v) {
  const Index m = v.size();
  if (m == 0) return v;
  std::vector<Index> order(static_cast<std::size_t>(m));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) { return v(a) > v(b); });

  double running = 0.0;
  double theta = 0.0;
  for (Index j = 0; j < m; ++j) {
    running += v(order[static_cast<std::size_t>(j)]);
    const double candidate = (running - 1.0) / static_cast<double>(j + 1);
    if (v(order[static_cast<std::size_t>(j)]) - candidate > 0.0) theta = candidate;
  }
  return (v.array() - theta).max(0.0).matrix();
}

namespace {

double residual_from_gradient(const SimplexQP& qp, const Vector& lambda, const Vector& grad) {
  const double s = std::max(1.0, qp.hessian_norm());
  return (lambda - project_simplex(lambda - grad / s)).norm();
}

// Rounding floor of the residual: the projection is taken of a vector whose
// entries are as large as |λ − g/s|, so differences below a few ulps of that
// magnitude carry no information.
double residual_floor(const SimplexQP& qp, const Vector& lambda, const Vector& grad) {
  const double s = std::max(1.0, qp.hessian_norm());
  const double magnitude = (lambda - grad / s).cwiseAbs().maxCoeff();
  return 64.0 * DBL_EPSILON * std::sqrt(static_cast<double>(lambda.size())) * (1.0 + magnitude);
}

std::vector<Index> support_of(const Vector& lambda) {
  std::vector<Index> out;
  for (Index i = 0; i < lambda.size(); ++i)
    if (lambda(i) > 0.0) out.push_back(i);
  return out;
}

// Moves λ inside {d : Rd = 0, cᵀd = 0, 1ᵀd = 0}, which leaves the objective
// unchanged, until the active columns are linearly independent. Indices are
// absorbed one at a time so each null-space solve stays small.
Matrix support_system(const SimplexQP& qp, const std::vector<Index>& kept) {
  const auto k = static_cast<Index>(kept.size());
  const Matrix F = qp.factor_columns(kept);
  Matrix A(F.rows() + 2, k);
  A.topRows(F.rows()) = F;
  for (Index j = 0; j < k; ++j) {
    A(F.rows(), j) = qp.linear()(kept[static_cast<std::size_t>(j)]);
    A(F.rows() + 1, j) = 1.0;
  }
  return A;
}

std::optional<Vector> reduce_support(const SimplexQP& qp, Vector lambda) {
  const std::vector<Index> support = support_of(lambda);
  if (support.size() <= 1) {
    if (support.empty()) return std::nullopt;
    return Vector(lambda / lambda.sum());
  }
  const Matrix whole = support_system(qp, support);
  if (whole.cols() <= whole.rows()) {
    Eigen::ColPivHouseholderQR<Matrix> qr(whole);
    qr.setThreshold(1e-12);
    if (qr.rank() >= whole.cols()) return Vector(lambda / lambda.sum());
  }
  std::vector<Index> kept;
  for (Index i : support) {
    kept.push_back(i);
    for (;;) {
      const auto k = static_cast<Index>(kept.size());
      const Matrix A = support_system(qp, kept);
      Eigen::CompleteOrthogonalDecomposition<Matrix> cod(A);
      cod.setThreshold(1e-12);
      if (cod.rank() >= k) break;
      // Null vector: last column of the permuted Z factor.
      const Matrix Q = cod.matrixZ().transpose();
      Vector d = cod.colsPermutation() * Vector(Q.col(k - 1));
      if ((A * d).cwiseAbs().maxCoeff() > 1e-10 * (1.0 + A.cwiseAbs().maxCoeff())) break;
      if (d.minCoeff() >= 0.0) d = -d;
      double alpha = std::numeric_limits<double>::infinity();
      Index hit = -1;
      for (Index j = 0; j < k; ++j) {
        if (d(j) < 0.0) {
          const double a = lambda(kept[static_cast<std::size_t>(j)]) / -d(j);
          if (a < alpha) {
            alpha = a;
            hit = j;
          }
        }
      }
      if (hit < 0) break;
      for (Index j = 0; j < k; ++j) {
        double& v = lambda(kept[static_cast<std::size_t>(j)]);
        v = std::max(0.0, v + alpha * d(j));
      }
      lambda(kept[static_cast<std::size_t>(hit)]) = 0.0;
      std::vector<Index> next;
      for (Index idx : kept)
        if (lambda(idx) > 0.0) next.push_back(idx);
      kept.swap(next);
    }
  }
  const double total = lambda.sum();
  if (!(total > 0.0) || !std::isfinite(total)) return std::nullopt;
  return Vector(lambda / total);
}

// Primal active-set method started from a feasible λ. Returns nullopt if it
// does not settle within its iteration budget.
std::optional<Vector> active_set_finish(const SimplexQP& qp, Vector lambda) {
  const Index m = qp.size();
  std::vector<Index> free = support_of(lambda);
  if (free.empty() || !lambda.allFinite()) return std::nullopt;
  const long budget = 10 * static_cast<long>(m) + 100;
  for (long it = 0; it < budget; ++it) {
    const auto k = static_cast<Index>(free.size());
    Matrix K = Matrix::Zero(k + 1, k + 1);
    K.topLeftCorner(k, k) = qp.principal_block(free);
    K.block(0, k, k, 1).setOnes();
    K.block(k, 0, 1, k).setOnes();
    Vector rhs(k + 1);
    for (Index j = 0; j < k; ++j) rhs(j) = -qp.linear()(free[static_cast<std::size_t>(j)]);
    rhs(k) = 1.0;
    if (!K.allFinite()) return std::nullopt;
    // LU keeps full accuracy on ill-conditioned but regular blocks, where the
    // rank-revealing threshold of COD would truncate.
    Vector sol = K.fullPivLu().solve(rhs);
    const auto solves = [&](const Vector& v) {
      const double scale = K.cwiseAbs().maxCoeff() * v.cwiseAbs().maxCoeff() + rhs.cwiseAbs().maxCoeff();
      return v.allFinite() && (K * v - rhs).cwiseAbs().maxCoeff() <= 1e-9 * scale;
    };
    if (!solves(sol)) sol = K.completeOrthogonalDecomposition().solve(rhs);

    Vector current(k);
    for (Index j = 0; j < k; ++j) current(j) = lambda(free[static_cast<std::size_t>(j)]);
    Vector p;
    double alpha = 1.0;
    bool newton = true;
    if (solves(sol)) {
      p = sol.head(k) - current;
    } else {
      // H_FF is singular to working precision on 1ᵀd = 0. Take a regularised
      // Newton direction in that subspace and minimise exactly along it.
      newton = false;
      const Matrix HF = K.topLeftCorner(k, k);
      Vector gF = HF * current;
      for (Index j = 0; j < k; ++j) gF(j) += qp.linear()(free[static_cast<std::size_t>(j)]);
      const Matrix basis = Eigen::HouseholderQR<Matrix>(Matrix::Ones(k, 1)).householderQ();
      const Matrix N = basis.rightCols(k - 1);
      Eigen::SelfAdjointEigenSolver<Matrix> eig(N.transpose() * HF * N);
      const Vector mu = eig.eigenvalues().cwiseMax(0.0);
      const double shift = 1e-12 * std::max(mu.maxCoeff(), DBL_MIN);
      const Vector coords = eig.eigenvectors().transpose() * (N.transpose() * gF);
      p = -N * (eig.eigenvectors() * coords.cwiseQuotient((mu.array() + shift).matrix()));
      const double slope = gF.dot(p);
      if (!p.allFinite() || !(slope < -1e-15 * (1.0 + gF.cwiseAbs().maxCoeff()) * p.cwiseAbs().maxCoeff())) {
        p.setZero(k);
        newton = true;
      } else {
        const double curvature = p.dot(HF * p);
        alpha = curvature > 0.0 ? -slope / curvature : std::numeric_limits<double>::infinity();
      }
    }

    Index block = -1;
    for (Index j = 0; j < k; ++j) {
      if (p(j) < 0.0) {
        const double a = current(j) / -p(j);
        if (a < alpha) {
          alpha = a;
          block = j;
        }
      }
    }
    if (!std::isfinite(alpha)) return std::nullopt;
    for (Index j = 0; j < k; ++j) lambda(free[static_cast<std::size_t>(j)]) = std::max(0.0, current(j) + alpha * p(j));
    if (block >= 0) {
      lambda(free[static_cast<std::size_t>(block)]) = 0.0;
      free.erase(free.begin() + block);
      if (free.empty()) return std::nullopt;
      continue;
    }
    if (!newton) continue;

    // Stationary on the face. Shrinking the support keeps Hλ, so the point
    // stays stationary while the next reduced system stays small.
    if (static_cast<Index>(free.size()) > 1) {
      const auto reduced = reduce_support(qp, lambda);
      if (!reduced) return std::nullopt;
      lambda = *reduced;
      free = support_of(lambda);
    }
    // Price out the fixed variables.
    const Vector g = qp.gradient(lambda);
    double level = 0.0;
    for (Index idx : free) level += g(idx);
    level /= static_cast<double>(k);
    const double delta = 1e-13 * (1.0 + g.cwiseAbs().maxCoeff());
    Index enter = -1;
    double most = -delta;
    for (Index i = 0; i < m; ++i) {
      if (lambda(i) > 0.0 || std::find(free.begin(), free.end(), i) != free.end()) continue;
      if (g(i) - level < most) {
        most = g(i) - level;
        enter = i;
      }
    }
    if (enter < 0) return lambda / lambda.sum();
    free.insert(std::upper_bound(free.begin(), free.end(), enter), enter);
  }
  return std::nullopt;
}

}  // namespace

double kkt_residual(const SimplexQP& qp, const Vector& lambda) {
  if (lambda.size() != qp.size()) throw InputDomainError("kkt_residual: size mismatch");
  if (qp.size() == 1) return 0.0;
  return residual_from_gradient(qp, lambda, qp.gradient(lambda));
}

SimplexQPResult solve(const SimplexQP& qp, const SimplexQPOptions& options,
                      const std::optional<Vector>& warm_start) {
  const Index m = qp.size();
  SimplexQPResult result;
  if (m == 1) {
    result.lambda = Vector::Ones(1);
    result.objective = qp.objective(result.lambda);
    return result;
  }

  // Linear objective: the minimizing vertex, lowest index on ties.
  if (qp.hessian_norm() == 0.0) {
    Index best = 0;
    for (Index i = 1; i < m; ++i)
      if (qp.linear()(i) < qp.linear()(best)) best = i;
    result.lambda = Vector::Unit(m, best);
    result.residual = kkt_residual(qp, result.lambda);
    result.objective = qp.objective(result.lambda);
    return result;
  }

  Vector x;
  if (warm_start && warm_start->size() == m && warm_start->allFinite()) {
    x = project_simplex(*warm_start);
  } else {
    x = Vector::Constant(m, 1.0 / static_cast<double>(m));
  }

  const double step = 1.0 / (qp.hessian_norm() * (1.0 + 1e-10));
  Vector hx = qp.apply_hessian(x);
  double fx = 0.5 * x.dot(hx) + qp.linear().dot(x);
  Vector gx = hx + qp.linear();
  double residual = residual_from_gradient(qp, x, gx);
  double tol = std::max(options.tol, residual_floor(qp, x, gx));

  auto finish = [&](long iterations) {
    result.lambda = x;
    result.residual = residual;
    result.iterations = iterations;
    result.objective = fx;
    return result;
  };

  // Iterates of the gradient method carry many tiny weights. The active set
  // only needs a feasible start, so keep the largest few and renormalise.
  const Index keep = qp.factor_columns({}).rows() + 2;
  auto polish_start = [&]() -> Vector {
    std::vector<Index> support = support_of(x);
    if (static_cast<Index>(support.size()) <= keep) return x;
    std::nth_element(support.begin(), support.begin() + keep, support.end(),
                     [&](Index a, Index b) { return x(a) > x(b); });
    Vector start = Vector::Zero(m);
    for (Index j = 0; j < keep; ++j) start(support[static_cast<std::size_t>(j)]) = x(support[static_cast<std::size_t>(j)]);
    return start / start.sum();
  };

  auto try_polish = [&]() -> bool {
    const auto reduced = reduce_support(qp, polish_start());
    if (!reduced) return false;
    const auto polished = active_set_finish(qp, *reduced);
    if (!polished) return false;
    const Vector hp = qp.apply_hessian(*polished);
    const double fp = 0.5 * polished->dot(hp) + qp.linear().dot(*polished);
    const Vector gp = hp + qp.linear();
    const double rp = residual_from_gradient(qp, *polished, gp);
    if (rp <= residual && fp <= fx + 1e-14 * (1.0 + std::abs(fx))) {
      x = *polished;
      hx = hp;
      fx = fp;
      gx = gp;
      residual = rp;
      tol = std::max(options.tol, residual_floor(qp, x, gx));
      return true;
    }
    return false;
  };

  // The active-set finish also runs when the start already meets the
  // tolerance: a warm start from the previous bundle can sit within tol while
  // ignoring a freshly added cut whose violation is below the residual scale.
  if (options.polish) try_polish();
  if (residual <= tol) return finish(0);

  Vector y = x;
  Vector gy = gx;
  double t = 1.0;
  long last_polish = 0;
  for (long k = 1; k <= options.max_iterations; ++k) {
    Vector x_new = project_simplex(y - step * gy);
    Vector hx_new = qp.apply_hessian(x_new);
    const double f_new = 0.5 * x_new.dot(hx_new) + qp.linear().dot(x_new);

    if (f_new > fx && t > 1.0) {
      // Monotone restart: drop momentum and retake the step from x.
      y = x;
      gy = gx;
      t = 1.0;
      continue;
    }

    const double t_new = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
    y = x_new + ((t - 1.0) / t_new) * (x_new - x);
    t = t_new;
    if (f_new <= fx) {
      x = std::move(x_new);
      hx = std::move(hx_new);
      fx = f_new;
      gx = hx + qp.linear();
    }
    gy = qp.gradient(y);

    residual = residual_from_gradient(qp, x, gx);
    tol = std::max(options.tol, residual_floor(qp, x, gx));
    if (residual <= tol) {
      if (options.polish) try_polish();
      return finish(k);
    }

    if (options.polish && k - last_polish >= 25) {
      last_polish = k;
      if (try_polish()) {
        if (residual <= tol) return finish(k);
        y = x;
        gy = gx;
        t = 1.0;
      }
    }
  }
  throw SolverError("simplex QP: iteration ceiling reached (residual " + std::to_string(residual) + ")",
                    residual, options.max_iterations);
}

void dump(const SimplexQP& qp, std::ostream& out) {
  const Matrix H = qp.hessian();
  const Index m = qp.size();
  out << m << '\n';
  for (Index i = 0; i < m; ++i) {
    for (Index j = 0; j < m; ++j) {
      if (j > 0) out << '\t';
      out << hexfloat(H(i, j));
    }
    out << '\n';
  }
  for (Index i = 0; i < m; ++i) {
    if (i > 0) out << '\t';
    out << hexfloat(qp.linear()(i));
  }
  out << '\n';
}

SimplexQP load_simplex_qp(std::istream& in) {
  Index m = 0;
  if (!(in >> m) || m <= 0) throw ConfigError("simplex QP dump: bad size line");
  Matrix H(m, m);
  Vector c(m);
  std::string token;
  for (Index i = 0; i < m; ++i)
    for (Index j = 0; j < m; ++j) {
      if (!(in >> token)) throw ConfigError("simplex QP dump: truncated H");
      H(i, j) = parse_hexfloat(token);
    }
  for (Index i = 0; i < m; ++i) {
    if (!(in >> token)) throw ConfigError("simplex QP dump: truncated c");
    c(i) = parse_hexfloat(token);
  }
  return SimplexQP::dense(std::move(H), std::move(c));
}

}  // namespace bundlekit
