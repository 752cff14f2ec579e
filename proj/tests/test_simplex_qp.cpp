#include <doctest.h>

#include <cmath>
#include <sstream>

#include "bundlekit/errors.hpp"
#include "bundlekit/simplex_qp.hpp"
#include "reference_values.hpp"

using namespace bundlekit;

namespace {

Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Index>(v.size()));
  Index i = 0;
  for (double x : v) out(i++) = x;
  return out;
}

SimplexQP identity_instance() { return SimplexQP::dense(Matrix::Identity(2, 2), vec({-1, 0})); }

}  // namespace

TEST_CASE("projection onto the simplex") {
  const Vector a = project_simplex(vec({0.2, 0.3, 0.5}));
  CHECK((a - vec({0.2, 0.3, 0.5})).norm() <= 1e-15);

  const Vector b = project_simplex(vec({0.5, 0.9}));
  CHECK(b(0) == doctest::Approx(ref::projection_05_09[0]).epsilon(1e-15));
  CHECK(b(1) == doctest::Approx(ref::projection_05_09[1]).epsilon(1e-15));

  const Vector c = project_simplex(vec({10, 0}));
  CHECK(c(0) == 1.0);
  CHECK(c(1) == 0.0);
}

TEST_CASE("a single multiplier is fixed") {
  const SimplexQP qp = SimplexQP::dense(Matrix::Constant(1, 1, 3.0), vec({2}));
  const SimplexQPResult r = solve(qp);
  CHECK(r.lambda(0) == 1.0);
  CHECK(r.residual == 0.0);
  CHECK(r.iterations == 0);
  CHECK(kkt_residual(qp, Vector::Ones(1)) == 0.0);
}

TEST_CASE("identity Hessian with c = (-1, 0)") {
  const SimplexQP qp = identity_instance();
  const SimplexQPResult r = solve(qp);
  CHECK(r.lambda(0) == doctest::Approx(ref::qp_identity_argmin[0]).epsilon(1e-10));
  CHECK(r.lambda(1) == doctest::Approx(ref::qp_identity_argmin[1]).epsilon(1e-10));
  CHECK(r.residual <= 1e-10);
}

TEST_CASE("residual of the uniform point is positive") {
  const double r = kkt_residual(identity_instance(), vec({0.5, 0.5}));
  CHECK(r == doctest::Approx(ref::kkt_residual_uniform).epsilon(1e-14));
}

TEST_CASE("zero Hessian picks the smallest linear term, lowest index on ties") {
  const SimplexQP qp = SimplexQP::dense(Matrix::Zero(4, 4), vec({3, -1, 2, -1}));
  const SimplexQPResult r = solve(qp);
  CHECK(r.lambda == Vector::Unit(4, 1));
}

TEST_CASE("factored and dense forms agree") {
  Rng rng(4);
  const Matrix F = rng.normal_matrix(3, 7);
  const Vector c = rng.normal_vector(7);
  const SimplexQP fac = SimplexQP::factored(F, 0.8, c);
  const SimplexQP den = SimplexQP::dense(0.8 * F.transpose() * F, c);
  CHECK(fac.hessian_norm() == doctest::Approx(den.hessian_norm()).epsilon(1e-12));
  const SimplexQPResult a = solve(fac);
  const SimplexQPResult b = solve(den);
  CHECK(a.objective == doctest::Approx(b.objective).epsilon(1e-10));
}

TEST_CASE("warm start is never worse than a cold start") {
  Rng rng(8);
  for (int inst = 0; inst < 30; ++inst) {
    const Index m = 2 + inst % 9;
    const Matrix F = rng.normal_matrix(4, m);
    const Vector c = rng.normal_vector(m);
    const SimplexQP qp = SimplexQP::factored(F, 1.0, c);
    const SimplexQPResult cold = solve(qp);
    Vector warm = Vector::Zero(m);
    warm.head(m - 1) = project_simplex(rng.normal_vector(m - 1));
    const SimplexQPResult hot = solve(qp, {}, warm);
    CHECK(hot.objective <= cold.objective + 1e-10);
  }
}

TEST_CASE("solve is deterministic") {
  Rng rng(12);
  const SimplexQP qp = SimplexQP::factored(rng.normal_matrix(5, 12), 2.0, rng.normal_vector(12));
  const SimplexQPResult a = solve(qp);
  const SimplexQPResult b = solve(qp);
  CHECK(a.lambda == b.lambda);
  CHECK(a.iterations == b.iterations);
}

TEST_CASE("degenerate instance with duplicated columns") {
  // Many identical gradients make the reduced systems singular.
  Rng rng(15);
  Matrix F(3, 40);
  const Matrix base = rng.normal_matrix(3, 4);
  for (Index j = 0; j < 40; ++j) F.col(j) = base.col(j % 4) * (1.0 + 1e-9 * static_cast<double>(j));
  const Vector c = F.transpose() * rng.normal_vector(3);
  const SimplexQP qp = SimplexQP::factored(F, 1.0, c);
  const SimplexQPResult r = solve(qp);
  CHECK(r.residual <= 1e-10);
  CHECK(r.lambda.minCoeff() >= 0.0);
  CHECK(r.lambda.sum() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("iteration ceiling raises a solver error with the residual") {
  Rng rng(2);
  Vector d(30);
  for (Index i = 0; i < 30; ++i) d(i) = std::pow(10.0, 4.0 * static_cast<double>(i) / 29.0);
  const SimplexQP qp = SimplexQP::dense(d.asDiagonal().toDenseMatrix(), rng.normal_vector(30));
  SimplexQPOptions opts;
  opts.max_iterations = 1;
  opts.polish = false;
  opts.tol = 1e-300;
  try {
    solve(qp, opts);
    FAIL("expected a solver error");
  } catch (const SolverError& e) {
    CHECK(e.residual() > 0.0);
    CHECK(e.iterations() == 1);
  }
}

TEST_CASE("dump and reload reproduce the instance bit for bit") {
  Rng rng(6);
  const SimplexQP qp = SimplexQP::factored(rng.normal_matrix(2, 5), 0.3, rng.normal_vector(5));
  std::stringstream s;
  dump(qp, s);
  const SimplexQP back = load_simplex_qp(s);
  CHECK(back.hessian() == qp.hessian());
  CHECK(back.linear() == qp.linear());
}
