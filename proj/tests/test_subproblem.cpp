#include <doctest.h>

#include "bundlekit/bundle.hpp"
#include "bundlekit/problems.hpp"
#include "bundlekit/subproblem.hpp"
#include "reference_values.hpp"

using namespace bundlekit;

namespace {

Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Index>(v.size()));
  Index i = 0;
  for (double x : v) out(i++) = x;
  return out;
}

Bundle reference_bundle() {
  Matrix Q(2, 2);
  Q << 2.0, 0.5, 0.5, 1.0;
  const QuadraticFunction q(Q, vec({-1.0, 0.5}));
  Bundle b(2);
  for (const Vector& p : {vec({1, 0}), vec({0, 1}), vec({-1, -1}), vec({2, -0.5})}) b.add_cut(p, q.eval(p));
  return b;
}

Bundle symmetric_bundle() {
  Bundle b(1);
  b.add_cut(vec({-1}), 0.5, vec({-1}));
  b.add_cut(vec({1}), 0.5, vec({1}));
  return b;
}

SimplexQPOptions tight() {
  SimplexQPOptions o;
  o.tol = 1e-13;
  return o;
}

}  // namespace

TEST_CASE("smooth step with one cut is a gradient step") {
  Bundle b(2);
  b.add_cut(vec({1, 1}), 2.0, vec({1, -2}));
  for (double L : {0.1, 1.0, 100.0}) {
    const StepSolution s = solve_smooth_step(b, L, 2.0, vec({0, 0}));
    CHECK((s.y - vec({-0.5, 1.0})).norm() <= 1e-14);
    CHECK(verify_nonconvex_constraints(b, L, s) <= 1e-12);
  }
}

TEST_CASE("smooth step at the optimum of a quadratic stays there") {
  const Problem p = make_problem(ProblemDescriptor{});
  Bundle b(20);
  b.add_cut(p.optimum->x_star, p.smooth->eval(p.optimum->x_star));
  const StepSolution s = solve_smooth_step(b, p.L, p.L, p.optimum->x_star);
  CHECK((s.y - p.optimum->x_star).norm() <= 1e-10);
}

TEST_CASE("symmetric bundle: smooth and classic steps sit at 0") {
  const Bundle b = symmetric_bundle();
  const StepSolution s = solve_smooth_step(b, 1.0, 1.0, vec({0}));
  CHECK(s.lambda(0) == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(s.lambda(1) == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(std::abs(s.y(0)) <= 1e-10);
  CHECK(std::abs(s.u(0)) <= 1e-10);
  CHECK(verify_nonconvex_constraints(b, 1.0, s) <= 1e-8);

  const StepSolution c = solve_classic_step(b, 1.0, vec({0}));
  CHECK(c.lambda(0) == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(std::abs(c.y(0)) <= 1e-10);
}

TEST_CASE("smooth step matches the primal QCQP solution") {
  const Bundle b = reference_bundle();
  const Vector x = vec({0.3, -0.2});
  const StepSolution s = solve_smooth_step(b, ref::model_query_L, 1.5, x, tight());
  CHECK(s.y(0) == doctest::Approx(ref::smooth_step_y[0]).epsilon(1e-7));
  CHECK(s.y(1) == doctest::Approx(ref::smooth_step_y[1]).epsilon(1e-7));
  CHECK(s.t == doctest::Approx(ref::smooth_step_t).epsilon(1e-7));
  CHECK((s.u - 1.5 * (x - s.y)).norm() <= 1e-14);
  CHECK(s.primal_feasibility <= 1e-8 * (1.0 + std::abs(s.t)));
  const KKTResiduals k = kkt_residuals(b, s, 1.5, x);
  CHECK(k.simplex <= 1e-12);
  CHECK(k.gradient <= 1e-8);
  CHECK(k.stationarity <= 1e-8);
}

TEST_CASE("classic step matches the primal QP solution") {
  const StepSolution s = solve_classic_step(reference_bundle(), 1.5, vec({0.3, -0.2}), tight());
  CHECK(s.y(0) == doctest::Approx(ref::classic_step_y[0]).epsilon(1e-7));
  CHECK(s.y(1) == doctest::Approx(ref::classic_step_y[1]).epsilon(1e-7));
  CHECK(s.t == doctest::Approx(ref::classic_step_t).epsilon(1e-7));
}

TEST_CASE("classic step is the large-L limit of the smooth step") {
  Rng rng(27);
  for (int inst = 0; inst < 20; ++inst) {
    const QuadraticFunction q = random_quadratic(rng, 3, 10.0);
    Bundle b(3);
    for (int i = 0; i < 5; ++i) {
      const Vector p = rng.normal_vector(3);
      b.add_cut(p, q.eval(p));
    }
    const Vector x = rng.normal_vector(3);
    const StepSolution s = solve_smooth_step(b, 1e12, 1.0, x, tight());
    const StepSolution c = solve_classic_step(b, 1.0, x, tight());
    CHECK((s.y - c.y).norm() <= 1e-5);
  }
}

TEST_CASE("composite step with one cut") {
  Bundle b(2);
  b.add_cut(vec({0, 0}), 0.0, vec({1, 0}));
  const StepSolution s = solve_composite_step(b, QuadraticFunction::identity(2), 1.0, vec({0, 0}));
  CHECK((s.y - vec({-0.5, 0})).norm() <= 1e-14);
}

TEST_CASE("composite step with g = 0 is the classic step") {
  const Bundle b = reference_bundle();
  const StepSolution s = solve_composite_step(b, QuadraticFunction::zero(2), 1.5, vec({0.3, -0.2}), tight());
  const StepSolution c = solve_classic_step(b, 1.5, vec({0.3, -0.2}), tight());
  CHECK((s.y - c.y).norm() <= 1e-10);
  CHECK(s.t == doctest::Approx(c.t).epsilon(1e-10));
}

TEST_CASE("composite step on a two-piece instance matches the primal solve") {
  Matrix V(2, 2);
  V << 1.0, -0.5, 0.5, 1.0;
  const MaxAffineFunction f(V, vec({0.0, 0.3}));
  Matrix A(2, 2);
  A << 1.0, 0.2, 0.2, 0.5;
  const QuadraticFunction g(A, vec({0.1, -0.2}));
  Bundle b(2);
  b.add_cut(vec({1, 0}), f.eval(vec({1, 0})));
  b.add_cut(vec({-1, 1}), f.eval(vec({-1, 1})));
  REQUIRE(b.gradients() == V);
  const CompositeStepSolver solver(g, 2.0);
  const StepSolution s = solver.solve(b, vec({0.5, 0.5}), tight());
  CHECK(s.y(0) == doctest::Approx(ref::composite_step_y[0]).epsilon(1e-7));
  CHECK(s.y(1) == doctest::Approx(ref::composite_step_y[1]).epsilon(1e-7));
  CHECK(s.objective == doctest::Approx(ref::composite_step_objective).epsilon(1e-7));
  CHECK(s.t == doctest::Approx(f.value(s.y)).epsilon(1e-9));
}

TEST_CASE("QCQP equivalence on random instances") {
  Rng rng(33);
  for (int inst = 0; inst < 200; ++inst) {
    const Index n = rng.integer(1, 10);
    const QuadraticFunction q = random_quadratic(rng, n, 50.0);
    Bundle b(n);
    const long m = rng.integer(1, 10);
    for (long i = 0; i < m; ++i) {
      const Vector p = 1.5 * rng.normal_vector(n);
      b.add_cut(p, q.eval(p));
    }
    const Vector x = rng.normal_vector(n);
    const double rho = rng.uniform(0.1, 10.0);
    const StepSolution s = solve_smooth_step(b, q.smoothness(), rho, x, tight());
    const double scale = 1.0 + std::abs(s.t);
    CHECK(verify_nonconvex_constraints(b, q.smoothness(), s) <= 1e-7 * scale);
    CHECK(s.primal_feasibility <= 1e-8 * scale);
    // The step objective is a lower bound on the proximal objective.
    for (int k = 0; k < 5; ++k) {
      const Vector z = x + rng.normal_vector(n);
      CHECK(s.objective <= q.value(z) + 0.5 * rho * (z - x).squaredNorm() + 1e-9 * scale);
    }
  }
}
