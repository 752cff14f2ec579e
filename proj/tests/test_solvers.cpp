#include <doctest.h>

#include <cmath>

#include "bundlekit/diagnostics.hpp"
#include "bundlekit/errors.hpp"
#include "bundlekit/problems.hpp"
#include "bundlekit/solvers.hpp"
#include "reference_values.hpp"

using namespace bundlekit;

namespace {

Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Index>(v.size()));
  Index i = 0;
  for (double x : v) out(i++) = x;
  return out;
}

MaxAffineFunction abs_function() {
  Matrix V(1, 2);
  V << 1.0, -1.0;
  return MaxAffineFunction(V, Vector::Zero(2));
}

}  // namespace

TEST_CASE("null-step constant and contraction factor") {
  CHECK(null_step_constant(1.0, 1.0) == doctest::Approx(ref::null_constant_equal).epsilon(1e-14));
  CHECK(tau_bound(1.0, 1.0) == doctest::Approx(ref::tau_bound_equal).epsilon(1e-14));
  CHECK(null_step_constant(2.0, 1.0) == doctest::Approx(ref::null_constant_double).epsilon(1e-14));
  CHECK(tau_bound(2.0, 1.0) == doctest::Approx(ref::tau_bound_double).epsilon(1e-14));
  for (double r : {1e-3, 0.1, 1.0, 10.0, 1e3}) {
    CHECK(tau_bound(1.0, r) > 0.0);
    CHECK(tau_bound(1.0, r) < 1.0);
  }
}

TEST_CASE("null-step test") {
  const Vector x = vec({2, 0});
  // C‖Δ‖ = 2·1 = ‖x − y‖: the boundary counts as serious.
  CHECK(null_step_test_smooth(2.0, vec({0, 0}), vec({1, 0}), x));
  CHECK_FALSE(null_step_test_smooth(2.0001, vec({0, 0}), vec({1, 0}), x));
  CHECK(null_step_test_smooth(100.0, vec({0, 0}), vec({0, 0}), x));
}

TEST_CASE("inexactness criterion") {
  const auto q = QuadraticFunction::identity(2);
  // Exact prox of ½‖x‖² at ρ = 1 from (2, 0) is (1, 0).
  const CriterionCheck exact = check_inexactness_criterion(q, 1.0, vec({2, 0}), vec({1, 0}));
  CHECK(exact.holds);
  CHECK(exact.slack >= 0.0);
  const CriterionCheck far = check_inexactness_criterion(q, 1.0, vec({2, 0}), vec({-3, 0}));
  // w = (5, 0), so slack = 9/2 − ‖y − w‖² = 4.5 − 64.
  CHECK_FALSE(far.holds);
  CHECK(far.slack == doctest::Approx(-59.5));
  CHECK_THROWS_AS(check_inexactness_criterion(q, 0.0, vec({2, 0}), vec({1, 0})), InputDomainError);
}

TEST_CASE("momentum sequence") {
  CHECK(next_momentum(1.0) == doctest::Approx((1.0 + std::sqrt(5.0)) / 2.0));
  double t = 1.0;
  for (long k = 1; k <= 10000; ++k) {
    CHECK(t >= (static_cast<double>(k) + 1.0) / 2.0);
    const double t_next = next_momentum(t);
    CHECK(std::abs(t_next * t_next - t_next - t * t) <= 1e-9 * t * t);
    t = t_next;
  }
}

TEST_CASE("composite tolerance sequence") {
  CHECK(composite_epsilon(1.0, 1.0, 0) == doctest::Approx(ref::composite_eps0).epsilon(1e-14));
  CHECK(composite_epsilon(1.0, 1.0, 2) == doctest::Approx(ref::composite_eps0 / 4.0).epsilon(1e-14));
}

TEST_CASE("half squared norm from (1, 0)") {
  const auto q = QuadraticFunction::identity(2);
  SolverConfig cfg;
  cfg.rho = 1.0;
  cfg.max_iter = 50;
  cfg.target_gap = 1e-12;
  const RunResult r = apbm_run(q, vec({1, 0}), cfg);
  // The first trial point is the gradient step, which lands on x* = 0, but
  // C > 1 makes the test compare C·‖y − x0‖ with ‖y − x0‖, so it is null.
  REQUIRE(!r.trace.empty());
  CHECK(r.trace[0].kind == StepKind::Null);
  CHECK(r.trace[0].f_y == 0.0);
  CHECK(r.solution.norm() == 0.0);
  CHECK(r.status == RunStatus::TargetReached);
}

TEST_CASE("starting at the optimum stops after one iteration") {
  const Problem p = make_problem(ProblemDescriptor{});
  SolverConfig cfg;
  cfg.rho = p.L;
  cfg.target_gap = 1e-9;
  const RunResult r = apbm_run(*p.smooth, p.optimum->x_star, cfg);
  CHECK(r.iterations == 1);
  CHECK(r.status == RunStatus::TargetReached);
}

TEST_CASE("classic method on |x| from 2") {
  const MaxAffineFunction f = abs_function();
  SolverConfig cfg;
  cfg.rho = 1.0;
  cfg.max_iter = 1000;
  cfg.target_gap = 1e-6;
  const RunResult r = pbm_run(f, vec({2}), cfg, KnownOptimum{Vector::Zero(1), 0.0});
  REQUIRE(!r.trace.empty());
  CHECK(r.trace[0].kind == StepKind::Serious);
  CHECK(r.trace[0].f_y == doctest::Approx(1.0));
  CHECK(r.status == RunStatus::TargetReached);
}

TEST_CASE("accelerated proximal point on the zero function stays put") {
  const auto z = QuadraticFunction::zero(3);
  SolverConfig cfg;
  cfg.rho = 1.0;
  cfg.max_iter = 20;
  const Vector x0 = vec({1, -2, 3});
  const RunResult r = aippa_run(z, exact_prox_oracle(z), x0, cfg);
  CHECK((r.zeta - x0).norm() <= 1e-14);
  for (const TraceRecord& rec : r.trace) CHECK(rec.kind == StepKind::Serious);
}

TEST_CASE("accelerated runs keep the momentum identity and the envelope") {
  const Problem p = make_problem(ProblemDescriptor{});
  const double dist0 = (p.x0 - p.optimum->x_star).squaredNorm();
  SolverConfig cfg;
  cfg.rho = p.L;
  cfg.target_gap = 1e-6;
  cfg.max_iter = 20000;
  const RunResult r = apbm_run(*p.smooth, p.x0, cfg);
  CHECK(r.status == RunStatus::TargetReached);
  CHECK(count_momentum_identity_violations(r.trace).ok());
  CHECK(count_accelerated_envelope_violations(r.trace, cfg.rho, dist0, 1e-9).ok());
  CHECK(count_criterion_violations(r.trace).ok());
  CHECK(count_model_monotonicity_violations(r.trace).ok());
  CHECK(count_negative_xi(r.trace).ok());
  CHECK(count_xi_decay_violations(r.trace, tau_bound(p.L, cfg.rho)).ok());
  CHECK(r.serious_steps <= serious_step_budget(cfg.rho, std::sqrt(dist0), 1e-6));
}

TEST_CASE("composite method on |x| + ½x²") {
  const MaxAffineFunction f = abs_function();
  const auto g = QuadraticFunction::identity(1);
  SolverConfig cfg;
  cfg.rho = 1.0;
  cfg.max_iter = 2000;
  cfg.target_gap = 1e-6;
  cfg.keep_points = true;
  const KnownOptimum opt{Vector::Zero(1), 0.0};
  const RunResult r = apbm_composite_run(f, g, vec({3}), cfg, opt);
  CHECK(r.status == RunStatus::TargetReached);
  CHECK(std::abs(r.zeta(0)) <= 1e-3);
  const double h0 = 3.0 + 4.5;
  CHECK(count_composite_envelope_violations(r.trace, cfg.rho, cfg.B, h0, 9.0, 1e-9).ok());
}

TEST_CASE("solver config validation") {
  SolverConfig cfg;
  cfg.rho = -1.0;
  CHECK_THROWS_AS(cfg.validate(), InputDomainError);
  cfg.rho = 1.0;
  cfg.rho_schedule = {2.0, 3.0};
  CHECK_THROWS_AS(cfg.validate(), InputDomainError);
  cfg.rho_schedule = {3.0, 2.0};
  CHECK_NOTHROW(cfg.validate());
  CHECK(cfg.rho_at(0) == 3.0);
  CHECK(cfg.rho_at(5) == 2.0);
}

TEST_CASE("recurrence bound") {
  struct Case {
    double r0, cp, ratio;
  };
  for (const Case& c : {Case{1.0, 0.0, ref::recurrence_ratio_1_0}, Case{1.0, 5.0, ref::recurrence_ratio_1_5},
                        Case{10.0, 3.0, ref::recurrence_ratio_10_3}}) {
    const RecurrenceCheck check = recurrence_lemma_check(c.r0, c.cp, 10000);
    CHECK(check.holds);
    CHECK(check.first_violation == 0);
    CHECK(check.worst_ratio == doctest::Approx(c.ratio).epsilon(1e-10));
  }
}
