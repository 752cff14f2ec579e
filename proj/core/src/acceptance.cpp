#include "bundlekit/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <iomanip>
#include <map>
#include <memory>
#include <ostream>
#include <sstream>

#include "bundlekit/bundle.hpp"
#include "bundlekit/diagnostics.hpp"
#include "bundlekit/errors.hpp"
#include "bundlekit/problems.hpp"
#include "bundlekit/rate_fit.hpp"
#include "bundlekit/simplex_qp.hpp"
#include "bundlekit/solvers.hpp"
#include "bundlekit/subproblem.hpp"

namespace bundlekit {
namespace {

// Target gaps of the reference a-PBM runs, 1e-1 down to 1e-8.
std::vector<double> eps_grid(int first, int last) {
  std::vector<double> out;
  for (int e = first; e <= last; ++e) out.push_back(std::pow(10.0, -e));
  return out;
}

std::string sci(double v) {
  std::ostringstream s;
  s << std::setprecision(3) << v;
  return s.str();
}

// Runs and problems shared between criteria. Every a-PBM run made through
// here also counts toward the inexactness criterion.
class Context {
 public:
  explicit Context(const AcceptanceOptions& options) : options_(options) {
    quad_ = make_problem(ProblemDescriptor{});
    quad_fn_ = std::dynamic_pointer_cast<const QuadraticFunction>(quad_.smooth);
    dist0_ = (quad_.x0 - quad_.optimum->x_star).norm();
  }

  const AcceptanceOptions& options() const { return options_; }
  const Problem& quad() const { return quad_; }
  const QuadraticFunction& quad_fn() const { return *quad_fn_; }
  double dist0() const { return dist0_; }

  SolverConfig apbm_config(double eps, double rho_scale) const {
    SolverConfig cfg;
    cfg.rho = rho_scale * quad_.L;
    cfg.target_gap = eps;
    cfg.max_iter = 200000;
    return cfg;
  }

  const RunResult& apbm(double eps, double rho_scale = 1.0) {
    const auto key = std::make_pair(eps, rho_scale);
    auto it = runs_.find(key);
    if (it == runs_.end()) {
      it = runs_.emplace(key, apbm_run(*quad_.smooth, quad_.x0, apbm_config(eps, rho_scale))).first;
    }
    return it->second;
  }

  // The full set of a-PBM runs the suite relies on.
  void ensure_standard_runs() {
    for (double eps : eps_grid(1, 8)) apbm(eps);
    apbm(1e-8, 0.1);
  }

  const std::map<std::pair<double, double>, RunResult>& runs() const { return runs_; }

  struct CompositeCase {
    Problem problem;
    RunResult run;
    double initial_gap = 0.0;
    double dist0_sq = 0.0;
    double rho = 0.0;
    double B = 1.0;
  };

  const CompositeCase& composite() {
    if (!composite_) {
      ProblemDescriptor d;
      d.family = "max-affine-plus-quadratic";
      d.n = 2;
      d.m = 5;
      auto c = std::make_unique<CompositeCase>();
      c->problem = make_problem(d);
      c->rho = std::max(c->problem.L, 1e-3);
      SolverConfig cfg;
      cfg.rho = c->rho;
      cfg.B = c->B;
      cfg.max_iter = 5000;
      cfg.keep_points = true;
      c->run = apbm_composite_run(*c->problem.polyhedral, *c->problem.quadratic, c->problem.x0, cfg,
                                  c->problem.optimum);
      const KnownOptimum& opt = *c->problem.optimum;
      c->initial_gap = c->problem.objective->value(c->problem.x0) - opt.f_star;
      c->dist0_sq = (c->problem.x0 - opt.x_star).squaredNorm();
      composite_ = std::move(c);
    }
    return *composite_;
  }

 private:
  AcceptanceOptions options_;
  Problem quad_;
  std::shared_ptr<const QuadraticFunction> quad_fn_;
  double dist0_ = 0.0;
  std::map<std::pair<double, double>, RunResult> runs_;
  std::unique_ptr<CompositeCase> composite_;
};

struct Outcome {
  bool passed = false;
  std::string detail;
};

Outcome envelope(Context& ctx) {
  const Problem& p = ctx.quad();
  const double d2 = ctx.dist0() * ctx.dist0();
  auto check = [&](const RunResult& run, const char* label, std::ostringstream& out) {
    double gap1 = 0.0;
    for (const TraceRecord& r : run.trace)
      if (r.kind == StepKind::Serious && r.serious_count == 1) {
        gap1 = r.gap;
        break;
      }
    const InequalityCount c =
        count_accelerated_envelope_violations(run.trace, p.L, d2, 1e-9 * (1.0 + std::abs(gap1)));
    const bool ok = c.ok() && c.checked > 0 && run.status == RunStatus::TargetReached;
    out << label << ": " << c.checked << " serious steps, " << c.violations << " violations, status "
        << to_string(run.status) << "; ";
    return ok;
  };
  std::ostringstream out;
  const bool a = check(ctx.apbm(1e-8), "a-PBM", out);
  SolverConfig cfg = ctx.apbm_config(1e-8, 1.0);
  const RunResult ippa = aippa_run(*p.smooth, exact_prox_oracle(ctx.quad_fn()), p.x0, cfg);
  const bool b = check(ippa, "a-IPPA", out);
  return {a && b, out.str()};
}

Outcome serious_budget(Context& ctx) {
  std::ostringstream out;
  bool ok = true;
  for (double eps : eps_grid(2, 6)) {
    const RunResult& run = ctx.apbm(eps);
    const long budget = serious_step_budget(ctx.quad().L, ctx.dist0(), eps);
    ok = ok && run.status == RunStatus::TargetReached && run.serious_steps <= budget;
    out << "eps " << sci(eps) << ": " << run.serious_steps << "/" << budget << "; ";
  }
  return {ok, out.str()};
}

Outcome inexactness(Context& ctx) {
  ctx.ensure_standard_runs();
  long checked = 0;
  long violations = 0;
  double worst = std::numeric_limits<double>::infinity();
  for (const auto& [key, run] : ctx.runs()) {
    const InequalityCount c = count_criterion_violations(run.trace, 1e-10);
    checked += c.checked;
    violations += c.violations;
    if (c.checked > 0) worst = std::min(worst, c.worst_margin - 1e-10);
  }
  std::ostringstream out;
  out << checked << " serious steps over " << ctx.runs().size() << " runs, " << violations
      << " below -1e-10, smallest slack " << sci(worst);
  return {violations == 0 && checked > 0, out.str()};
}

Outcome xi_decay(Context& ctx) {
  std::vector<std::pair<double, double>> keys;
  for (double eps : eps_grid(1, 8)) keys.emplace_back(eps, 1.0);
  // Extra run at ρ = L/10 where null sequences are long and ξ ratios sit
  // close to τ; at ρ = L the ratios stay near 0.2.
  keys.emplace_back(1e-8, 0.1);
  long pairs = 0;
  long violations = 0;
  double max_ratio = 0.0;
  for (const auto& [eps, scale] : keys) {
    const RunResult& run = ctx.apbm(eps, scale);
    const double rho = scale * ctx.quad().L;
    const double tau = ctx.options().tau_scale * tau_bound(ctx.quad().L, rho);
    const InequalityCount c = count_xi_decay_violations(run.trace, tau, 1e-9);
    pairs += c.checked;
    violations += c.violations;
    for (std::size_t j = 0; j + 1 < run.trace.size(); ++j) {
      const TraceRecord& a = run.trace[j];
      const TraceRecord& b = run.trace[j + 1];
      if (a.kind == StepKind::Null && b.kind == StepKind::Null && a.xi > 1e-9)
        max_ratio = std::max(max_ratio, b.xi / a.xi);
    }
  }
  std::ostringstream out;
  out << pairs << " null pairs, " << violations << " violations, largest ratio " << sci(max_ratio)
      << ", tau scale " << ctx.options().tau_scale;
  return {violations == 0 && pairs > 0, out.str()};
}

// Random bundle of m cuts of f at Gaussian points with spread `radius`.
Bundle random_bundle(const ConvexFunction& f, Index m, double radius, Rng& rng) {
  Bundle b(f.dimension());
  for (Index i = 0; i < m; ++i) {
    const Vector y = radius * rng.normal_vector(f.dimension());
    b.add_cut(y, f.eval(y));
  }
  return b;
}

std::shared_ptr<const SmoothConvexFunction> random_smooth(Rng& rng, int which, Index n) {
  if (which % 2 == 0) {
    const double cond = std::pow(10.0, rng.uniform(0.5, 3.0));
    return std::make_shared<const QuadraticFunction>(random_quadratic(rng, n, cond));
  }
  const Index rows = n + rng.integer(0, 5);
  Matrix A = rng.normal_matrix(rows, n);
  Vector y = rng.normal_vector(rows);
  return std::make_shared<const LeastSquaresFunction>(std::move(A), std::move(y));
}

Outcome model_certificates(Context& ctx) {
  Rng rng(11);
  SimplexQPOptions qp;
  qp.tol = 1e-12;
  double worst_interp = 0.0;
  double worst_sandwich = -std::numeric_limits<double>::infinity();
  double worst_lip = 0.0;
  long failures = 0;
  long warnings = 0;
  for (int inst = 0; inst < 20; ++inst) {
    const Index n = rng.integer(2, 10);
    const Index m = rng.integer(2, 10);
    const auto f = random_smooth(rng, inst, n);
    const double L = ctx.options().l_scale * f->smoothness();
    const Bundle b = random_bundle(*f, m, 1.5, rng);

    const InterpolationReport ir = verify_interpolation(b, L, qp);
    const double interp = std::max(ir.max_value_error, ir.max_gradient_error);
    worst_interp = std::max(worst_interp, interp);
    bool ok = interp <= 1e-7;

    const double diam = model_diameter(b);
    std::vector<Vector> queries;
    Vector prev_y;
    Vector prev_u;
    for (int q = 0; q < 1000; ++q) {
      const Vector y = 2.0 * rng.normal_vector(n);
      queries.push_back(y);
      const double fy = f->value(y);
      const double ly = eval_cutting_plane(b, y).value;
      const ModelEvaluation pe = eval_smooth_model(b, L, y, qp);
      const double tol = 1e-7 * (1.0 + std::abs(fy));
      const double upper = std::min(fy, ly + diam * diam / (2.0 * L));
      const double excess = std::max(ly - pe.value, pe.value - upper);
      worst_sandwich = std::max(worst_sandwich, excess / (1.0 + std::abs(fy)));
      if (excess > tol) ok = false;
      if (q > 0) {
        const double ratio = (pe.gradient - prev_u).norm() / (y - prev_y).norm();
        worst_lip = std::max(worst_lip, ratio / L);
        if (ratio > L * (1.0 + 1e-6)) ok = false;
      }
      prev_y = y;
      prev_u = pe.gradient;
    }
    if (check_lower_bound(b, L, *f, queries, 1e-6, qp).violated) ++warnings;
    if (!ok) ++failures;
  }
  std::ostringstream out;
  out << "20 instances x 1000 points, " << failures << " failing; interpolation error "
      << sci(worst_interp) << ", worst scaled sandwich excess " << sci(worst_sandwich)
      << ", largest gradient ratio / L " << sci(worst_lip);
  if (warnings > 0) out << ", lower-bound warnings " << warnings;
  return {failures == 0, out.str()};
}

Outcome qcqp_equivalence(Context&) {
  Rng rng(13);
  SimplexQPOptions qp;
  qp.tol = 1e-12;
  double worst_nonconvex = 0.0;
  double worst_feas = 0.0;
  double worst_kkt = 0.0;
  long failures = 0;
  for (int inst = 0; inst < 200; ++inst) {
    const Index n = rng.integer(1, 10);
    const Index m = rng.integer(1, 10);
    const auto f = random_smooth(rng, inst, n);
    const double L = f->smoothness();
    const double rho = L * std::pow(10.0, rng.uniform(-1.0, 1.0));
    const Bundle b = random_bundle(*f, m, 1.5, rng);
    const Vector x = rng.normal_vector(n);
    const StepSolution s = solve_smooth_step(b, L, rho, x, qp);
    double scale = 1.0;
    for (Index i = 0; i < b.size(); ++i)
      scale = std::max(scale, std::max(std::abs(b.cut(i).value), b.squared_norms()(i)));
    const double nc = verify_nonconvex_constraints(b, L, s) / scale;
    const double feas = s.primal_feasibility / scale;
    const KKTResiduals k = kkt_residuals(b, s, rho, x);
    const double kkt = std::max({k.simplex, k.gradient, k.stationarity});
    worst_nonconvex = std::max(worst_nonconvex, nc);
    worst_feas = std::max(worst_feas, feas);
    worst_kkt = std::max(worst_kkt, kkt);
    if (nc > 1e-7 || feas > 1e-8 || kkt > 1e-8) ++failures;
  }
  std::ostringstream out;
  out << "200 instances, " << failures << " failing; scaled interpolation slack " << sci(worst_nonconvex)
      << ", scaled QCQP violation " << sci(worst_feas) << ", KKT residual " << sci(worst_kkt);
  return {failures == 0, out.str()};
}

// Grid search with a shrinking window over the 2-parameter face
// λ = (a, b, 1 − a − b); for m = 2 the second coordinate is pinned at 0.
double brute_force(const SimplexQP& qp) {
  const Index m = qp.size();
  if (m == 1) return qp.objective(Vector::Ones(1));
  auto value = [&](double a, double b) {
    Vector l(m);
    l(0) = a;
    if (m == 2) {
      l(1) = 1.0 - a;
    } else {
      l(1) = b;
      l(2) = 1.0 - a - b;
    }
    return qp.objective(l);
  };
  double best = std::numeric_limits<double>::infinity();
  double ca = 0.5;
  double cb = m == 3 ? 0.25 : 0.0;
  double width = 1.0;
  const int steps = 60;
  for (int round = 0; round < 25; ++round) {
    double na = ca;
    double nb = cb;
    for (int i = 0; i <= steps; ++i) {
      const double a = std::clamp(ca - width + 2.0 * width * i / steps, 0.0, 1.0);
      const int jmax = m == 3 ? steps : 0;
      for (int j = 0; j <= jmax; ++j) {
        double b = m == 3 ? std::clamp(cb - width + 2.0 * width * j / steps, 0.0, 1.0) : 0.0;
        if (a + b > 1.0) b = 1.0 - a;
        const double v = value(a, b);
        if (v < best) {
          best = v;
          na = a;
          nb = b;
        }
      }
    }
    ca = na;
    cb = nb;
    width *= 0.4;
  }
  return best;
}

Outcome simplex_oracle(Context&) {
  Rng rng(17);
  double worst = 0.0;
  long failures = 0;
  for (int inst = 0; inst < 100; ++inst) {
    const Index m = 1 + inst % 3;
    const Index k = rng.integer(1, 3);
    const Matrix B = rng.normal_matrix(k, m);
    Vector c = rng.normal_vector(m);
    const SimplexQP qp = SimplexQP::dense(B.transpose() * B, c);
    const double solved = solve(qp).objective;
    const double brute = brute_force(qp);
    const double diff = std::abs(solved - brute);
    worst = std::max(worst, diff);
    if (diff > 1e-6) ++failures;
  }
  std::ostringstream out;
  out << "100 instances (m = 1, 2, 3), " << failures << " failing, largest objective difference "
      << sci(worst);
  return {failures == 0, out.str()};
}

Outcome null_run_scaling(Context& ctx) {
  const std::vector<double> eps = eps_grid(1, 6);
  std::vector<std::vector<TraceRecord>> traces;
  std::vector<long> runs;
  for (double e : eps) {
    traces.push_back(ctx.apbm(e).trace);
    runs.push_back(max_null_run(traces.back()));
  }
  const bool constant = std::all_of(runs.begin(), runs.end(), [&](long r) { return r == runs.front(); });
  const RateFit fit = fit_null_run_rate(traces, eps);
  long largest = 0;
  for (const auto& [key, run] : ctx.runs()) largest = std::max(largest, run.max_null_run);
  std::ostringstream out;
  out << "max null runs";
  for (long r : runs) out << ' ' << r;
  out << "; slope " << sci(fit.slope) << ", R2 " << sci(fit.r_squared) << (constant ? " (constant)" : "")
      << "; longest run over all criterion-1 runs " << largest;
  return {(constant || fit.r_squared >= 0.8) && largest <= 200, out.str()};
}

Outcome composite_envelope(Context& ctx) {
  const auto& c = ctx.composite();
  const KnownOptimum& opt = *c.problem.optimum;
  const double scale = 1.0 + std::abs(opt.f_star);
  const InequalityCount count =
      count_composite_envelope_violations(c.run.trace, c.rho, c.B, c.initial_gap, c.dist0_sq, 1e-7 * scale);
  const KnownOptimum dual = composite_optimum_dual(*c.problem.polyhedral, *c.problem.quadratic);
  std::ostringstream out;
  out << count.checked << " serious steps, " << count.violations << " violations; reference h* "
      << std::setprecision(12) << opt.f_star << ", dual cross-check difference " << std::setprecision(3)
      << std::abs(dual.f_star - opt.f_star);
  const bool agree = std::abs(dual.f_star - opt.f_star) <= 1e-8 * scale;
  return {count.ok() && count.checked > 0 && agree, out.str()};
}

Outcome type2_inclusion(Context& ctx) {
  const auto& c = ctx.composite();
  Rng rng(19);
  const double radius = std::max(1.0, std::sqrt(c.dist0_sq));
  const InequalityCount count = type2_probe_check(*c.problem.objective, c.run.trace, radius, 100, rng, 1e-9);
  std::ostringstream out;
  out << count.checked << " probe inequalities, " << count.violations << " violations, smallest margin "
      << sci(count.worst_margin);
  return {count.ok() && count.checked > 0, out.str()};
}

Outcome recurrence(Context&) {
  const std::pair<double, double> cases[] = {{0, 0}, {1, 0}, {1, 5}, {10, 3}};
  std::ostringstream out;
  bool ok = true;
  for (const auto& [r0, cp] : cases) {
    const RecurrenceCheck rc = recurrence_lemma_check(r0, cp, 10000);
    ok = ok && rc.holds;
    out << "(" << r0 << "," << cp << "): " << (rc.holds ? "holds" : "fails") << " ratio " << sci(rc.worst_ratio)
        << "; ";
  }
  return {ok, out.str()};
}

Outcome classic_pbm(Context& ctx) {
  std::ostringstream out;
  bool ok = true;
  // |x| in 1D and ‖x‖₁ in 4D as max-affine functions.
  auto l1 = [](Index n) {
    const Index pieces = Index{1} << n;
    Matrix V(n, pieces);
    for (Index j = 0; j < pieces; ++j)
      for (Index i = 0; i < n; ++i) V(i, j) = ((j >> i) & 1) ? 1.0 : -1.0;
    return MaxAffineFunction(V, Vector::Zero(pieces));
  };
  Rng rng(23);
  for (Index n : {Index{1}, Index{4}}) {
    const MaxAffineFunction f = l1(n);
    const Vector x0 = n == 1 ? Vector::Constant(1, 2.0) : rng.normal_vector(n);
    SolverConfig cfg;
    cfg.rho = 1.0;
    cfg.target_gap = 1e-6;
    cfg.max_iter = 100000;
    const RunResult r = pbm_run(f, x0, cfg, KnownOptimum{Vector::Zero(n), 0.0, false});
    ok = ok && r.status == RunStatus::TargetReached;
    out << "l1 n=" << n << ": " << to_string(r.status) << " in " << r.iterations << " iterations; ";
  }
  const Problem& p = ctx.quad();
  SolverConfig cfg = ctx.apbm_config(1e-6, 1.0);
  const RunResult classic = pbm_run(*p.smooth, p.x0, cfg, p.optimum);
  const RunResult& accel = ctx.apbm(1e-6);
  ok = ok && classic.status == RunStatus::TargetReached && accel.status == RunStatus::TargetReached &&
       classic.iterations > accel.iterations;
  out << "quadratic eps 1e-6: PBM " << classic.iterations << " vs a-PBM " << accel.iterations << " iterations";
  return {ok, out.str()};
}

Vector central_difference(const std::function<double(const Vector&)>& fn, const Vector& x, double h) {
  Vector g(x.size());
  for (Index i = 0; i < x.size(); ++i) {
    Vector a = x;
    Vector b = x;
    a(i) += h;
    b(i) -= h;
    g(i) = (fn(a) - fn(b)) / (2.0 * h);
  }
  return g;
}

double relative_error(const Vector& approx, const Vector& exact) {
  return (approx - exact).cwiseAbs().maxCoeff() / std::max(1.0, exact.cwiseAbs().maxCoeff());
}

// Distance between the largest and second largest affine piece at x.
double kink_margin(const MaxAffineFunction& f, const Vector& x) {
  Vector v = f.slopes().transpose() * x + f.intercepts();
  if (v.size() < 2) return std::numeric_limits<double>::infinity();
  std::partial_sort(v.data(), v.data() + 2, v.data() + v.size(), std::greater<double>());
  return v(0) - v(1);
}

Outcome finite_differences(Context&) {
  Rng rng(29);
  const Index n = 6;
  std::vector<std::pair<std::string, std::shared_ptr<const ConvexFunction>>> oracles;
  oracles.emplace_back("quadratic", std::make_shared<const QuadraticFunction>(random_quadratic(rng, n, 50.0)));
  oracles.emplace_back("log-sum-exp", std::make_shared<const LogSumExpFunction>(rng.normal_matrix(8, n), 0.7));
  oracles.emplace_back("least-squares",
                       std::make_shared<const LeastSquaresFunction>(rng.normal_matrix(9, n), rng.normal_vector(9)));
  auto pieces = std::make_shared<const MaxAffineFunction>(random_max_affine(rng, n, 7));
  oracles.emplace_back("max-affine", pieces);
  oracles.emplace_back("composite", std::make_shared<const CompositeFunction>(
                                        pieces, std::make_shared<const QuadraticFunction>(random_quadratic(rng, n, 10.0))));

  std::ostringstream out;
  bool ok = true;
  const double h = 1e-6;
  for (const auto& [name, f] : oracles) {
    const auto* affine = dynamic_cast<const MaxAffineFunction*>(f.get());
    const auto* composite = dynamic_cast<const CompositeFunction*>(f.get());
    const MaxAffineFunction* kinked = affine ? affine : composite ? &composite->polyhedral() : nullptr;
    double worst = 0.0;
    int points = 0;
    while (points < 100) {
      const Vector x = rng.normal_vector(n);
      // Central differences are only meaningful away from the kinks.
      if (kinked && kink_margin(*kinked, x) < 1e-3) continue;
      const Vector fd = central_difference([&](const Vector& z) { return f->value(z); }, x, h);
      worst = std::max(worst, relative_error(fd, f->eval(x).gradient));
      ++points;
    }
    ok = ok && worst <= 1e-5;
    out << name << " " << sci(worst) << "; ";
  }

  const auto q = std::make_shared<const QuadraticFunction>(random_quadratic(rng, 5, 20.0));
  const Bundle b = random_bundle(*q, 8, 1.5, rng);
  SimplexQPOptions qp;
  qp.tol = 1e-13;
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const Vector y = 2.0 * rng.normal_vector(5);
    const Vector fd = central_difference([&](const Vector& z) { return eval_smooth_model(b, q->smoothness(), z, qp).value; }, y, h);
    worst = std::max(worst, relative_error(fd, eval_smooth_model(b, q->smoothness(), y, qp).gradient));
  }
  ok = ok && worst <= 1e-4;
  out << "smooth model u " << sci(worst);
  return {ok, out.str()};
}

struct Criterion {
  int id;
  const char* name;
  double limit;
  Outcome (*fn)(Context&);
};

const Criterion kCriteria[] = {
    {1, "accelerated envelope", 30.0, envelope},
    {2, "serious-step budget", 60.0, serious_budget},
    {3, "inexactness criterion", 0.0, inexactness},
    {4, "xi geometric decay", 0.0, xi_decay},
    {5, "smooth-model certificates", 60.0, model_certificates},
    {6, "QCQP equivalence", 0.0, qcqp_equivalence},
    {7, "simplex QP vs brute force", 0.0, simplex_oracle},
    {8, "null-run scaling", 0.0, null_run_scaling},
    {9, "composite envelope", 60.0, composite_envelope},
    {10, "type-2 inclusion", 0.0, type2_inclusion},
    {11, "recurrence bound", 1.0, recurrence},
    {12, "classic PBM sanity", 0.0, classic_pbm},
    {13, "finite differences", 0.0, finite_differences},
};

}  // namespace

int acceptance_criterion_count() { return static_cast<int>(std::size(kCriteria)); }

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& options) {
  for (int id : options.only)
    if (id < 1 || id > acceptance_criterion_count())
      throw ConfigError("no acceptance criterion " + std::to_string(id));
  Context ctx(options);
  std::vector<CriterionResult> results;
  for (const Criterion& c : kCriteria) {
    if (!options.only.empty() && std::find(options.only.begin(), options.only.end(), c.id) == options.only.end())
      continue;
    CriterionResult r;
    r.id = c.id;
    r.name = c.name;
    r.limit_seconds = c.limit;
    const auto start = std::chrono::steady_clock::now();
    try {
      const Outcome o = c.fn(ctx);
      r.passed = o.passed;
      r.detail = o.detail;
    } catch (const std::exception& e) {
      r.passed = false;
      r.detail = std::string("error: ") + e.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.limit > 0.0 && r.seconds > c.limit) {
      r.passed = false;
      r.detail += " [over the " + sci(c.limit) + " s limit]";
    }
    results.push_back(std::move(r));
  }
  return results;
}

void print_acceptance_report(const std::vector<CriterionResult>& results, std::ostream& out) {
  int passed = 0;
  for (const CriterionResult& r : results) {
    std::string detail = r.detail;
    while (!detail.empty() && (detail.back() == ' ' || detail.back() == ';')) detail.pop_back();
    out << (r.passed ? "PASS" : "FAIL") << "  " << std::setw(2) << r.id << "  " << std::left << std::setw(28)
        << r.name << std::right << std::fixed << std::setprecision(2) << std::setw(7) << r.seconds << " s  "
        << std::defaultfloat << detail << '\n';
    if (r.passed) ++passed;
  }
  out << passed << "/" << results.size() << " criteria passed\n";
}

bool all_passed(const std::vector<CriterionResult>& results) {
  return std::all_of(results.begin(), results.end(), [](const CriterionResult& r) { return r.passed; });
}

}  // namespace bundlekit
