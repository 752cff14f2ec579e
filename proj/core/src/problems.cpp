#include "bundlekit/problems.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <sstream>

#include <Eigen/Cholesky>

#include "bundlekit/errors.hpp"
#include "bundlekit/hexfloat.hpp"
#include "bundlekit/simplex_qp.hpp"
#include "bundlekit/solvers.hpp"

namespace bundlekit {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

long parse_integer(const std::string& key, const std::string& value, int line) {
  std::size_t used = 0;
  long out = 0;
  try {
    out = std::stol(value, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != value.size()) throw ConfigError(key + ": expected an integer, got '" + value + "'", line);
  return out;
}

double parse_real(const std::string& key, const std::string& value, int line) {
  try {
    return parse_hexfloat(value);
  } catch (const ConfigError&) {
    throw ConfigError(key + ": expected a number, got '" + value + "'", line);
  }
}

}  // namespace

bool ProblemDescriptor::set(const std::string& key, const std::string& value, int line) {
  if (key == "family") {
    family = value;
  } else if (key == "n") {
    n = parse_integer(key, value, line);
  } else if (key == "m") {
    m = parse_integer(key, value, line);
  } else if (key == "condition") {
    condition = parse_real(key, value, line);
  } else if (key == "sigma") {
    sigma = parse_real(key, value, line);
  } else if (key == "seed") {
    const long s = parse_integer(key, value, line);
    if (s < 0) throw ConfigError("seed must be nonnegative", line);
    seed = static_cast<std::uint64_t>(s);
  } else if (key == "x0") {
    x0 = value;
  } else {
    return false;
  }
  return true;
}

std::string ProblemDescriptor::serialize() const {
  std::ostringstream out;
  out << "family=" << family << '\n'
      << "n=" << n << '\n'
      << "m=" << m << '\n'
      << "condition=" << shortest_decimal(condition) << '\n'
      << "sigma=" << shortest_decimal(sigma) << '\n'
      << "seed=" << seed << '\n'
      << "x0=" << x0 << '\n';
  return out.str();
}

const std::vector<std::string>& registered_families() {
  static const std::vector<std::string> names = {"quadratic", "log-sum-exp", "least-squares",
                                                  "max-affine-plus-quadratic"};
  return names;
}

void ProblemDescriptor::validate() const {
  const auto& fams = registered_families();
  if (std::find(fams.begin(), fams.end(), family) == fams.end()) {
    std::string msg = "unknown problem family '" + family + "'; registered:";
    for (const auto& f : fams) msg += " " + f;
    throw ConfigError(msg);
  }
  if (n < 1) throw ConfigError("n must be positive");
  if (m < 1) throw ConfigError("m must be positive");
  if (!(condition >= 1.0) || !std::isfinite(condition)) throw ConfigError("condition must be >= 1");
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw ConfigError("sigma must be positive");
  if (x0 != "zero" && x0 != "ones" && x0 != "random")
    throw ConfigError("x0 must be one of zero, ones, random");
}

ProblemDescriptor parse_problem_descriptor(std::istream& in) {
  ProblemDescriptor d;
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const std::string text = trim(raw.substr(0, raw.find('#')));
    if (text.empty()) continue;
    const auto eq = text.find('=');
    if (eq == std::string::npos) throw ConfigError("expected key=value", line);
    const std::string key = trim(text.substr(0, eq));
    const std::string value = trim(text.substr(eq + 1));
    if (!d.set(key, value, line)) throw ConfigError("unknown key '" + key + "'", line);
  }
  d.validate();
  return d;
}

ProblemDescriptor parse_problem_descriptor_inline(const std::string& text) {
  std::string lines = text;
  std::replace_if(lines.begin(), lines.end(), [](char c) { return c == ',' || c == ';' || c == ' '; }, '\n');
  std::istringstream in(lines);
  return parse_problem_descriptor(in);
}

QuadraticFunction random_quadratic(Rng& rng, Index n, double condition) {
  const Matrix U = random_orthogonal(rng, n);
  Vector w(n);
  for (Index i = 0; i < n; ++i) {
    const double frac = n > 1 ? static_cast<double>(i) / static_cast<double>(n - 1) : 1.0;
    w(i) = std::pow(condition, frac - 1.0);
  }
  Matrix Q = U * w.asDiagonal() * U.transpose();
  Q = 0.5 * (Q + Q.transpose()).eval();
  const Vector center = rng.normal_vector(n);
  Vector b = -(Q * center);
  return QuadraticFunction(std::move(Q), std::move(b), 0.0);
}

MaxAffineFunction random_max_affine(Rng& rng, Index n, Index m) {
  Matrix V = rng.normal_matrix(n, m);
  Vector b = rng.normal_vector(m);
  return MaxAffineFunction(std::move(V), std::move(b));
}

KnownOptimum composite_optimum_dual(const MaxAffineFunction& f, const QuadraticFunction& g) {
  const Eigen::LLT<Matrix> llt(g.hessian());
  if (llt.info() != Eigen::Success)
    throw NumericError("composite dual optimum needs a positive definite quadratic");
  Matrix F = llt.matrixL().solve(f.slopes());
  const Vector z = llt.matrixL().solve(g.linear());
  Vector c = F.transpose() * z - f.intercepts();
  const SimplexQP qp = SimplexQP::factored(std::move(F), 1.0, std::move(c));
  SimplexQPOptions opts;
  opts.tol = 1e-13;
  opts.max_iterations = 1000000;
  const SimplexQPResult res = solve(qp, opts);
  KnownOptimum out;
  out.x_star = -llt.solve(f.slopes() * res.lambda + g.linear());
  out.f_star = f.value(out.x_star) + g.value(out.x_star);
  out.numeric = true;
  return out;
}

KnownOptimum composite_optimum_reference(const MaxAffineFunction& f, const QuadraticFunction& g,
                                         const Vector& x0) {
  SolverConfig cfg;
  cfg.rho = std::max(g.smoothness(), 1e-3);
  cfg.max_iter = 1000000;
  cfg.stationarity_tol = 1e-13;
  cfg.qp.tol = 1e-12;
  cfg.B = 1.0;
  const RunResult run = apbm_composite_run(f, g, x0, cfg);
  KnownOptimum out;
  out.x_star = run.solution;
  out.f_star = run.solution_value;
  out.numeric = true;
  return out;
}

Problem make_problem(const ProblemDescriptor& d) {
  d.validate();
  Rng rng(d.seed);
  Problem p;
  p.descriptor = d;

  if (d.family == "quadratic") {
    auto q = std::make_shared<const QuadraticFunction>(random_quadratic(rng, d.n, d.condition));
    p.L = q->smoothness();
    p.optimum = q->optimum();
    p.smooth = q;
    p.objective = q;
  } else if (d.family == "log-sum-exp") {
    Matrix A = rng.normal_matrix(d.m, d.n);
    // Shifting by a positive convex combination of the rows puts 0 strictly
    // inside their hull, so the function is bounded below. Uniform weights
    // would make x = 0 stationary.
    Vector w(d.m);
    for (Index i = 0; i < d.m; ++i) w(i) = 0.5 + rng.uniform();
    w /= w.sum();
    A.rowwise() -= w.transpose() * A;
    auto f = std::make_shared<const LogSumExpFunction>(std::move(A), d.sigma);
    p.L = f->smoothness();
    p.smooth = f;
    p.objective = f;
  } else if (d.family == "least-squares") {
    Matrix A = rng.normal_matrix(d.m, d.n);
    Vector y = rng.normal_vector(d.m);
    auto f = std::make_shared<const LeastSquaresFunction>(std::move(A), std::move(y));
    p.L = f->smoothness();
    p.optimum = f->optimum();
    p.smooth = f;
    p.objective = f;
  } else {
    auto f = std::make_shared<const MaxAffineFunction>(random_max_affine(rng, d.n, d.m));
    auto g = std::make_shared<const QuadraticFunction>(random_quadratic(rng, d.n, d.condition));
    p.polyhedral = f;
    p.quadratic = g;
    p.L = g->smoothness();
    p.objective = std::make_shared<const CompositeFunction>(f, g);
  }

  if (d.x0 == "zero") {
    p.x0 = Vector::Zero(d.n);
  } else if (d.x0 == "ones") {
    p.x0 = Vector::Ones(d.n);
  } else {
    p.x0 = rng.normal_vector(d.n);
  }

  if (p.polyhedral) p.optimum = composite_optimum_reference(*p.polyhedral, *p.quadratic, p.x0);
  return p;
}

}  // namespace bundlekit
