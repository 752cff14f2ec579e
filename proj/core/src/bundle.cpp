#include "bundlekit/bundle.hpp"

#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>

#include "bundlekit/errors.hpp"
#include "bundlekit/hexfloat.hpp"
#include "bundlekit/log.hpp"

namespace bundlekit {

Bundle::Bundle(Index dimension, std::optional<Index> capacity)
    : n_(dimension), capacity_(capacity), G_(dimension, 0) {
  if (dimension <= 0) throw InputDomainError("bundle: dimension must be positive");
  if (capacity && *capacity < 2) throw InputDomainError("bundle: capacity must be at least 2");
}

void Bundle::add_cut(const Vector& point, double value, const Vector& gradient) {
  if (point.size() != n_ || gradient.size() != n_)
    throw InputDomainError("bundle: cut dimension mismatch");
  if (!point.allFinite() || !gradient.allFinite() || !std::isfinite(value))
    throw InputDomainError("bundle: non-finite cut");

  cuts_.push_back(Cut{point, value, gradient});
  const Index m = size();
  G_.conservativeResize(n_, m);
  G_.col(m - 1) = gradient;
  offsets_.conservativeResize(m);
  offsets_(m - 1) = gradient.dot(point) - value;
  sq_norms_.conservativeResize(m);
  sq_norms_(m - 1) = gradient.squaredNorm();

  if (capacity_ && m > *capacity_) {
    for (Index i = 0; i < m - 1; ++i) {
      if (protected_ && *protected_ == i) continue;
      erase(i);
      break;
    }
  }
}

void Bundle::mark_serious() {
  if (!cuts_.empty()) protected_ = size() - 1;
}

void Bundle::erase(Index i) {
  const Index m = size();
  cuts_.erase(cuts_.begin() + i);
  const Index tail = m - i - 1;
  G_.middleCols(i, tail) = G_.rightCols(tail).eval();
  G_.conservativeResize(n_, m - 1);
  offsets_.segment(i, tail) = offsets_.tail(tail).eval();
  offsets_.conservativeResize(m - 1);
  sq_norms_.segment(i, tail) = sq_norms_.tail(tail).eval();
  sq_norms_.conservativeResize(m - 1);
  if (protected_ && *protected_ > i) --*protected_;
}

ModelEvaluation eval_cutting_plane(const Bundle& bundle, const Vector& y) {
  if (bundle.empty()) throw InputDomainError("cutting-plane model: empty bundle");
  if (y.size() != bundle.dimension()) throw InputDomainError("cutting-plane model: dimension mismatch");
  const Vector values = bundle.gradients().transpose() * y - bundle.offsets();
  Index best = 0;
  for (Index i = 1; i < values.size(); ++i)
    if (values(i) > values(best)) best = i;
  ModelEvaluation out;
  out.value = values(best);
  out.gradient = bundle.gradients().col(best);
  out.lambda = Vector::Unit(bundle.size(), best);
  return out;
}

SimplexQP smooth_model_qp(const Bundle& bundle, double L, const Vector& y) {
  if (bundle.empty()) throw InputDomainError("smooth model: empty bundle");
  if (!(L > 0.0) || !std::isfinite(L)) throw InputDomainError("smooth model: L must be positive");
  if (y.size() != bundle.dimension()) throw InputDomainError("smooth model: dimension mismatch");
  Vector c = -(bundle.gradients().transpose() * y - bundle.offsets() + bundle.squared_norms() / (2.0 * L));
  return SimplexQP::factored(bundle.gradients(), 1.0 / L, std::move(c));
}

ModelEvaluation eval_smooth_model(const Bundle& bundle, double L, const Vector& y,
                                  const SimplexQPOptions& options,
                                  const std::optional<Vector>& warm_start) {
  const SimplexQP qp = smooth_model_qp(bundle, L, y);
  const SimplexQPResult res = solve(qp, options, warm_start);
  ModelEvaluation out;
  out.value = -res.objective;
  out.gradient = bundle.gradients() * res.lambda;
  const Vector grad = qp.gradient(res.lambda);
  out.dual_gap = std::max(0.0, grad.dot(res.lambda) - grad.minCoeff());
  out.lambda = res.lambda;
  out.residual = res.residual;
  out.iterations = res.iterations;
  return out;
}

double model_diameter(const Bundle& bundle) {
  if (bundle.empty()) throw InputDomainError("model diameter: empty bundle");
  const Matrix& G = bundle.gradients();
  double best = 0.0;
  for (Index i = 0; i < G.cols(); ++i)
    for (Index j = i + 1; j < G.cols(); ++j) best = std::max(best, (G.col(i) - G.col(j)).norm());
  return best;
}

InterpolationReport verify_interpolation(const Bundle& bundle, double L,
                                         const SimplexQPOptions& options) {
  InterpolationReport report;
  for (Index i = 0; i < bundle.size(); ++i) {
    const Cut& c = bundle.cut(i);
    const ModelEvaluation ev = eval_smooth_model(bundle, L, c.point, options);
    report.max_value_error = std::max(report.max_value_error, std::abs(ev.value - c.value));
    report.max_gradient_error = std::max(report.max_gradient_error, (ev.gradient - c.gradient).norm());
  }
  return report;
}

LowerBoundReport check_lower_bound(const Bundle& bundle, double L, const ConvexFunction& f,
                                   const std::vector<Vector>& probes, double threshold,
                                   const SimplexQPOptions& options) {
  LowerBoundReport report;
  report.max_excess = -std::numeric_limits<double>::infinity();
  for (const Vector& y : probes) {
    const double excess = eval_smooth_model(bundle, L, y, options).value - f.value(y);
    if (excess > report.max_excess) {
      report.max_excess = excess;
      report.worst_point = y;
    }
  }
  if (report.max_excess > threshold) {
    report.violated = true;
    std::ostringstream msg;
    msg << "smooth model exceeds " << f.name() << " by " << report.max_excess
        << ": lower-bound property p(y) <= f(y) violated, declared L = " << L
        << " is below the true smoothness constant";
    warn(msg.str());
  }
  return report;
}

void dump_bundle(const Bundle& bundle, std::ostream& out) {
  for (Index i = 0; i < bundle.size(); ++i) {
    const Cut& c = bundle.cut(i);
    for (Index k = 0; k < c.point.size(); ++k) out << hexfloat(c.point(k)) << '\t';
    out << hexfloat(c.value);
    for (Index k = 0; k < c.gradient.size(); ++k) out << '\t' << hexfloat(c.gradient(k));
    out << '\n';
  }
}

Bundle load_bundle(std::istream& in) {
  std::vector<std::vector<double>> rows;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<double> row;
    std::istringstream fields(line);
    std::string token;
    while (std::getline(fields, token, '\t')) {
      try {
        row.push_back(parse_hexfloat(token));
      } catch (const ConfigError& e) {
        throw ConfigError(e.what(), line_no);
      }
    }
    if (row.size() < 3 || row.size() % 2 == 0)
      throw ConfigError("bundle dump: expected 2n+1 fields, got " + std::to_string(row.size()), line_no);
    if (!rows.empty() && row.size() != rows.front().size())
      throw ConfigError("bundle dump: inconsistent field count", line_no);
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ConfigError("bundle dump: no cuts");
  const auto n = static_cast<Index>((rows.front().size() - 1) / 2);
  Bundle bundle(n);
  for (const auto& row : rows) {
    const Vector y = Eigen::Map<const Vector>(row.data(), n);
    const Vector g = Eigen::Map<const Vector>(row.data() + n + 1, n);
    bundle.add_cut(y, row[static_cast<std::size_t>(n)], g);
  }
  return bundle;
}

}  // namespace bundlekit
