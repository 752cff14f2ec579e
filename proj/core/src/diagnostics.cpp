#include "bundlekit/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "bundlekit/errors.hpp"

namespace bundlekit {

void InequalityCount::add(double margin, long index) {
  if (checked == 0 || margin < worst_margin) {
    worst_margin = margin;
    worst_index = index;
  }
  ++checked;
  if (margin < 0.0) ++violations;
}

InequalityCount count_xi_decay_violations(const std::vector<TraceRecord>& trace, double tau,
                                          double rel_tol) {
  InequalityCount out;
  for (std::size_t j = 0; j + 1 < trace.size(); ++j) {
    const TraceRecord& a = trace[j];
    const TraceRecord& b = trace[j + 1];
    if (a.kind != StepKind::Null || b.kind != StepKind::Null) continue;
    if (!std::isfinite(a.xi) || !std::isfinite(b.xi)) continue;
    const double bound = tau * a.xi + rel_tol * (1.0 + std::abs(a.xi));
    out.add(bound - b.xi, static_cast<long>(j + 1));
  }
  return out;
}

InequalityCount count_accelerated_envelope_violations(const std::vector<TraceRecord>& trace, double rho,
                                                      double dist0_sq, double tol) {
  InequalityCount out;
  for (std::size_t j = 0; j < trace.size(); ++j) {
    const TraceRecord& r = trace[j];
    if (r.kind != StepKind::Serious || r.serious_count < 1 || !std::isfinite(r.gap)) continue;
    const double k1 = static_cast<double>(r.serious_count + 1);
    out.add(2.0 * rho * dist0_sq / (k1 * k1) + tol - r.gap, static_cast<long>(j));
  }
  return out;
}

InequalityCount count_composite_envelope_violations(const std::vector<TraceRecord>& trace, double rho,
                                                    double B, double initial_gap, double dist0_sq,
                                                    double tol) {
  InequalityCount out;
  const double numerator = 4.0 * (initial_gap + 0.5 * rho * dist0_sq + B);
  for (std::size_t j = 0; j < trace.size(); ++j) {
    const TraceRecord& r = trace[j];
    if (r.kind != StepKind::Serious || !std::isfinite(r.gap)) continue;
    const double k2 = static_cast<double>(r.serious_count + 2);
    out.add(numerator / (k2 * k2) + tol - r.gap, static_cast<long>(j));
  }
  return out;
}

InequalityCount count_criterion_violations(const std::vector<TraceRecord>& trace, double tol) {
  InequalityCount out;
  for (std::size_t j = 0; j < trace.size(); ++j) {
    const TraceRecord& r = trace[j];
    if (r.kind != StepKind::Serious || std::isnan(r.criterion_slack)) continue;
    out.add(r.criterion_slack + tol, static_cast<long>(j));
  }
  return out;
}

InequalityCount count_model_monotonicity_violations(const std::vector<TraceRecord>& trace,
                                                    double rel_tol) {
  InequalityCount out;
  for (std::size_t j = 0; j + 1 < trace.size(); ++j) {
    const TraceRecord& a = trace[j];
    const TraceRecord& b = trace[j + 1];
    if (a.kind != StepKind::Null || !std::isfinite(a.m) || !std::isfinite(b.m)) continue;
    out.add(b.m - a.m + rel_tol * (1.0 + std::abs(a.m)), static_cast<long>(j + 1));
  }
  return out;
}

InequalityCount count_momentum_identity_violations(const std::vector<TraceRecord>& trace, double tol) {
  InequalityCount out;
  for (std::size_t j = 0; j < trace.size(); ++j) {
    const TraceRecord& r = trace[j];
    if (r.kind != StepKind::Serious || std::isnan(r.momentum_residual)) continue;
    out.add(tol - std::abs(r.momentum_residual), static_cast<long>(j));
  }
  return out;
}

InequalityCount count_negative_xi(const std::vector<TraceRecord>& trace, double rel_tol) {
  InequalityCount out;
  for (std::size_t j = 0; j < trace.size(); ++j) {
    const TraceRecord& r = trace[j];
    if (!std::isfinite(r.xi)) continue;
    out.add(r.xi + rel_tol * (1.0 + std::abs(r.m)), static_cast<long>(j));
  }
  return out;
}

long serious_step_budget(double rho, double dist0, double eps) {
  return static_cast<long>(std::ceil(std::sqrt(2.0 * rho) * dist0 / std::sqrt(eps)));
}

InequalityCount type2_probe_check(const ConvexFunction& h, const std::vector<TraceRecord>& trace,
                                  double radius, int probes, Rng& rng, double rel_tol) {
  InequalityCount out;
  const double log_lo = std::log(1e-3);
  const double log_hi = std::log(10.0);
  for (std::size_t j = 0; j < trace.size(); ++j) {
    const TraceRecord& r = trace[j];
    if (r.kind != StepKind::Serious || r.y.size() == 0 || r.center.size() == 0) continue;
    const double h_y = h.value(r.y);
    const Vector s = r.rho * (r.center - r.y);
    const double slack = 0.5 * r.rho * r.epsilon * r.epsilon;
    const double tol = rel_tol * (1.0 + std::abs(h_y));
    for (int p = 0; p < probes; ++p) {
      const double scale = radius * std::exp(rng.uniform(log_lo, log_hi));
      const Vector probe = r.y + rng.sphere_point(r.y.size(), scale);
      const double margin = h.value(probe) - (h_y + s.dot(probe - r.y) - slack) + tol;
      out.add(margin, static_cast<long>(j));
    }
  }
  return out;
}

}  // namespace bundlekit

namespace bundlekit {

RecurrenceCheck recurrence_lemma_check(double r0, double c_prime, long kmax) {
  if (!(r0 >= 0.0) || !(c_prime >= 0.0)) throw InputDomainError("recurrence check: r0 and C' must be nonnegative");
  if (kmax < 1 || kmax > 1000000) throw InputDomainError("recurrence check: kmax must lie in [1, 1e6]");
  const double pi2 = std::numbers::pi * std::numbers::pi;
  const double coeff = std::exp(2.0) * r0 + c_prime * pi2 * std::exp(3.0 + pi2 / 3.0) / 3.0;
  RecurrenceCheck out;
  double r = r0;
  for (long k = 0; k < kmax; ++k) {
    const double k2 = static_cast<double>(k + 2);
    r = (1.0 + 2.0 / k2) * r + 2.0 * c_prime / k2;
    const double kk = static_cast<double>(k + 1);
    const double bound = coeff * kk * kk;
    const double ratio = bound > 0.0 ? r / bound : (r > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
    out.worst_ratio = std::max(out.worst_ratio, ratio);
    if (r > bound && out.holds) {
      out.holds = false;
      out.first_violation = k + 1;
    }
  }
  return out;
}

}  // namespace bundlekit
