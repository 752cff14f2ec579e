#include "bundlekit/rate_fit.hpp"

#include <algorithm>
#include <cmath>

#include "bundlekit/errors.hpp"

namespace bundlekit {

FitKind parse_fit_kind(const std::string& name) {
  if (name == "gap") return FitKind::Gap;
  if (name == "nullrun") return FitKind::NullRun;
  throw ConfigError("unknown fit kind '" + name + "' (expected gap or nullrun)");
}

const char* to_string(FitKind kind) { return kind == FitKind::Gap ? "gap" : "nullrun"; }

RateFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw InputDomainError("fit: x and y differ in length");
  const auto n = static_cast<double>(x.size());
  if (x.size() < 5) throw InsufficientDataError("fit: need at least 5 points, have " + std::to_string(x.size()));
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0;
  double sxy = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (!(sxx > 0.0)) throw InsufficientDataError("fit: x values are all equal");
  RateFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double sse = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double e = y[i] - (fit.slope * x[i] + fit.intercept);
    sse += e * e;
  }
  fit.r_squared = syy > 0.0 ? 1.0 - sse / syy : 1.0;
  fit.points = static_cast<long>(x.size());
  return fit;
}

RateFit fit_gap_rate(const std::vector<std::vector<TraceRecord>>& traces) {
  std::vector<double> x;
  std::vector<double> y;
  for (const auto& trace : traces) {
    long k = 0;
    for (const TraceRecord& r : trace) {
      if (r.kind != StepKind::Serious) continue;
      ++k;
      if (!(r.gap > 0.0) || !std::isfinite(r.gap)) continue;
      x.push_back(std::log(static_cast<double>(k + 1)));
      y.push_back(std::log(r.gap));
    }
  }
  RateFit fit = fit_line(x, y);
  fit.kind = FitKind::Gap;
  return fit;
}

long max_null_run(const std::vector<TraceRecord>& trace) {
  long best = 0;
  for (const TraceRecord& r : trace)
    if (r.kind == StepKind::Null) best = std::max(best, r.null_run_len);
  return best;
}

RateFit fit_null_run_rate(const std::vector<std::vector<TraceRecord>>& traces,
                          const std::vector<double>& eps) {
  if (traces.size() != eps.size()) throw InputDomainError("fit: need one epsilon per trace");
  std::vector<double> x;
  std::vector<double> y;
  for (std::size_t i = 0; i < traces.size(); ++i) {
    if (!(eps[i] > 0.0)) throw InputDomainError("fit: epsilon values must be positive");
    x.push_back(std::log(1.0 / eps[i]));
    y.push_back(static_cast<double>(max_null_run(traces[i])));
  }
  RateFit fit = fit_line(x, y);
  fit.kind = FitKind::NullRun;
  return fit;
}

}  // namespace bundlekit
