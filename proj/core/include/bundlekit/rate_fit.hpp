#pragma once

#include <string>
#include <vector>

#include "bundlekit/solvers.hpp"

namespace bundlekit {

enum class FitKind {
  /// log gap against log(k + 1) over serious steps k ≥ 1.
  Gap,
  /// max null run against log(1/ε), one point per trace.
  NullRun,
};

FitKind parse_fit_kind(const std::string& name);
const char* to_string(FitKind kind);

struct RateFit {
  FitKind kind = FitKind::Gap;
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  long points = 0;
};

/// Ordinary least squares y ≈ slope·x + intercept. Needs ≥ 5 points and
/// nonconstant x (InsufficientDataError otherwise). R² is 1 when y is
/// constant.
RateFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

/// Pools the serious rows of all traces. Rows with a nonpositive or missing
/// gap are skipped.
RateFit fit_gap_rate(const std::vector<std::vector<TraceRecord>>& traces);

/// One point (log(1/ε), max null run) per trace.
RateFit fit_null_run_rate(const std::vector<std::vector<TraceRecord>>& traces,
                          const std::vector<double>& eps);

long max_null_run(const std::vector<TraceRecord>& trace);

}  // namespace bundlekit
