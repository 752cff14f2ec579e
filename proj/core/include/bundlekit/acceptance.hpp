#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace bundlekit {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
  /// Wall-clock limit from the criterion, 0 if it has none.
  double limit_seconds = 0.0;
};

struct AcceptanceOptions {
  /// Criterion ids to run; empty runs all of them.
  std::vector<int> only;
  /// Multiplies τ_bound in the ξ-decay check. Values below 1 must make it fail.
  double tau_scale = 1.0;
  /// Multiplies the true L handed to the smooth model in the certificate
  /// check. Values below 1 must trigger the lower-bound warning.
  double l_scale = 1.0;
};

int acceptance_criterion_count();

/// Runs the selected criteria in id order. Exceptions inside a criterion are
/// reported as a failure of that criterion.
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& options = {});

/// One line per criterion, then a totals line.
void print_acceptance_report(const std::vector<CriterionResult>& results, std::ostream& out);

bool all_passed(const std::vector<CriterionResult>& results);

}  // namespace bundlekit
