#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "bundlekit/function_oracle.hpp"

namespace bundlekit {

/// Test-problem descriptor, serialized as key=value lines.
///
/// Families:
///   quadratic                  Q = U diag(geometric in [1/condition, 1]) Uᵀ, b = −Qx̂
///   log-sum-exp                m centered rows, smoothing sigma
///   least-squares              A is m × n Gaussian, y Gaussian
///   max-affine-plus-quadratic  m Gaussian pieces plus a quadratic as above
struct ProblemDescriptor {
  std::string family = "quadratic";
  Index n = 20;
  Index m = 5;
  double condition = 100.0;
  double sigma = 1.0;
  std::uint64_t seed = 7;
  /// zero | ones | random
  std::string x0 = "zero";

  /// Accepts a recognized key; returns false for keys this struct does not
  /// own. Throws ConfigError on bad values.
  bool set(const std::string& key, const std::string& value, int line = 0);
  std::string serialize() const;
  void validate() const;
};

ProblemDescriptor parse_problem_descriptor(std::istream& in);
/// Reads "k=v" tokens separated by whitespace, commas or semicolons.
ProblemDescriptor parse_problem_descriptor_inline(const std::string& text);

const std::vector<std::string>& registered_families();

struct Problem {
  ProblemDescriptor descriptor;
  std::shared_ptr<const ConvexFunction> objective;
  /// Set for the smooth families.
  std::shared_ptr<const SmoothConvexFunction> smooth;
  /// Set for the composite family.
  std::shared_ptr<const MaxAffineFunction> polyhedral;
  std::shared_ptr<const QuadraticFunction> quadratic;
  /// Smoothness of the smooth part (L_f, or L_g for the composite family).
  double L = 0.0;
  std::optional<KnownOptimum> optimum;
  Vector x0;
};

/// Deterministic in (descriptor, seed). The composite optimum comes from a
/// long reference run and is flagged numeric.
Problem make_problem(const ProblemDescriptor& d);

/// Standalone generators used by the tests and the acceptance suite.
QuadraticFunction random_quadratic(Rng& rng, Index n, double condition);
MaxAffineFunction random_max_affine(Rng& rng, Index n, Index m);

/// Optimum of max-affine + quadratic via the dual simplex QP; requires the
/// quadratic's Hessian to be positive definite. Used to cross-check the
/// reference run.
KnownOptimum composite_optimum_dual(const MaxAffineFunction& f, const QuadraticFunction& g);

/// Optimum of the composite problem by a long run of the composite solver.
KnownOptimum composite_optimum_reference(const MaxAffineFunction& f, const QuadraticFunction& g,
                                         const Vector& x0);

}  // namespace bundlekit
