#pragma once

#include <iosfwd>
#include <optional>
#include <vector>

#include "bundlekit/function_oracle.hpp"
#include "bundlekit/linalg.hpp"
#include "bundlekit/simplex_qp.hpp"

namespace bundlekit {

/// One supporting hyperplane: f(y) ≥ value + ⟨gradient, y − point⟩.
struct Cut {
  Vector point;
  double value = 0.0;
  Vector gradient;
};

/// Ordered set of cuts with cached gradient matrix G (n × m), offsets
/// ⟨gᵢ, yᵢ⟩ − fᵢ and squared gradient norms.
///
/// With a capacity, appending past it drops the oldest cut other than the
/// protected one (see mark_serious) and the one just appended.
class Bundle {
 public:
  explicit Bundle(Index dimension, std::optional<Index> capacity = std::nullopt);

  void add_cut(const Vector& point, double value, const Vector& gradient);
  void add_cut(const Vector& point, const Evaluation& ev) { add_cut(point, ev.value, ev.gradient); }

  /// Protects the newest cut from eviction until the next call.
  void mark_serious();

  Index dimension() const { return n_; }
  Index size() const { return static_cast<Index>(cuts_.size()); }
  bool empty() const { return cuts_.empty(); }
  std::optional<Index> capacity() const { return capacity_; }

  const Cut& cut(Index i) const { return cuts_[static_cast<std::size_t>(i)]; }
  const Matrix& gradients() const { return G_; }
  const Vector& offsets() const { return offsets_; }
  const Vector& squared_norms() const { return sq_norms_; }
  /// Position of the protected cut, if any.
  std::optional<Index> protected_index() const { return protected_; }

 private:
  void erase(Index i);

  Index n_;
  std::optional<Index> capacity_;
  std::vector<Cut> cuts_;
  Matrix G_;
  Vector offsets_;
  Vector sq_norms_;
  std::optional<Index> protected_;
};

/// Model value at a query point with its gradient witness u = Gλ.
struct ModelEvaluation {
  double value = 0.0;
  Vector gradient;
  Vector lambda;
  /// Frank-Wolfe gap of the inner maximization; bounds how far `value`
  /// sits below the exact model value.
  double dual_gap = 0.0;
  double residual = 0.0;
  long iterations = 0;
};

/// Cutting-plane model l(y) = maxᵢ fᵢ + ⟨gᵢ, y − yᵢ⟩, lowest index on ties.
ModelEvaluation eval_cutting_plane(const Bundle& bundle, const Vector& y);

/// Smallest convex L-smooth function consistent with the bundle, evaluated
/// through its simplex dual:
///   p(y) = max_{λ∈Δ} ⟨λ, Gᵀy − offsets + ‖g‖²/(2L)⟩ − ‖Gλ‖²/(2L).
ModelEvaluation eval_smooth_model(const Bundle& bundle, double L, const Vector& y,
                                  const SimplexQPOptions& options = {},
                                  const std::optional<Vector>& warm_start = std::nullopt);

/// The inner QP behind eval_smooth_model (for dumps and tests).
SimplexQP smooth_model_qp(const Bundle& bundle, double L, const Vector& y);

/// Largest pairwise distance between bundle gradients.
double model_diameter(const Bundle& bundle);

struct InterpolationReport {
  double max_value_error = 0.0;
  double max_gradient_error = 0.0;
};

/// Evaluates the smooth model at every bundle point and compares with the
/// stored value and gradient.
InterpolationReport verify_interpolation(const Bundle& bundle, double L,
                                         const SimplexQPOptions& options = {});

struct LowerBoundReport {
  /// max over probes of p(y) − f(y).
  double max_excess = 0.0;
  Vector worst_point;
  bool violated = false;
};

/// Samples p(y) − f(y) at the given probes. If it exceeds `threshold`
/// anywhere, a warning is emitted: the declared L is smaller than the true
/// smoothness constant, so the model is no longer a lower bound.
LowerBoundReport check_lower_bound(const Bundle& bundle, double L, const ConvexFunction& f,
                                   const std::vector<Vector>& probes, double threshold = 1e-6,
                                   const SimplexQPOptions& options = {});

/// One line per cut: point, value, gradient, tab separated, hex floats.
void dump_bundle(const Bundle& bundle, std::ostream& out);
Bundle load_bundle(std::istream& in);

}  // namespace bundlekit
