#pragma once

#include <cstdint>
#include <random>

#include <Eigen/Core>

namespace bundlekit {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Index = Eigen::Index;

/// Seeded random source with bit-reproducible uniform and normal draws.
///
/// Only the raw 64-bit output of std::mt19937_64 is standardized, so the
/// conversion to doubles is done here rather than through the <random>
/// distributions, whose algorithms differ between standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [0, 1).
  double uniform();
  /// Uniform on [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Standard normal (Box-Muller, both draws used).
  double normal();
  /// Integer uniform on [lo, hi].
  long integer(long lo, long hi);

  Vector normal_vector(Index n);
  Matrix normal_matrix(Index rows, Index cols);
  /// Uniformly random direction scaled to `radius`.
  Vector sphere_point(Index n, double radius);

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

bool all_finite(const Vector& v);
bool all_finite(const Matrix& m);

/// Largest eigenvalue of a symmetric matrix.
double largest_eigenvalue(const Matrix& symmetric);

/// Smallest eigenvalue of a symmetric matrix.
double smallest_eigenvalue(const Matrix& symmetric);

/// Largest eigenvalue of FᵀF, computed on whichever Gram matrix (FFᵀ or FᵀF)
/// is smaller.
double largest_gram_eigenvalue(const Matrix& factor);

/// Random orthogonal matrix (Q factor of a Gaussian matrix, sign-fixed).
Matrix random_orthogonal(Rng& rng, Index n);

}  // namespace bundlekit
