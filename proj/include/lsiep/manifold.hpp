#pragma once

#include <cstddef>

#include <Eigen/Dense>

namespace lsiep {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Length of the strict upper triangle of an n x n matrix.
constexpr std::size_t triangular_size(std::size_t n) { return n * (n - 1) / 2; }

/// Stacks the strictly upper triangular part of `w` column by column: entry
/// (i, j) with i < j lands at position j*(j-1)/2 + i (zero-based).
Vector vec_hat(const Matrix &w);

/// Inverse of vec_hat: the skew-symmetric matrix whose strict upper triangle is
/// `w`. Throws DimensionError if the length is not a triangular number.
Matrix skew_hat(const Vector &w);

/// A point (c, Q, Lambda) of R^l x O(n) x D(n-m). `lambda` holds the diagonal
/// of the free block Lambda.
struct ManifoldPoint {
  Vector c;
  Matrix q;
  Vector lambda;

  std::size_t n() const { return static_cast<std::size_t>(q.rows()); }
  std::size_t l() const { return static_cast<std::size_t>(c.size()); }
  /// Number of free eigenvalues, n - m.
  std::size_t free_count() const { return static_cast<std::size_t>(lambda.size()); }

  /// ||Q^T Q - I||_F.
  double orthogonality_error() const;
};

/// A tangent vector (dc, Q*Omega, dLambda) at some ManifoldPoint, stored in
/// reduced coordinates: Omega is kept as its strict upper triangle (vec_hat
/// order); skew-symmetric by construction.
class TangentVector {
public:
  TangentVector() = default;

  /// Zero tangent vector for the given shape.
  TangentVector(std::size_t l, std::size_t n, std::size_t free_count);

  /// From a full n x n generator; only the skew part (W - W^T)/2 is kept.
  static TangentVector from_generator(Vector dc, const Matrix &omega, Vector dlambda);

  /// From reduced coordinates directly.
  static TangentVector from_coordinates(Vector dc, Vector omega_upper, Vector dlambda);

  static TangentVector zero_like(const ManifoldPoint &x);

  const Vector &dc() const { return dc_; }
  const Vector &omega_upper() const { return omega_upper_; }
  const Vector &dlambda() const { return dlambda_; }
  Vector &dc() { return dc_; }
  Vector &omega_upper() { return omega_upper_; }
  Vector &dlambda() { return dlambda_; }

  std::size_t n() const { return n_; }
  std::size_t l() const { return static_cast<std::size_t>(dc_.size()); }
  std::size_t free_count() const { return static_cast<std::size_t>(dlambda_.size()); }

  /// Dimension of the tangent space, l + n(n-1)/2 + (n-m).
  std::size_t dimension() const;

  /// The full skew-symmetric Omega.
  Matrix omega() const;

  /// All coordinates concatenated as (dc, omega_upper, dlambda). Note the
  /// metric weights the omega block by 2.
  Vector flatten() const;
  static TangentVector unflatten(const Vector &flat, std::size_t l, std::size_t n,
                                 std::size_t free_count);

  bool all_finite() const;

  TangentVector &operator+=(const TangentVector &o);
  TangentVector &operator-=(const TangentVector &o);
  TangentVector &operator*=(double s);

  friend TangentVector operator+(TangentVector a, const TangentVector &b) { return a += b; }
  friend TangentVector operator-(TangentVector a, const TangentVector &b) { return a -= b; }
  friend TangentVector operator*(double s, TangentVector a) { return a *= s; }
  friend TangentVector operator*(TangentVector a, double s) { return a *= s; }
  friend TangentVector operator-(TangentVector a) { return a *= -1.0; }

private:
  void require_same_shape(const TangentVector &o) const;

  std::size_t n_ = 0;
  Vector dc_;
  Vector omega_upper_;
  Vector dlambda_;
};

/// Riemannian metric: dc_u.dc_v + tr(Omega_u^T Omega_v) + dl_u.dl_v. The Q
/// factors of the ambient representation Q*Omega cancel.
double inner(const ManifoldPoint &x, const TangentVector &u, const TangentVector &v);

double norm(const ManifoldPoint &x, const TangentVector &u);

/// qf(a): orthogonal factor of a = QR with R normalized to a positive diagonal.
Matrix qf(const Matrix &a);

/// QR-based retraction (c + t dc, qf(Q + t Q Omega), lambda + t dlambda).
/// Throws RetractionError if the QR factor cannot be normalized.
ManifoldPoint retract(const ManifoldPoint &x, const TangentVector &u, double t);

void check_tangent(const ManifoldPoint &x, const TangentVector &u);

} // namespace lsiep
