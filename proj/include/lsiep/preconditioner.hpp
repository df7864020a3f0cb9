#pragma once

#include <vector>

#include <Eigen/Cholesky>

#include "lsiep/model.hpp"

namespace lsiep {

/// Default shift added to the centered preconditioner.
inline constexpr double kDefaultPrecondShift = 1e-5;

/// The centered preconditioner
///
///   M[Z] = sum_i tr(A_i Z) A_i + [S, [S, Z]] + (Q P P^T Q^T) Z (Q P P^T Q^T) + t Z,
///
/// with S = Q Lambda_bar Q^T, frozen at one outer iterate. In vectorized form
/// M = B + A_hat A_hat^T where B = (Q x Q) diag(D) (Q x Q)^T has the entrywise
/// weights D_ab = (lambda_bar_a - lambda_bar_b)^2 + p_a p_b + t and p_a = 1 for
/// the free (trailing n-m) coordinates. B is inverted by rotating into the
/// Q basis and dividing by D; the rank-l term goes through
/// Sherman-Morrison-Woodbury with an l x l Cholesky factor.
///
/// Immutable after construction; apply/apply_inverse are thread-safe.
class PrecondState {
public:
  /// Throws ConfigError if t_hat <= 0 and NumericError if the l x l core is
  /// not positive definite.
  PrecondState(const ProblemData &p, const ManifoldPoint &x, double t_hat = kDefaultPrecondShift);

  AmbientSym apply(const AmbientSym &z) const;
  AmbientSym apply_inverse(const AmbientSym &z) const;

  /// z -> Q ((Q^T z Q) ./ D) Q^T.
  AmbientSym apply_b_inverse(const AmbientSym &z) const;

  double t_hat() const { return t_hat_; }
  const Matrix &q_ref() const { return q_; }
  const Vector &lam_bar() const { return lam_bar_; }
  /// D_ab.
  const Matrix &weights() const { return weights_; }
  /// I_l + [tr(A_i B^{-1} A_j)]_ij.
  const Matrix &smw_core() const { return core_; }
  /// B^{-1} A_i for i = 1..l.
  const std::vector<AmbientSym> &b_inv_basis() const { return b_inv_basis_; }

private:
  const ProblemData *p_;
  Matrix q_;
  Vector lam_bar_;
  double t_hat_;
  Matrix weights_;
  std::vector<AmbientSym> b_inv_basis_;
  std::vector<Matrix> rotated_basis_;
  std::vector<Matrix> rotated_b_inv_basis_;
  Matrix core_;
  Eigen::LLT<Matrix> core_factor_;
};

/// Free-function spellings of the operations above.
inline PrecondState build_preconditioner(const ProblemData &p, const ManifoldPoint &x,
                                         double t_hat = kDefaultPrecondShift) {
  return PrecondState(p, x, t_hat);
}

} // namespace lsiep
