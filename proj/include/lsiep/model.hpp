#pragma once

#include <cstddef>
#include <vector>

#include "lsiep/manifold.hpp"

namespace lsiep {

/// A symmetric n x n matrix in the codomain of H (residuals, operands of the
/// adjoint and the preconditioner).
using AmbientSym = Matrix;

/// An LSIEP instance: basis matrices A_0..A_l and prescribed eigenvalues
/// lambda*_1 <= ... <= lambda*_m. Immutable after construction.
class ProblemData {
public:
  /// Symmetrizes every basis matrix. Throws DimensionError on shape problems
  /// and ConfigError if the targets are not sorted or m > n.
  ProblemData(std::vector<Matrix> basis, Vector target_eigs);

  std::size_t n() const { return n_; }
  std::size_t l() const { return basis_.size() - 1; }
  std::size_t m() const { return static_cast<std::size_t>(targets_.size()); }

  const Matrix &a0() const { return basis_.front(); }
  /// A_i for i in 1..l (index 0 is A_0).
  const Matrix &basis(std::size_t i) const { return basis_.at(i); }
  const std::vector<Matrix> &basis() const { return basis_; }
  const Vector &target_eigs() const { return targets_; }

  /// diag(blkdiag(Lambda*_m, Lambda)) as a length-n vector.
  Vector lambda_bar(const ManifoldPoint &x) const;

  void check_point(const ManifoldPoint &x) const;

private:
  std::vector<Matrix> basis_;
  Vector targets_;
  std::size_t n_ = 0;
};

/// A(c) = A_0 + sum_i c_i A_i.
AmbientSym a_of_c(const ProblemData &p, const Vector &c);

/// sum_i c_i A_i without A_0, i.e. A(c) - A_0.
AmbientSym basis_combination(const ProblemData &p, const Vector &c);

/// v(Z)_i = tr(A_i^T Z), i = 1..l.
Vector basis_traces(const ProblemData &p, const AmbientSym &z);

/// H(x) = A(c) - Q blkdiag(Lambda*_m, Lambda) Q^T.
AmbientSym residual(const ProblemData &p, const ManifoldPoint &x);

/// h(x) = 0.5 ||H(x)||_F^2.
double cost(const ProblemData &p, const ManifoldPoint &x);

/// DH(x) and its adjoint, specialised to one point. Everything is evaluated in
/// the eigenbasis of Q Lambda_bar Q^T, where the commutator with Lambda_bar is
/// an entrywise scaling by (lambda_bar_i - lambda_bar_j); each application costs
/// two n x n products plus O(l n^2) basis work.
class Linearization {
public:
  Linearization(const ProblemData &p, const ManifoldPoint &x);

  /// DH(x)[u] = (A(dc) - A_0) + [S, Q Omega Q^T] - (QP) dLambda (QP)^T,
  /// S = Q Lambda_bar Q^T.
  AmbientSym diff(const TangentVector &u) const;

  /// (DH(x))^*[z] = (v(z), Q^T [S, z] Q, -Diag((QP)^T z (QP))) in Omega
  /// coordinates.
  TangentVector adjoint(const AmbientSym &z) const;

  /// (DH)^* o DH.
  TangentVector gn_operator(const TangentVector &u) const { return adjoint(diff(u)); }

  const ProblemData &problem() const { return *p_; }
  const ManifoldPoint &point() const { return *x_; }
  const Vector &lambda_bar() const { return lambda_bar_; }

private:
  const ProblemData *p_;
  const ManifoldPoint *x_;
  Vector lambda_bar_;
};

AmbientSym diff(const ProblemData &p, const ManifoldPoint &x, const TangentVector &u);
TangentVector adjoint(const ProblemData &p, const ManifoldPoint &x, const AmbientSym &z);

/// grad h(x) = (DH(x))^*[H(x)].
TangentVector gradient(const ProblemData &p, const ManifoldPoint &x);

TangentVector gn_operator(const ProblemData &p, const ManifoldPoint &x, const TangentVector &u);

} // namespace lsiep
