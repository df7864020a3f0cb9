#include "lsiep/model.hpp"

#include <algorithm>
#include <string>
#include <utility>

#include "lsiep/errors.hpp"

namespace lsiep {

ProblemData::ProblemData(std::vector<Matrix> basis, Vector target_eigs)
    : basis_(std::move(basis)), targets_(std::move(target_eigs)) {
  if (basis_.empty())
    throw DimensionError("ProblemData: at least A_0 is required");
  n_ = static_cast<std::size_t>(basis_.front().rows());
  if (n_ == 0)
    throw DimensionError("ProblemData: n must be positive");
  for (std::size_t i = 0; i < basis_.size(); ++i) {
    Matrix &a = basis_[i];
    if (static_cast<std::size_t>(a.rows()) != n_ || static_cast<std::size_t>(a.cols()) != n_)
      throw DimensionError("ProblemData: basis matrix " + std::to_string(i) + " is not n x n");
    if (!a.allFinite())
      throw ConfigError("ProblemData: basis matrix " + std::to_string(i) + " has non-finite entries");
    a = 0.5 * (a + a.transpose()).eval();
  }
  if (m() > n_)
    throw ConfigError("ProblemData: more prescribed eigenvalues than n");
  if (!std::is_sorted(targets_.begin(), targets_.end()))
    throw ConfigError("ProblemData: prescribed eigenvalues must be nondecreasing");
}

Vector ProblemData::lambda_bar(const ManifoldPoint &x) const {
  check_point(x);
  Vector out(static_cast<Eigen::Index>(n_));
  out << targets_, x.lambda;
  return out;
}

void ProblemData::check_point(const ManifoldPoint &x) const {
  if (x.l() != l() || x.n() != n_ || static_cast<std::size_t>(x.q.cols()) != n_ ||
      x.free_count() != n_ - m())
    throw DimensionError("manifold point does not match the problem dimensions");
}

AmbientSym basis_combination(const ProblemData &p, const Vector &c) {
  if (static_cast<std::size_t>(c.size()) != p.l())
    throw DimensionError("coefficient vector length differs from l");
  const auto n = static_cast<Eigen::Index>(p.n());
  AmbientSym out = AmbientSym::Zero(n, n);
  for (std::size_t i = 1; i <= p.l(); ++i)
    out += c(static_cast<Eigen::Index>(i - 1)) * p.basis(i);
  return out;
}

AmbientSym a_of_c(const ProblemData &p, const Vector &c) {
  return p.a0() + basis_combination(p, c);
}

Vector basis_traces(const ProblemData &p, const AmbientSym &z) {
  Vector out(static_cast<Eigen::Index>(p.l()));
  for (std::size_t i = 1; i <= p.l(); ++i)
    out(static_cast<Eigen::Index>(i - 1)) = p.basis(i).cwiseProduct(z).sum();
  return out;
}

AmbientSym residual(const ProblemData &p, const ManifoldPoint &x) {
  const Vector lb = p.lambda_bar(x);
  AmbientSym h = a_of_c(p, x.c);
  h.noalias() -= (x.q * lb.asDiagonal()) * x.q.transpose();
  return 0.5 * (h + h.transpose());
}

double cost(const ProblemData &p, const ManifoldPoint &x) {
  return 0.5 * residual(p, x).squaredNorm();
}

Linearization::Linearization(const ProblemData &p, const ManifoldPoint &x)
    : p_(&p), x_(&x), lambda_bar_(p.lambda_bar(x)) {}

AmbientSym Linearization::diff(const TangentVector &u) const {
  check_tangent(*x_, u);
  const auto n = static_cast<Eigen::Index>(p_->n());
  const auto m = static_cast<Eigen::Index>(p_->m());
  // Q^T (DH[u] - A(dc) + A_0) Q = [Lambda_bar, Omega] - blkdiag(0, dLambda)
  Matrix rotated = u.omega();
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < n; ++i)
      rotated(i, j) *= lambda_bar_(i) - lambda_bar_(j);
  for (Eigen::Index j = 0; j < n - m; ++j)
    rotated(m + j, m + j) -= u.dlambda()(j);
  const Matrix &q = x_->q;
  AmbientSym out = basis_combination(*p_, u.dc());
  out.noalias() += q * rotated * q.transpose();
  return 0.5 * (out + out.transpose());
}

TangentVector Linearization::adjoint(const AmbientSym &z) const {
  if (z.rows() != static_cast<Eigen::Index>(p_->n()) || z.cols() != z.rows())
    throw DimensionError("adjoint: operand is not n x n");
  const auto n = static_cast<Eigen::Index>(p_->n());
  const auto m = static_cast<Eigen::Index>(p_->m());
  const Matrix &q = x_->q;
  Matrix zr = q.transpose() * z * q;
  zr = 0.5 * (zr + zr.transpose()).eval();
  // Q^T [S, z] Q = [Lambda_bar, Q^T z Q]; skew by construction
  Matrix omega(n, n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < n; ++i)
      omega(i, j) = (lambda_bar_(i) - lambda_bar_(j)) * zr(i, j);
  Vector dl = -zr.diagonal().tail(n - m);
  return TangentVector::from_generator(basis_traces(*p_, z), omega, std::move(dl));
}

AmbientSym diff(const ProblemData &p, const ManifoldPoint &x, const TangentVector &u) {
  return Linearization(p, x).diff(u);
}

TangentVector adjoint(const ProblemData &p, const ManifoldPoint &x, const AmbientSym &z) {
  return Linearization(p, x).adjoint(z);
}

TangentVector gradient(const ProblemData &p, const ManifoldPoint &x) {
  return Linearization(p, x).adjoint(residual(p, x));
}

TangentVector gn_operator(const ProblemData &p, const ManifoldPoint &x, const TangentVector &u) {
  return Linearization(p, x).gn_operator(u);
}

} // namespace lsiep
