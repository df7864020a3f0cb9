#include "lsiep/preconditioner.hpp"

#include <string>

#include "lsiep/errors.hpp"

namespace lsiep {

namespace {

Matrix symmetrized(const Matrix &a) { return 0.5 * (a + a.transpose()); }

} // namespace

PrecondState::PrecondState(const ProblemData &p, const ManifoldPoint &x, double t_hat)
    : p_(&p), q_(x.q), lam_bar_(p.lambda_bar(x)), t_hat_(t_hat) {
  if (!(t_hat > 0.0))
    throw ConfigError("PrecondState: t_hat must be positive, got " + std::to_string(t_hat));
  const auto n = static_cast<Eigen::Index>(p.n());
  const auto m = static_cast<Eigen::Index>(p.m());
  const auto l = static_cast<Eigen::Index>(p.l());

  weights_.resize(n, n);
  for (Eigen::Index b = 0; b < n; ++b)
    for (Eigen::Index a = 0; a < n; ++a) {
      const double gap = lam_bar_(a) - lam_bar_(b);
      const double free_pair = (a >= m && b >= m) ? 1.0 : 0.0;
      weights_(a, b) = gap * gap + free_pair + t_hat_;
    }

  rotated_basis_.reserve(static_cast<std::size_t>(l));
  rotated_b_inv_basis_.reserve(static_cast<std::size_t>(l));
  b_inv_basis_.reserve(static_cast<std::size_t>(l));
  for (Eigen::Index i = 1; i <= l; ++i) {
    const Matrix &a = p.basis(static_cast<std::size_t>(i));
    rotated_basis_.push_back(symmetrized(q_.transpose() * a * q_));
    rotated_b_inv_basis_.push_back(rotated_basis_.back().cwiseQuotient(weights_));
    b_inv_basis_.push_back(symmetrized(q_ * rotated_b_inv_basis_.back() * q_.transpose()));
  }

  core_ = Matrix::Identity(l, l);
  for (Eigen::Index j = 0; j < l; ++j)
    for (Eigen::Index i = 0; i < l; ++i)
      core_(i, j) += rotated_basis_[static_cast<std::size_t>(i)]
                         .cwiseProduct(rotated_b_inv_basis_[static_cast<std::size_t>(j)])
                         .sum();
  core_ = symmetrized(core_);
  core_factor_.compute(core_);
  if (core_factor_.info() != Eigen::Success)
    throw NumericError("PrecondState: SMW core matrix is not positive definite");
}

AmbientSym PrecondState::apply_b_inverse(const AmbientSym &z) const {
  Matrix rotated = q_.transpose() * z * q_;
  rotated = rotated.cwiseQuotient(weights_);
  return symmetrized(q_ * rotated * q_.transpose());
}

AmbientSym PrecondState::apply(const AmbientSym &z) const {
  Matrix rotated = q_.transpose() * z * q_;
  rotated = rotated.cwiseProduct(weights_);
  AmbientSym out = q_ * rotated * q_.transpose();
  out += basis_combination(*p_, basis_traces(*p_, z));
  return symmetrized(out);
}

AmbientSym PrecondState::apply_inverse(const AmbientSym &z) const {
  Matrix y = symmetrized(q_.transpose() * z * q_).cwiseQuotient(weights_);
  const auto l = static_cast<Eigen::Index>(rotated_basis_.size());
  if (l > 0) {
    Vector traces(l);
    for (Eigen::Index i = 0; i < l; ++i)
      traces(i) = rotated_basis_[static_cast<std::size_t>(i)].cwiseProduct(y).sum();
    const Vector coeffs = core_factor_.solve(traces);
    for (Eigen::Index j = 0; j < l; ++j)
      y -= coeffs(j) * rotated_b_inv_basis_[static_cast<std::size_t>(j)];
  }
  return symmetrized(q_ * y * q_.transpose());
}

} // namespace lsiep
