#include "lsiep/manifold.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "lsiep/errors.hpp"

namespace lsiep {

Vector vec_hat(const Matrix &w) {
  if (w.rows() != w.cols())
    throw DimensionError("vec_hat: matrix must be square");
  const Eigen::Index n = w.rows();
  Vector out(static_cast<Eigen::Index>(triangular_size(static_cast<std::size_t>(n))));
  Eigen::Index k = 0;
  for (Eigen::Index j = 1; j < n; ++j)
    for (Eigen::Index i = 0; i < j; ++i)
      out(k++) = w(i, j);
  return out;
}

namespace {

std::size_t order_from_triangular(std::size_t len) {
  // smallest n with n(n-1)/2 == len
  auto n = static_cast<std::size_t>(std::llround((1.0 + std::sqrt(1.0 + 8.0 * static_cast<double>(len))) / 2.0));
  if (n == 0)
    n = 1;
  if (triangular_size(n) != len)
    throw DimensionError("skew_hat: length " + std::to_string(len) + " is not n(n-1)/2 for any n");
  return n;
}

} // namespace

Matrix skew_hat(const Vector &w) {
  const auto n = static_cast<Eigen::Index>(order_from_triangular(static_cast<std::size_t>(w.size())));
  Matrix out = Matrix::Zero(n, n);
  Eigen::Index k = 0;
  for (Eigen::Index j = 1; j < n; ++j)
    for (Eigen::Index i = 0; i < j; ++i) {
      out(i, j) = w(k);
      out(j, i) = -w(k);
      ++k;
    }
  return out;
}

double ManifoldPoint::orthogonality_error() const {
  return (q.transpose() * q - Matrix::Identity(q.rows(), q.cols())).norm();
}

TangentVector::TangentVector(std::size_t l, std::size_t n, std::size_t free_count)
    : n_(n), dc_(Vector::Zero(static_cast<Eigen::Index>(l))),
      omega_upper_(Vector::Zero(static_cast<Eigen::Index>(triangular_size(n)))),
      dlambda_(Vector::Zero(static_cast<Eigen::Index>(free_count))) {}

TangentVector TangentVector::from_generator(Vector dc, const Matrix &omega, Vector dlambda) {
  if (omega.rows() != omega.cols())
    throw DimensionError("TangentVector: omega must be square");
  TangentVector t;
  t.n_ = static_cast<std::size_t>(omega.rows());
  t.dc_ = std::move(dc);
  t.omega_upper_ = vec_hat(0.5 * (omega - omega.transpose()));
  t.dlambda_ = std::move(dlambda);
  if (t.free_count() > t.n_)
    throw DimensionError("TangentVector: more free eigenvalues than n");
  return t;
}

TangentVector TangentVector::from_coordinates(Vector dc, Vector omega_upper, Vector dlambda) {
  TangentVector t;
  t.n_ = order_from_triangular(static_cast<std::size_t>(omega_upper.size()));
  t.dc_ = std::move(dc);
  t.omega_upper_ = std::move(omega_upper);
  t.dlambda_ = std::move(dlambda);
  if (t.free_count() > t.n_)
    throw DimensionError("TangentVector: more free eigenvalues than n");
  return t;
}

TangentVector TangentVector::zero_like(const ManifoldPoint &x) {
  return TangentVector(x.l(), x.n(), x.free_count());
}

std::size_t TangentVector::dimension() const {
  return l() + triangular_size(n_) + free_count();
}

Matrix TangentVector::omega() const {
  const auto n = static_cast<Eigen::Index>(n_);
  Matrix out = Matrix::Zero(n, n);
  Eigen::Index k = 0;
  for (Eigen::Index j = 1; j < n; ++j)
    for (Eigen::Index i = 0; i < j; ++i) {
      out(i, j) = omega_upper_(k);
      out(j, i) = -omega_upper_(k);
      ++k;
    }
  return out;
}

Vector TangentVector::flatten() const {
  Vector out(static_cast<Eigen::Index>(dimension()));
  out << dc_, omega_upper_, dlambda_;
  return out;
}

TangentVector TangentVector::unflatten(const Vector &flat, std::size_t l, std::size_t n,
                                       std::size_t free_count) {
  TangentVector t(l, n, free_count);
  if (static_cast<std::size_t>(flat.size()) != t.dimension())
    throw DimensionError("TangentVector::unflatten: length mismatch");
  const auto nl = static_cast<Eigen::Index>(l);
  const auto nw = static_cast<Eigen::Index>(triangular_size(n));
  const auto nf = static_cast<Eigen::Index>(free_count);
  t.dc_ = flat.head(nl);
  t.omega_upper_ = flat.segment(nl, nw);
  t.dlambda_ = flat.tail(nf);
  return t;
}

bool TangentVector::all_finite() const {
  return dc_.allFinite() && omega_upper_.allFinite() && dlambda_.allFinite();
}

void TangentVector::require_same_shape(const TangentVector &o) const {
  if (n_ != o.n_ || dc_.size() != o.dc_.size() || dlambda_.size() != o.dlambda_.size())
    throw DimensionError("TangentVector: shape mismatch");
}

TangentVector &TangentVector::operator+=(const TangentVector &o) {
  require_same_shape(o);
  dc_ += o.dc_;
  omega_upper_ += o.omega_upper_;
  dlambda_ += o.dlambda_;
  return *this;
}

TangentVector &TangentVector::operator-=(const TangentVector &o) {
  require_same_shape(o);
  dc_ -= o.dc_;
  omega_upper_ -= o.omega_upper_;
  dlambda_ -= o.dlambda_;
  return *this;
}

TangentVector &TangentVector::operator*=(double s) {
  dc_ *= s;
  omega_upper_ *= s;
  dlambda_ *= s;
  return *this;
}

void check_tangent(const ManifoldPoint &x, const TangentVector &u) {
  if (u.n() != x.n() || u.l() != x.l() || u.free_count() != x.free_count())
    throw DimensionError("tangent vector does not match the manifold point");
}

double inner(const ManifoldPoint &x, const TangentVector &u, const TangentVector &v) {
  check_tangent(x, u);
  check_tangent(x, v);
  // tr(Omega_u^T Omega_v) counts every strict-upper entry twice
  return u.dc().dot(v.dc()) + 2.0 * u.omega_upper().dot(v.omega_upper()) +
         u.dlambda().dot(v.dlambda());
}

double norm(const ManifoldPoint &x, const TangentVector &u) {
  return std::sqrt(inner(x, u, u));
}

Matrix qf(const Matrix &a) {
  Eigen::HouseholderQR<Matrix> qr(a);
  Matrix q = qr.householderQ();
  const Matrix &r = qr.matrixQR();
  for (Eigen::Index j = 0; j < a.cols(); ++j) {
    const double rjj = r(j, j);
    if (!std::isfinite(rjj) || rjj == 0.0)
      throw RetractionError("qf: zero or non-finite diagonal in the triangular factor");
    if (rjj < 0.0)
      q.col(j) *= -1.0;
  }
  return q;
}

ManifoldPoint retract(const ManifoldPoint &x, const TangentVector &u, double t) {
  check_tangent(x, u);
  ManifoldPoint out;
  out.c = x.c + t * u.dc();
  out.q = qf(x.q + t * (x.q * u.omega()));
  out.lambda = x.lambda + t * u.dlambda();
  return out;
}

} // namespace lsiep
