#include "lsiep/diagnostics.hpp"

#include <string>

#include <Eigen/SVD>

#include "lsiep/errors.hpp"

namespace lsiep {

namespace {

Vector vectorized(const Matrix &a) { return Eigen::Map<const Vector>(a.data(), a.size()); }

} // namespace

Matrix surjectivity_matrix(const ProblemData &p, const ManifoldPoint &x) {
  const Vector lb = p.lambda_bar(x);
  const auto n = static_cast<Eigen::Index>(p.n());
  const auto m = static_cast<Eigen::Index>(p.m());
  const auto l = static_cast<Eigen::Index>(p.l());
  const auto w = static_cast<Eigen::Index>(triangular_size(p.n()));
  const Matrix &q = x.q;

  Matrix out(n * n, l + w + (n - m));
  Eigen::Index col = 0;
  for (Eigen::Index i = 1; i <= l; ++i)
    out.col(col++) = vectorized(p.basis(static_cast<std::size_t>(i)));

  // E = skew_hat(e_k) has E_ij = 1, E_ji = -1; Lambda_bar E - E Lambda_bar
  // keeps the same pattern scaled by lambda_bar_i - lambda_bar_j.
  for (Eigen::Index j = 1; j < n; ++j)
    for (Eigen::Index i = 0; i < j; ++i) {
      const double gap = lb(i) - lb(j);
      // Q (gap (e_i e_j^T + e_j e_i^T)) Q^T
      const Matrix column =
          gap * (q.col(i) * q.col(j).transpose() + q.col(j) * q.col(i).transpose());
      out.col(col++) = vectorized(column);
    }

  for (Eigen::Index j = 0; j < n - m; ++j) {
    const Matrix column = -(q.col(m + j) * q.col(m + j).transpose());
    out.col(col++) = vectorized(column);
  }
  return out;
}

std::size_t numeric_rank(const Matrix &a, double rank_tol) {
  if (a.size() == 0)
    return 0;
  Eigen::BDCSVD<Matrix> svd(a);
  const Vector &s = svd.singularValues();
  if (s.size() == 0 || s(0) == 0.0)
    return 0;
  std::size_t rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) >= rank_tol * s(0))
      ++rank;
  return rank;
}

SurjectivityReport surjectivity_check(const ProblemData &p, const ManifoldPoint &x,
                                      const SurjectivityOptions &opts) {
  if (p.n() > opts.max_n)
    throw ConfigError("surjectivity_check: n = " + std::to_string(p.n()) +
                      " exceeds the size guard max_n = " + std::to_string(opts.max_n) +
                      " (raise it with --max-n)");
  const Matrix mat = surjectivity_matrix(p, x);
  SurjectivityReport report;
  report.rows = static_cast<std::size_t>(mat.rows());
  report.matrix_cols = static_cast<std::size_t>(mat.cols());
  if (mat.cols() == 0) {
    report.surjective = true;
    return report;
  }
  Eigen::BDCSVD<Matrix> svd(mat);
  const Vector &s = svd.singularValues();
  report.largest_singular_value = s(0);
  // with more columns than rows the trailing singular values are zero
  report.smallest_singular_value = mat.cols() > mat.rows() ? 0.0 : s(s.size() - 1);
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(0) > 0.0 && s(i) >= opts.rank_tol * s(0))
      ++report.numeric_rank;
  report.surjective = report.numeric_rank == report.matrix_cols;
  return report;
}

} // namespace lsiep
