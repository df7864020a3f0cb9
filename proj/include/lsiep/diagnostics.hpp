#pragma once

#include <cstddef>

#include "lsiep/model.hpp"

namespace lsiep {

/// Rank report for the vectorized matrix of DH(x),
///
///   [ A_hat,  (Q x Q)(I x Lambda_bar - Lambda_bar x I) P_hat,  -(QP) x (QP) G ],
///
/// whose full column rank is the surjectivity condition for DH at x.
struct SurjectivityReport {
  std::size_t rows = 0;          ///< n^2
  std::size_t matrix_cols = 0;   ///< l + n(n-1)/2 + (n-m)
  std::size_t numeric_rank = 0;
  double largest_singular_value = 0.0;
  double smallest_singular_value = 0.0;
  bool surjective = false;
};

struct SurjectivityOptions {
  double rank_tol = 1e-10;  ///< relative to the largest singular value
  std::size_t max_n = 64;
};

/// Builds the n^2 x (l + n(n-1)/2 + (n-m)) matrix column by column, without
/// forming any Kronecker factor. Column order: basis coefficients, Omega
/// coordinates in vec_hat order, free eigenvalues.
Matrix surjectivity_matrix(const ProblemData &p, const ManifoldPoint &x);

/// Throws ConfigError if n exceeds opts.max_n.
SurjectivityReport surjectivity_check(const ProblemData &p, const ManifoldPoint &x,
                                      const SurjectivityOptions &opts = {});

/// Numeric rank: count of singular values >= rank_tol * sigma_max.
std::size_t numeric_rank(const Matrix &a, double rank_tol);

} // namespace lsiep
