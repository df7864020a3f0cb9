#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "lsiep/model.hpp"

namespace lsiep {

enum class InstanceKind { example1, sturm_liouville, random };

std::string to_string(InstanceKind kind);
/// Accepts "example1", "sturm_liouville" (or "sturm-liouville"), "random".
InstanceKind parse_instance_kind(const std::string &name);

struct InstanceSpec {
  InstanceKind kind = InstanceKind::example1;
  std::size_t n = 5;
  std::size_t l = 5;
  std::size_t m = 5;
  std::uint64_t seed = 0;
  /// Decimal places kept when chopping c_true into the start c0 (random
  /// instances); unset means 2 for n < 100 and 3 otherwise.
  std::optional<int> chop_decimals;

  void validate() const;
};

struct GeneratedInstance {
  ProblemData problem;
  std::optional<Vector> c_true;
  ManifoldPoint x0;
};

GeneratedInstance make_instance(const InstanceSpec &spec);

/// The 5 x 5 tridiagonal test with A_k = 4 e_k e_k^T and targets {1, 1, 2, 3, 4}.
GeneratedInstance make_example1();

/// Rayleigh-Ritz discretization of -y'' + q y = lambda y on [0, pi] with
/// q(x) = 2 sum_k c_k cos(2kx) and c_true_k = 192 / (pi^4 k^4); all n
/// eigenvalues of A(c_true) are prescribed and c0 = 0.
GeneratedInstance make_sturm_liouville(std::size_t n, std::size_t l);

/// Random symmetric basis (A_k = (B_k + B_k^T)/2 with standard normal B_k),
/// targets = m smallest eigenvalues of A(c_true), c0 = chop(c_true).
GeneratedInstance make_random(std::size_t n, std::size_t l, std::size_t m, std::uint64_t seed,
                              std::optional<int> chop_decimals = std::nullopt);

/// [Q0, L] = eig(A(c0)) with ascending eigenvalues; Lambda0 = trailing n-m.
ManifoldPoint initial_point(const ProblemData &p, const Vector &c0);

/// Truncation toward zero to `decimals` places.
double chop(double value, int decimals);

/// Symmetric Toeplitz matrix whose first column is e_{k+1} (1-based k).
Matrix toeplitz_unit(std::size_t n, std::size_t k);

/// Hankel matrix H_k: hankel(e_k, 0) for k <= n, hankel(0, e_{k-n+1}) for
/// n < k <= 2n-1. Ones sit where i + j = k + 1 (1-based).
Matrix hankel_unit(std::size_t n, std::size_t k);

/// Ascending eigenvalues of a symmetric matrix.
Vector symmetric_eigenvalues(const Matrix &a);

} // namespace lsiep
