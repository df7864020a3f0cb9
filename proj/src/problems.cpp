#include "lsiep/problems.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include <Eigen/Eigenvalues>

#include "lsiep/errors.hpp"

namespace lsiep {

std::string to_string(InstanceKind kind) {
  switch (kind) {
  case InstanceKind::example1:
    return "example1";
  case InstanceKind::sturm_liouville:
    return "sturm_liouville";
  case InstanceKind::random:
    return "random";
  }
  return "unknown";
}

InstanceKind parse_instance_kind(const std::string &name) {
  if (name == "example1")
    return InstanceKind::example1;
  if (name == "sturm_liouville" || name == "sturm-liouville")
    return InstanceKind::sturm_liouville;
  if (name == "random")
    return InstanceKind::random;
  throw ConfigError("unknown instance kind '" + name + "'");
}

void InstanceSpec::validate() const {
  switch (kind) {
  case InstanceKind::example1:
    if (n != 5 || l != 5 || m != 5)
      throw ConfigError("example1 is fixed at (n, l, m) = (5, 5, 5)");
    break;
  case InstanceKind::sturm_liouville:
    if (n < 2 || l < 1)
      throw ConfigError("sturm_liouville needs n >= 2 and l >= 1");
    if (m != n)
      throw ConfigError("sturm_liouville prescribes the full spectrum (m = n)");
    break;
  case InstanceKind::random:
    if (n < 1 || m > n)
      throw ConfigError("random instance needs 1 <= n and m <= n");
    break;
  }
  if (chop_decimals && *chop_decimals < 0)
    throw ConfigError("chop_decimals must be nonnegative");
}

GeneratedInstance make_instance(const InstanceSpec &spec) {
  spec.validate();
  switch (spec.kind) {
  case InstanceKind::example1:
    return make_example1();
  case InstanceKind::sturm_liouville:
    return make_sturm_liouville(spec.n, spec.l);
  case InstanceKind::random:
    return make_random(spec.n, spec.l, spec.m, spec.seed, spec.chop_decimals);
  }
  throw ConfigError("unknown instance kind");
}

Vector symmetric_eigenvalues(const Matrix &a) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(a, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success)
    throw NumericError("symmetric eigensolver did not converge");
  return es.eigenvalues();
}

ManifoldPoint initial_point(const ProblemData &p, const Vector &c0) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(a_of_c(p, c0));
  if (es.info() != Eigen::Success)
    throw NumericError("initial_point: symmetric eigensolver did not converge");
  const auto free = static_cast<Eigen::Index>(p.n() - p.m());
  ManifoldPoint x;
  x.c = c0;
  x.q = es.eigenvectors();
  x.lambda = es.eigenvalues().tail(free);
  return x;
}

double chop(double value, int decimals) {
  const double scale = std::pow(10.0, decimals);
  return std::trunc(value * scale) / scale;
}

GeneratedInstance make_example1() {
  constexpr Eigen::Index n = 5;
  std::vector<Matrix> basis;
  Matrix a0 = Matrix::Zero(n, n);
  for (Eigen::Index i = 0; i + 1 < n; ++i) {
    a0(i, i + 1) = -1.0;
    a0(i + 1, i) = -1.0;
  }
  basis.push_back(a0);
  for (Eigen::Index k = 0; k < n; ++k) {
    Matrix ak = Matrix::Zero(n, n);
    ak(k, k) = 4.0;
    basis.push_back(ak);
  }
  Vector targets(5);
  targets << 1.0, 1.0, 2.0, 3.0, 4.0;
  ProblemData problem(std::move(basis), std::move(targets));
  Vector c0(5);
  c0 << 0.6316, 0.2378, 0.9092, 0.9866, 0.5007;
  ManifoldPoint x0 = initial_point(problem, c0);
  return GeneratedInstance{std::move(problem), std::nullopt, std::move(x0)};
}

Matrix toeplitz_unit(std::size_t n, std::size_t k) {
  const auto nn = static_cast<Eigen::Index>(n);
  Matrix t = Matrix::Zero(nn, nn);
  for (Eigen::Index i = 0; i < nn; ++i)
    for (Eigen::Index j = 0; j < nn; ++j)
      if (static_cast<std::size_t>(std::abs(i - j)) == k)
        t(i, j) = 1.0;
  return t;
}

Matrix hankel_unit(std::size_t n, std::size_t k) {
  if (k < 1 || k > 2 * n - 1)
    throw DimensionError("hankel_unit: k must lie in 1..2n-1");
  const auto nn = static_cast<Eigen::Index>(n);
  Matrix h = Matrix::Zero(nn, nn);
  // hankel(c, r)(i, j) = c(i + j - 1) if i + j - 1 <= n, else r(i + j - n)
  // (1-based). For k <= n, c = e_k; otherwise c = 0 and r = e_{k-n+1}.
  for (Eigen::Index i = 1; i <= nn; ++i)
    for (Eigen::Index j = 1; j <= nn; ++j) {
      const auto s = static_cast<std::size_t>(i + j - 1);
      const bool hit = s <= n ? (k <= n && s == k)
                              : (k > n && static_cast<std::size_t>(i + j) - n == k - n + 1);
      if (hit)
        h(i - 1, j - 1) = 1.0;
    }
  return h;
}

GeneratedInstance make_sturm_liouville(std::size_t n, std::size_t l) {
  if (n < 2 || l < 1)
    throw DimensionError("make_sturm_liouville: need n >= 2 and l >= 1");
  const auto nn = static_cast<Eigen::Index>(n);
  std::vector<Matrix> basis;
  Vector diag(nn);
  for (Eigen::Index i = 0; i < nn; ++i)
    diag(i) = static_cast<double>((i + 1) * (i + 1));
  basis.push_back(diag.asDiagonal());

  for (std::size_t k = 1; k <= l; ++k) {
    Matrix ak = Matrix::Zero(nn, nn);
    // T_{2k} exists while 2k <= n - 1, i.e. k <= (n-1)/2
    if (2 * k <= n - 1)
      ak += toeplitz_unit(n, 2 * k);
    if (2 * k - 1 <= 2 * n - 1)
      ak -= hankel_unit(n, 2 * k - 1);
    basis.push_back(ak);
  }

  const double scale = 192.0 / std::pow(std::numbers::pi, 4);
  Vector c_true(static_cast<Eigen::Index>(l));
  for (std::size_t k = 1; k <= l; ++k)
    c_true(static_cast<Eigen::Index>(k - 1)) = scale / std::pow(static_cast<double>(k), 4);

  // targets need A(c_true), which only needs the basis
  const ProblemData staging(basis, Vector());
  Vector targets = symmetric_eigenvalues(a_of_c(staging, c_true));
  ProblemData problem(std::move(basis), std::move(targets));
  ManifoldPoint x0 = initial_point(problem, Vector::Zero(static_cast<Eigen::Index>(l)));
  return GeneratedInstance{std::move(problem), std::move(c_true), std::move(x0)};
}

GeneratedInstance make_random(std::size_t n, std::size_t l, std::size_t m, std::uint64_t seed,
                              std::optional<int> chop_decimals) {
  if (n < 1 || m > n)
    throw DimensionError("make_random: need n >= 1 and m <= n");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const auto nn = static_cast<Eigen::Index>(n);

  Vector c_true(static_cast<Eigen::Index>(l));
  for (Eigen::Index i = 0; i < c_true.size(); ++i)
    c_true(i) = normal(rng);
  std::vector<Matrix> basis;
  basis.reserve(l + 1);
  for (std::size_t k = 0; k <= l; ++k) {
    Matrix b(nn, nn);
    for (Eigen::Index j = 0; j < nn; ++j)
      for (Eigen::Index i = 0; i < nn; ++i)
        b(i, j) = normal(rng);
    basis.emplace_back(0.5 * (b + b.transpose()));
  }

  const ProblemData staging(basis, Vector());
  const Vector spectrum = symmetric_eigenvalues(a_of_c(staging, c_true));
  Vector targets = spectrum.head(static_cast<Eigen::Index>(m));
  ProblemData problem(std::move(basis), std::move(targets));

  const int decimals = chop_decimals.value_or(n < 100 ? 2 : 3);
  Vector c0 = c_true.unaryExpr([decimals](double v) { return chop(v, decimals); });
  ManifoldPoint x0 = initial_point(problem, c0);
  return GeneratedInstance{std::move(problem), std::move(c_true), std::move(x0)};
}

} // namespace lsiep
