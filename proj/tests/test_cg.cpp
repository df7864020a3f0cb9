#include <cmath>

#include <gtest/gtest.h>

#include "lsiep/cg.hpp"
#include "test_util.hpp"

using namespace lsiep;
using lsiep::testing::Rng;

namespace {

const InnerProduct<Vector> kDot = [](const Vector &a, const Vector &b) { return a.dot(b); };
const std::function<bool(const Vector &)> kFinite = [](const Vector &v) { return v.allFinite(); };

CgOutcome<Vector> run_cg(const Matrix &a, const Vector &b, const CgConfig &cfg,
                         const std::optional<LinearOperator<Vector>> &prec = std::nullopt) {
  const LinearOperator<Vector> op = [&a](const Vector &v) -> Vector { return a * v; };
  return conjugate_gradient<Vector>(op, prec, b, Vector::Zero(b.size()), kDot, kFinite, cfg);
}

Matrix random_spd(Rng &rng, Eigen::Index n) {
  const Matrix b = rng.matrix(n, n);
  return b.transpose() * b + static_cast<double>(n) * Matrix::Identity(n, n);
}

} // namespace

TEST(Cg, ZeroRhs) {
  const auto out = run_cg(Matrix::Identity(4, 4), Vector::Zero(4), CgConfig{});
  EXPECT_EQ(out.iterations, 0u);
  EXPECT_EQ(out.status, CgStatus::converged);
  EXPECT_EQ(out.solution, Vector::Zero(4));
}

TEST(Cg, IdentityOperatorOneStep) {
  Rng rng(1);
  const Vector b = rng.vector(9);
  const auto out = run_cg(Matrix::Identity(9, 9), b, CgConfig{50, 1e-12, true});
  EXPECT_EQ(out.iterations, 1u);
  EXPECT_EQ(out.status, CgStatus::converged);
  EXPECT_LT((out.solution - b).norm(), 1e-15 * b.norm());
}

TEST(Cg, MatchesDenseSolve) {
  Rng rng(2);
  for (int trial = 0; trial < 10; ++trial) {
    const Matrix a = random_spd(rng, 12);
    const Vector b = rng.vector(12);
    const Vector direct = a.llt().solve(b);
    const auto out = run_cg(a, b, CgConfig{12, 1e-13, true});
    EXPECT_LE(out.iterations, 12u);
    EXPECT_LT((out.solution - direct).norm(), 1e-10 * direct.norm());
  }
}

TEST(Cg, ErrorEnergyNormIsMonotone) {
  Rng rng(3);
  const Matrix a = random_spd(rng, 30);
  const Vector b = rng.vector(30);
  const Vector exact = a.llt().solve(b);
  double prev = std::sqrt(exact.dot(a * exact));
  for (std::size_t k = 1; k <= 30; ++k) {
    const auto out = run_cg(a, b, CgConfig{k, 1e-15, true});
    const Vector e = out.solution - exact;
    const double energy = std::sqrt(e.dot(a * e));
    EXPECT_LE(energy, prev * (1.0 + 1e-12) + 1e-14);
    prev = energy;
    if (out.status == CgStatus::converged)
      break;
  }
}

TEST(Cg, ResidualMonotoneOnWellConditionedDiagonal) {
  Rng rng(4);
  Vector d(40);
  for (Eigen::Index i = 0; i < 40; ++i)
    d(i) = rng.uniform(1.0, 2.0);
  const Matrix a = d.asDiagonal();
  const auto out = run_cg(a, rng.vector(40), CgConfig{40, 1e-14, true});
  for (std::size_t k = 1; k < out.residual_history.size(); ++k)
    EXPECT_LE(out.residual_history[k], out.residual_history[k - 1] * (1.0 + 1e-12));
}

TEST(Cg, FiniteTerminationOnLowRankOperator) {
  Rng rng(5);
  for (Eigen::Index r : {3, 5, 8}) {
    const Matrix u = rng.orthogonal(30).leftCols(r);
    Vector d(r);
    for (Eigen::Index i = 0; i < r; ++i)
      d(i) = rng.uniform(1.0, 3.0);
    const Matrix a = u * d.asDiagonal() * u.transpose();
    const Vector b = u * rng.vector(r);
    const auto out = run_cg(a, b, CgConfig{100, 1e-10, true});
    EXPECT_EQ(out.status, CgStatus::converged);
    EXPECT_LE(out.iterations, static_cast<std::size_t>(r) + 2);
  }
}

TEST(Cg, IdentityPreconditionerReproducesPlainIterates) {
  Rng rng(6);
  const Matrix a = random_spd(rng, 15);
  const Vector b = rng.vector(15);
  const LinearOperator<Vector> ident = [](const Vector &v) { return v; };
  for (std::size_t k = 1; k <= 8; ++k) {
    const auto plain = run_cg(a, b, CgConfig{k, 1e-15, true});
    const auto pre = run_cg(a, b, CgConfig{k, 1e-15, true}, ident);
    EXPECT_LT((plain.solution - pre.solution).norm(), 1e-13 * plain.solution.norm());
  }
}

TEST(Cg, JacobiPreconditionerConvergesFaster) {
  Rng rng(7);
  Vector d(50);
  for (Eigen::Index i = 0; i < 50; ++i)
    d(i) = std::pow(10.0, rng.uniform(0.0, 6.0));
  const Matrix b = rng.matrix(50, 50) * 1e-2;
  const Matrix a = Matrix(d.asDiagonal()) + b.transpose() * b;
  const Vector rhs = rng.vector(50);
  const Vector inv_diag = a.diagonal().cwiseInverse();
  const LinearOperator<Vector> jacobi = [&inv_diag](const Vector &v) -> Vector {
    return inv_diag.cwiseProduct(v);
  };
  const auto plain = run_cg(a, rhs, CgConfig{500, 1e-10, true});
  const auto pre = run_cg(a, rhs, CgConfig{500, 1e-10, true}, jacobi);
  EXPECT_EQ(pre.status, CgStatus::converged);
  EXPECT_LT(pre.iterations, plain.iterations);
  EXPECT_LT((a * pre.solution - rhs).norm(), 1e-9 * rhs.norm());
}

TEST(Cg, MaxItersStatus) {
  Rng rng(8);
  const Matrix a = random_spd(rng, 20);
  const auto out = run_cg(a, rng.vector(20), CgConfig{2, 1e-14, true});
  EXPECT_EQ(out.status, CgStatus::max_iters);
  EXPECT_EQ(out.iterations, 2u);
}

TEST(Cg, NonpositiveCurvatureReturnsCurrentIterate) {
  Vector d(3);
  d << 1.0, -3.0, 1.0;
  const Matrix a = d.asDiagonal();
  Vector b(3);
  b << 1.0, 1.0, 1.0;
  const auto out = run_cg(a, b, CgConfig{10, 1e-12, true});
  EXPECT_EQ(out.status, CgStatus::nonpositive_curvature);
  EXPECT_EQ(out.iterations, 0u);
  EXPECT_EQ(out.solution, Vector::Zero(3));
}

TEST(Cg, NonFiniteOperatorThrows) {
  const LinearOperator<Vector> bad = [](const Vector &v) -> Vector {
    return Vector::Constant(v.size(), std::nan(""));
  };
  EXPECT_THROW(conjugate_gradient<Vector>(bad, std::nullopt, Vector::Ones(3), Vector::Zero(3),
                                          kDot, kFinite, CgConfig{}),
               NumericError);
}

TEST(Cg, ConfigValidation) {
  EXPECT_THROW((CgConfig{0, 0.1, true}.validate()), ConfigError);
  EXPECT_THROW((CgConfig{5, 1.0, true}.validate()), ConfigError);
  EXPECT_THROW((CgConfig{5, 0.0, true}.validate()), ConfigError);
}
