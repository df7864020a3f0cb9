#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

#include "lsiep/errors.hpp"

namespace lsiep {

struct CgConfig {
  std::size_t max_iters = 100;
  /// Stop once ||r_k|| <= rel_tol * ||r_0||.
  double rel_tol = 1e-2;
  bool abort_on_nonpositive_curvature = true;

  void validate() const {
    if (max_iters < 1)
      throw ConfigError("CgConfig: max_iters must be >= 1");
    if (!(rel_tol > 0.0 && rel_tol < 1.0))
      throw ConfigError("CgConfig: rel_tol must lie in (0, 1)");
  }
};

enum class CgStatus { converged, max_iters, nonpositive_curvature };

template <class Vec> struct CgOutcome {
  Vec solution;
  std::size_t iterations = 0;
  double residual_norm = 0.0;
  CgStatus status = CgStatus::converged;
  /// ||r_k|| for k = 0..iterations.
  std::vector<double> residual_history;
};

template <class Vec> using LinearOperator = std::function<Vec(const Vec &)>;
template <class Vec> using InnerProduct = std::function<double(const Vec &, const Vec &)>;

/// (Preconditioned) conjugate gradients for a self-adjoint positive
/// semidefinite operator on an abstract inner-product space. The iteration
/// starts from the zero vector (`zero`), and the residual is measured in the
/// norm induced by `metric`. `is_finite` guards against operators that
/// produce NaN/Inf, which raise NumericError.
///
/// On nonpositive curvature <d, Op d> <= 0 with the abort flag set, the
/// current iterate (not the search direction) is returned.
template <class Vec>
CgOutcome<Vec> conjugate_gradient(const LinearOperator<Vec> &apply_op,
                                  const std::optional<LinearOperator<Vec>> &apply_prec,
                                  const Vec &rhs, const Vec &zero, const InnerProduct<Vec> &metric,
                                  const std::function<bool(const Vec &)> &is_finite,
                                  const CgConfig &cfg) {
  cfg.validate();
  CgOutcome<Vec> out;
  out.solution = zero;

  Vec r = rhs;
  double r_norm = std::sqrt(metric(r, r));
  if (!std::isfinite(r_norm))
    throw NumericError("conjugate_gradient: non-finite right-hand side");
  out.residual_history.push_back(r_norm);
  out.residual_norm = r_norm;
  if (r_norm == 0.0)
    return out;
  const double target = cfg.rel_tol * r_norm;

  Vec z = apply_prec ? (*apply_prec)(r) : r;
  Vec d = z;
  double rz = metric(r, z);

  while (out.iterations < cfg.max_iters) {
    Vec ad = apply_op(d);
    if (!is_finite(ad))
      throw NumericError("conjugate_gradient: operator produced non-finite values");
    const double curvature = metric(d, ad);
    if (curvature <= 0.0) {
      if (cfg.abort_on_nonpositive_curvature) {
        out.status = CgStatus::nonpositive_curvature;
        return out;
      }
      if (curvature == 0.0) {
        out.status = CgStatus::nonpositive_curvature;
        return out;
      }
    }
    const double alpha = rz / curvature;
    out.solution += alpha * d;
    r -= alpha * ad;
    ++out.iterations;

    r_norm = std::sqrt(metric(r, r));
    out.residual_history.push_back(r_norm);
    out.residual_norm = r_norm;
    if (!std::isfinite(r_norm))
      throw NumericError("conjugate_gradient: residual became non-finite");
    if (r_norm <= target) {
      out.status = CgStatus::converged;
      return out;
    }

    z = apply_prec ? (*apply_prec)(r) : r;
    const double rz_next = metric(r, z);
    d = z + (rz_next / rz) * d;
    rz = rz_next;
  }
  out.status = CgStatus::max_iters;
  return out;
}

} // namespace lsiep
