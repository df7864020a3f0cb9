#include "lsiep/solver.hpp"

#include <algorithm>
#include <cmath>

#include "lsiep/errors.hpp"

namespace lsiep {

void SolverConfig::validate() const {
  if (!(beta > 0.0 && beta < 1.0))
    throw ConfigError("SolverConfig: beta must lie in (0, 1)");
  if (!(sigma > 0.0 && sigma < 0.5))
    throw ConfigError("SolverConfig: sigma must lie in (0, 1/2)");
  if (!(eta_max > 0.0 && eta_max < 1.0))
    throw ConfigError("SolverConfig: eta_max must lie in (0, 1)");
  if (!(grad_tol > 0.0))
    throw ConfigError("SolverConfig: grad_tol must be positive");
  if (cg_max_iters && *cg_max_iters < 1)
    throw ConfigError("SolverConfig: cg_max_iters must be >= 1");
  if (!(t_hat > 0.0))
    throw ConfigError("SolverConfig: t_hat must be positive");
  if (max_backtracks < 0)
    throw ConfigError("SolverConfig: max_backtracks must be nonnegative");
}

std::string to_string(SolverStatus s) {
  switch (s) {
  case SolverStatus::converged:
    return "converged";
  case SolverStatus::max_outer:
    return "max_outer";
  case SolverStatus::line_search_failure:
    return "line_search_failure";
  }
  return "unknown";
}

bool accept_candidate(const Linearization &lin, const TangentVector &grad,
                      const TangentVector &candidate, double eta) {
  const ManifoldPoint &x = lin.point();
  const double step_sq = inner(x, candidate, candidate);
  if (!(step_sq > 0.0) || !candidate.all_finite())
    return false;
  const double grad_norm = norm(x, grad);
  const TangentVector normal_residual = lin.gn_operator(candidate) + grad;
  if (norm(x, normal_residual) > eta * grad_norm)
    return false;
  return inner(x, grad, candidate) <= -eta * step_sq;
}

namespace {

// Successive CG solves tighten the inner tolerance by this factor when the
// candidate misses the truncation conditions, down to kTightestRelTol.
constexpr double kRelTolShrink = 1e-2;
constexpr double kTightestRelTol = 1e-14;

} // namespace

Direction compute_direction(const ProblemData &p, const ManifoldPoint &x,
                            const TangentVector &grad, const PrecondState *prec,
                            const SolverConfig &cfg) {
  const Linearization lin(p, x);
  const double grad_norm = norm(x, grad);
  const double eta = std::min(cfg.eta_max, grad_norm);
  const std::size_t n = p.n();
  const std::size_t budget = cfg.cg_max_iters.value_or(n * n * n);

  LinearOperator<TangentVector> op;
  TangentVector rhs;
  if (prec != nullptr) {
    op = [&](const TangentVector &u) { return lin.adjoint(prec->apply_inverse(lin.diff(u))); };
    rhs = -lin.adjoint(prec->apply_inverse(residual(p, x)));
  } else {
    op = [&](const TangentVector &u) { return lin.gn_operator(u); };
    rhs = -grad;
  }
  const InnerProduct<TangentVector> metric = [&](const TangentVector &a, const TangentVector &b) {
    return inner(x, a, b);
  };
  const std::function<bool(const TangentVector &)> finite = [](const TangentVector &v) {
    return v.all_finite();
  };

  Direction out;
  CgConfig cg_cfg;
  cg_cfg.abort_on_nonpositive_curvature = cfg.cg_abort_on_nonpositive_curvature;
  cg_cfg.rel_tol = std::clamp(eta, kTightestRelTol, 0.5);
  std::size_t used = 0;
  for (std::size_t attempt = 0; attempt <= cfg.cg_refinements && used < budget; ++attempt) {
    cg_cfg.max_iters = budget - used;
    const auto result = conjugate_gradient<TangentVector>(op, std::nullopt, rhs,
                                                          TangentVector::zero_like(x), metric,
                                                          finite, cg_cfg);
    used += result.iterations;
    if (accept_candidate(lin, grad, result.solution, eta)) {
      out.step = result.solution;
      out.inner_iters = used;
      return out;
    }
    if (result.status != CgStatus::converged || cg_cfg.rel_tol <= kTightestRelTol)
      break;
    cg_cfg.rel_tol = std::max(cg_cfg.rel_tol * kRelTolShrink, kTightestRelTol);
  }
  out.step = -grad;
  out.inner_iters = used;
  out.fallback = true;
  return out;
}

LineSearchResult line_search(const ProblemData &p, const ManifoldPoint &x, double current_cost,
                             const TangentVector &direction, const TangentVector &grad,
                             const SolverConfig &cfg) {
  const double slope = inner(x, grad, direction);
  LineSearchResult out;
  double t = 1.0;
  for (int l = 0; l <= cfg.max_backtracks; ++l, t *= cfg.beta) {
    ManifoldPoint trial;
    try {
      trial = retract(x, direction, t);
    } catch (const RetractionError &) {
      continue;
    }
    const double trial_cost = cost(p, trial);
    ++out.trials;
    if (std::isfinite(trial_cost) && trial_cost - current_cost <= cfg.sigma * t * slope) {
      out.step_exponent = l;
      out.next = std::move(trial);
      out.next_cost = trial_cost;
      return out;
    }
  }
  throw LineSearchError("line_search: no step satisfied the Armijo condition");
}

SolverReport solve(const ProblemData &p, const ManifoldPoint &x0, const SolverConfig &cfg) {
  cfg.validate();
  p.check_point(x0);

  SolverReport report;
  ManifoldPoint x = x0;
  AmbientSym h = residual(p, x);
  double current_cost = 0.5 * h.squaredNorm();
  report.function_evals = 1;

  TraceRow row;
  row.cost = current_cost;
  row.residual_norm = h.norm();

  for (std::size_t k = 0;; ++k) {
    const TangentVector grad = Linearization(p, x).adjoint(h);
    const double grad_norm = norm(x, grad);
    row.grad_norm = grad_norm;
    report.trace.push_back(row);

    if (grad_norm < cfg.grad_tol) {
      report.status = SolverStatus::converged;
      break;
    }
    if (k >= cfg.max_outer) {
      report.status = SolverStatus::max_outer;
      break;
    }

    std::optional<PrecondState> prec;
    if (cfg.use_preconditioner)
      prec.emplace(p, x, cfg.t_hat);
    const Direction dir = compute_direction(p, x, grad, prec ? &*prec : nullptr, cfg);
    report.total_cg_iters += dir.inner_iters;

    LineSearchResult ls;
    try {
      ls = line_search(p, x, current_cost, dir.step, grad, cfg);
    } catch (const LineSearchError &) {
      report.function_evals += static_cast<std::size_t>(cfg.max_backtracks) + 1;
      report.status = SolverStatus::line_search_failure;
      break;
    }
    report.function_evals += ls.trials;
    ++report.iterations;

    x = std::move(ls.next);
    h = residual(p, x);
    current_cost = ls.next_cost;

    row = TraceRow{};
    row.cost = current_cost;
    row.residual_norm = h.norm();
    row.cg_iters = dir.inner_iters;
    row.step_exponent = ls.step_exponent;
    row.fallback = dir.fallback;
  }
  report.final_point = std::move(x);
  return report;
}

} // namespace lsiep
