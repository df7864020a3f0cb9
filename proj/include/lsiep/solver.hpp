#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "lsiep/cg.hpp"
#include "lsiep/model.hpp"
#include "lsiep/preconditioner.hpp"

namespace lsiep {

struct SolverConfig {
  double beta = 0.5;       ///< backtracking factor, in (0, 1)
  double sigma = 1e-4;     ///< Armijo slope fraction, in (0, 1/2)
  double eta_max = 0.01;   ///< forcing-term cap, in (0, 1)
  double grad_tol = 1e-7;  ///< stop once ||grad h|| < grad_tol
  std::size_t max_outer = 100000;
  /// Inner CG budget per outer iteration; n^3 when unset.
  std::optional<std::size_t> cg_max_iters;
  bool cg_abort_on_nonpositive_curvature = true;
  bool use_preconditioner = true;
  double t_hat = kDefaultPrecondShift;
  /// Extra CG solves, each with the inner tolerance shrunk by 100x, attempted
  /// when a converged CG candidate misses the truncation conditions.
  std::size_t cg_refinements = 1;
  /// Largest backtracking exponent tried before giving up.
  int max_backtracks = 60;

  void validate() const;
};

enum class SolverStatus { converged, max_outer, line_search_failure };

std::string to_string(SolverStatus s);

struct TraceRow {
  double cost = 0.0;
  double grad_norm = 0.0;
  double residual_norm = 0.0;
  /// Inner CG iterations spent producing this iterate (0 for the start).
  std::size_t cg_iters = 0;
  /// Accepted backtracking exponent l_k (0 for the start).
  int step_exponent = 0;
  bool fallback = false;
};

struct SolverReport {
  SolverStatus status = SolverStatus::converged;
  std::size_t iterations = 0;
  /// One row per iterate, including the starting point.
  std::vector<TraceRow> trace;
  ManifoldPoint final_point;
  /// Evaluations of h, counting the start and every line-search trial.
  std::size_t function_evals = 0;
  std::size_t total_cg_iters = 0;
};

struct Direction {
  TangentVector step;
  std::size_t inner_iters = 0;
  bool fallback = false;
};

struct LineSearchResult {
  int step_exponent = 0;
  ManifoldPoint next;
  double next_cost = 0.0;
  /// Cost evaluations performed.
  std::size_t trials = 0;
};

/// Checks the two truncation conditions for a Gauss-Newton candidate against
/// the unpreconditioned normal equation:
///   ||(DH)^*DH[dx] + grad|| <= eta ||grad||   and   <grad, dx> <= -eta <dx, dx>.
/// A zero candidate never passes.
bool accept_candidate(const Linearization &lin, const TangentVector &grad,
                      const TangentVector &candidate, double eta);

/// Inexact Gauss-Newton direction: truncated CG on the normal equation (or on
/// its preconditioned form when `prec` is given), falling back to -grad when
/// the truncation conditions cannot be met within the CG budget.
Direction compute_direction(const ProblemData &p, const ManifoldPoint &x,
                            const TangentVector &grad, const PrecondState *prec,
                            const SolverConfig &cfg);

/// Armijo backtracking along the retraction curve. Throws LineSearchError if no
/// exponent up to cfg.max_backtracks satisfies the decrease condition.
LineSearchResult line_search(const ProblemData &p, const ManifoldPoint &x, double current_cost,
                             const TangentVector &direction, const TangentVector &grad,
                             const SolverConfig &cfg);

/// Riemannian inexact Gauss-Newton with (preconditioned) truncated CG and
/// Armijo line search.
SolverReport solve(const ProblemData &p, const ManifoldPoint &x0, const SolverConfig &cfg);

} // namespace lsiep
