#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "lsiep/problems.hpp"
#include "lsiep/serialization.hpp"
#include "lsiep/solver.hpp"

namespace lsiep {

struct RunConfig {
  InstanceSpec instance;
  SolverConfig solver;
  /// Random instances use seeds seed, seed+1, ...; other kinds rerun the same
  /// instance.
  std::size_t repeats = 1;
  /// JSON summary destination (skipped when empty).
  std::string summary_path;
  /// CSV trace destination; with repeats > 1 the run index is inserted before
  /// the extension (trace.csv -> trace_0.csv, ...).
  std::string trace_path;

  void validate() const;
};

struct RunRecord {
  std::uint64_t seed = 0;
  SolverReport report;
  double seconds = 0.0;
  double residual_norm = 0.0;
  double grad_norm = 0.0;
  std::optional<double> err_c;
};

/// Per-column means over all `repeats` runs; failed runs stay in the averages
/// and keep their status in `runs`.
struct RunSummary {
  std::size_t repeats = 0;
  std::size_t successful_runs = 0;
  double mean_seconds = 0.0;           ///< CT
  double mean_iterations = 0.0;        ///< IT
  double mean_function_evals = 0.0;    ///< NF
  double mean_ncg_total = 0.0;         ///< NCG, total inner iterations per run
  double mean_ncg_per_outer = 0.0;     ///< NCG, inner iterations per outer iteration
  double mean_residual_norm = 0.0;     ///< Res
  double mean_grad_norm = 0.0;         ///< grad
  std::optional<double> mean_err_c;    ///< err-c
  std::vector<RunRecord> runs;
};

/// ||c - c_true||_inf / ||c_true||_inf.
double relative_c_error(const Vector &c, const Vector &c_true);

/// Solves one generated instance and fills the per-run statistics.
RunRecord run_instance(const GeneratedInstance &inst, const SolverConfig &cfg,
                       std::uint64_t seed = 0);

/// Aggregates run records. Throws NumericError if no run converged.
RunSummary summarize(std::vector<RunRecord> runs);

/// Executes all repeats, writes the summary JSON / trace CSVs if requested.
RunSummary run(const RunConfig &cfg);

Json summary_to_json(const RunSummary &s);

/// Trace path for run `index` of `repeats`.
std::string trace_path_for(const std::string &base, std::size_t index, std::size_t repeats);

} // namespace lsiep
