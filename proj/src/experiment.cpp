#include "lsiep/experiment.hpp"

#include <chrono>
#include <fstream>

#include "lsiep/errors.hpp"

namespace lsiep {

void RunConfig::validate() const {
  instance.validate();
  solver.validate();
  if (repeats < 1)
    throw ConfigError("RunConfig: repeats must be >= 1");
}

double relative_c_error(const Vector &c, const Vector &c_true) {
  const double scale = c_true.lpNorm<Eigen::Infinity>();
  const double diff = (c - c_true).lpNorm<Eigen::Infinity>();
  return scale > 0.0 ? diff / scale : diff;
}

RunRecord run_instance(const GeneratedInstance &inst, const SolverConfig &cfg,
                       std::uint64_t seed) {
  RunRecord rec;
  rec.seed = seed;
  const auto start = std::chrono::steady_clock::now();
  rec.report = solve(inst.problem, inst.x0, cfg);
  rec.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const TraceRow &last = rec.report.trace.back();
  rec.residual_norm = last.residual_norm;
  rec.grad_norm = last.grad_norm;
  if (inst.c_true)
    rec.err_c = relative_c_error(rec.report.final_point.c, *inst.c_true);
  return rec;
}

RunSummary summarize(std::vector<RunRecord> runs) {
  RunSummary s;
  s.repeats = runs.size();
  std::size_t err_count = 0;
  double err_sum = 0.0;
  for (const auto &r : runs) {
    if (r.report.status == SolverStatus::converged)
      ++s.successful_runs;
    const auto it = static_cast<double>(r.report.iterations);
    s.mean_seconds += r.seconds;
    s.mean_iterations += it;
    s.mean_function_evals += static_cast<double>(r.report.function_evals);
    s.mean_ncg_total += static_cast<double>(r.report.total_cg_iters);
    s.mean_ncg_per_outer +=
        it > 0 ? static_cast<double>(r.report.total_cg_iters) / it : 0.0;
    s.mean_residual_norm += r.residual_norm;
    s.mean_grad_norm += r.grad_norm;
    if (r.err_c) {
      err_sum += *r.err_c;
      ++err_count;
    }
  }
  if (s.successful_runs == 0)
    throw NumericError("every run failed");
  const auto k = static_cast<double>(s.repeats);
  s.mean_seconds /= k;
  s.mean_iterations /= k;
  s.mean_function_evals /= k;
  s.mean_ncg_total /= k;
  s.mean_ncg_per_outer /= k;
  s.mean_residual_norm /= k;
  s.mean_grad_norm /= k;
  if (err_count > 0)
    s.mean_err_c = err_sum / static_cast<double>(err_count);
  s.runs = std::move(runs);
  return s;
}

std::string trace_path_for(const std::string &base, std::size_t index, std::size_t repeats) {
  if (repeats <= 1)
    return base;
  const auto dot = base.find_last_of('.');
  const auto slash = base.find_last_of('/');
  const bool has_ext = dot != std::string::npos && (slash == std::string::npos || dot > slash);
  const std::string suffix = "_" + std::to_string(index);
  return has_ext ? base.substr(0, dot) + suffix + base.substr(dot) : base + suffix;
}

RunSummary run(const RunConfig &cfg) {
  cfg.validate();
  std::vector<RunRecord> runs;
  runs.reserve(cfg.repeats);
  for (std::size_t i = 0; i < cfg.repeats; ++i) {
    InstanceSpec spec = cfg.instance;
    if (spec.kind == InstanceKind::random)
      spec.seed += i;
    const GeneratedInstance inst = make_instance(spec);
    runs.push_back(run_instance(inst, cfg.solver, spec.seed));
    if (!cfg.trace_path.empty()) {
      std::ofstream os(trace_path_for(cfg.trace_path, i, cfg.repeats));
      if (!os)
        throw ConfigError("cannot open trace file " + cfg.trace_path);
      write_trace_csv(os, runs.back().report);
    }
  }
  RunSummary summary = summarize(std::move(runs));
  if (!cfg.summary_path.empty()) {
    std::ofstream os(cfg.summary_path);
    if (!os)
      throw ConfigError("cannot open summary file " + cfg.summary_path);
    os << dump(summary_to_json(summary)) << '\n';
  }
  return summary;
}

Json summary_to_json(const RunSummary &s) {
  Json runs = Json::array();
  for (const auto &r : s.runs) {
    Json entry{{"seed", r.seed},
               {"status", to_string(r.report.status)},
               {"seconds", r.seconds},
               {"iterations", r.report.iterations},
               {"function_evals", r.report.function_evals},
               {"ncg_total", r.report.total_cg_iters},
               {"res", r.residual_norm},
               {"grad", r.grad_norm},
               {"c", std::vector<double>(r.report.final_point.c.data(),
                                         r.report.final_point.c.data() +
                                             r.report.final_point.c.size())}};
    entry["err_c"] = r.err_c ? Json(*r.err_c) : Json(nullptr);
    runs.push_back(std::move(entry));
  }
  Json j{{"repeats", s.repeats},
         {"successful_runs", s.successful_runs},
         {"ct", s.mean_seconds},
         {"it", s.mean_iterations},
         {"nf", s.mean_function_evals},
         {"ncg_total", s.mean_ncg_total},
         {"ncg_per_outer", s.mean_ncg_per_outer},
         {"res", s.mean_residual_norm},
         {"grad", s.mean_grad_norm},
         {"runs", std::move(runs)}};
  j["err_c"] = s.mean_err_c ? Json(*s.mean_err_c) : Json(nullptr);
  return j;
}

} // namespace lsiep
