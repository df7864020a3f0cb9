// Command-line front end for the LSIEP solver.
//
//   lsiep solve --instance sturm_liouville --n 20 --l 12 --zeta 1e-8 --out run.json --trace run.csv
//   lsiep sweep --instance random --n 20 --l 10 --m 18 --repeats 10 --out sweep.json
//   lsiep surjectivity --instance example1
//   lsiep generate --instance random --n 8 --l 4 --m 6 --seed 3 --out inst.json
//
// Exit codes: 0 success, 1 solver failure, 2 configuration error.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"

#include "lsiep/diagnostics.hpp"
#include "lsiep/errors.hpp"
#include "lsiep/experiment.hpp"

namespace {

struct Options {
  std::string instance = "example1";
  std::string problem_file;
  std::size_t n = 0, l = 0, m = 0;
  std::uint64_t seed = 0;
  int chop = -1;
  double zeta = 1e-7;
  bool no_precond = false;
  std::size_t max_outer = 100000;
  std::size_t cg_max_iters = 0;
  double t_hat = lsiep::kDefaultPrecondShift;
  std::size_t cg_refinements = lsiep::SolverConfig{}.cg_refinements;
  std::size_t repeats = 1;
  std::string out;
  std::string trace;
  double rank_tol = 1e-10;
  std::size_t max_n = 64;
};

void add_instance_flags(CLI::App *cmd, Options &o) {
  cmd->add_option("--instance", o.instance, "example1 | sturm_liouville | random");
  cmd->add_option("--problem", o.problem_file, "instance JSON (overrides --instance)");
  cmd->add_option("--n", o.n, "matrix order");
  cmd->add_option("--l", o.l, "number of basis coefficients");
  cmd->add_option("--m", o.m, "number of prescribed eigenvalues (defaults to n)");
  cmd->add_option("--seed", o.seed, "seed for random instances");
  cmd->add_option("--chop", o.chop, "decimal places kept in the random-instance start");
}

void add_solver_flags(CLI::App *cmd, Options &o) {
  cmd->add_option("--zeta", o.zeta, "stop once ||grad h|| < zeta");
  cmd->add_flag("--no-precond", o.no_precond, "plain CG on the normal equation");
  cmd->add_option("--max-outer", o.max_outer, "outer iteration cap");
  cmd->add_option("--cg-max-iters", o.cg_max_iters, "inner CG cap (default n^3)");
  cmd->add_option("--t-hat", o.t_hat, "preconditioner shift");
  cmd->add_option("--cg-refinements", o.cg_refinements,
                  "extra tighter CG solves when a candidate misses the truncation test");
}

lsiep::InstanceSpec instance_spec(const Options &o) {
  lsiep::InstanceSpec spec;
  spec.kind = lsiep::parse_instance_kind(o.instance);
  if (spec.kind == lsiep::InstanceKind::example1) {
    spec.n = spec.l = spec.m = 5;
    if ((o.n && o.n != 5) || (o.l && o.l != 5) || (o.m && o.m != 5))
      throw lsiep::ConfigError("example1 is fixed at (n, l, m) = (5, 5, 5)");
  } else {
    spec.n = o.n;
    spec.l = o.l;
    spec.m = o.m ? o.m : o.n;
  }
  spec.seed = o.seed;
  if (o.chop >= 0)
    spec.chop_decimals = o.chop;
  spec.validate();
  return spec;
}

lsiep::GeneratedInstance load_instance(const Options &o) {
  if (!o.problem_file.empty()) {
    std::ifstream is(o.problem_file);
    if (!is)
      throw lsiep::ConfigError("cannot open " + o.problem_file);
    lsiep::Json j;
    try {
      is >> j;
    } catch (const lsiep::Json::exception &e) {
      throw lsiep::ConfigError(o.problem_file + ": " + e.what());
    }
    return lsiep::instance_from_json(j);
  }
  return lsiep::make_instance(instance_spec(o));
}

lsiep::SolverConfig solver_config(const Options &o) {
  lsiep::SolverConfig cfg;
  cfg.grad_tol = o.zeta;
  cfg.use_preconditioner = !o.no_precond;
  cfg.max_outer = o.max_outer;
  if (o.cg_max_iters > 0)
    cfg.cg_max_iters = o.cg_max_iters;
  cfg.t_hat = o.t_hat;
  cfg.cg_refinements = o.cg_refinements;
  cfg.validate();
  return cfg;
}

void write_text(const std::string &path, const std::string &text) {
  if (path.empty()) {
    std::cout << text << '\n';
    return;
  }
  std::ofstream os(path);
  if (!os)
    throw lsiep::ConfigError("cannot open " + path);
  os << text << '\n';
}

int run_solve(const Options &o) {
  const lsiep::GeneratedInstance inst = load_instance(o);
  const lsiep::RunRecord rec = lsiep::run_instance(inst, solver_config(o), o.seed);
  const lsiep::RunSummary summary = lsiep::summarize({rec});
  lsiep::Json j = lsiep::summary_to_json(summary);
  j["report"] = lsiep::report_to_json(rec.report);
  write_text(o.out, lsiep::dump(j));
  if (!o.trace.empty()) {
    std::ofstream os(o.trace);
    if (!os)
      throw lsiep::ConfigError("cannot open " + o.trace);
    lsiep::write_trace_csv(os, rec.report);
  }
  std::cerr << "status=" << lsiep::to_string(rec.report.status)
            << " it=" << rec.report.iterations << " nf=" << rec.report.function_evals
            << " ncg=" << rec.report.total_cg_iters << " res=" << rec.residual_norm
            << " grad=" << rec.grad_norm << '\n';
  return rec.report.status == lsiep::SolverStatus::converged ? 0 : 1;
}

int run_sweep(const Options &o) {
  if (!o.problem_file.empty())
    throw lsiep::ConfigError("sweep generates its own instances; drop --problem");
  lsiep::RunConfig cfg;
  cfg.instance = instance_spec(o);
  cfg.solver = solver_config(o);
  cfg.repeats = o.repeats;
  cfg.summary_path = o.out;
  cfg.trace_path = o.trace;
  const lsiep::RunSummary s = lsiep::run(cfg);
  if (o.out.empty())
    std::cout << lsiep::dump(lsiep::summary_to_json(s)) << '\n';
  std::cerr << "converged " << s.successful_runs << "/" << s.repeats << " IT=" << s.mean_iterations
            << " NF=" << s.mean_function_evals << " NCG=" << s.mean_ncg_total
            << " NCG/outer=" << s.mean_ncg_per_outer << '\n';
  return s.successful_runs == s.repeats ? 0 : 1;
}

int run_surjectivity(const Options &o) {
  const lsiep::GeneratedInstance inst = load_instance(o);
  lsiep::SurjectivityOptions opts;
  opts.rank_tol = o.rank_tol;
  opts.max_n = o.max_n;
  const lsiep::SurjectivityReport r = lsiep::surjectivity_check(inst.problem, inst.x0, opts);
  const lsiep::Json j{{"rows", r.rows},
                      {"matrix_cols", r.matrix_cols},
                      {"numeric_rank", r.numeric_rank},
                      {"largest_singular_value", r.largest_singular_value},
                      {"smallest_singular_value", r.smallest_singular_value},
                      {"surjective", r.surjective}};
  write_text(o.out, lsiep::dump(j));
  return 0;
}

int run_generate(const Options &o) {
  write_text(o.out, lsiep::dump(lsiep::instance_to_json(load_instance(o))));
  return 0;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Riemannian inexact Gauss-Newton solver for least-squares inverse eigenvalue problems"};
  app.require_subcommand(1);
  Options o;

  auto *solve = app.add_subcommand("solve", "solve one instance");
  add_instance_flags(solve, o);
  add_solver_flags(solve, o);
  solve->add_option("--out", o.out, "JSON summary path (stdout if omitted)");
  solve->add_option("--trace", o.trace, "CSV convergence trace path");

  auto *sweep = app.add_subcommand("sweep", "repeat solves and average the table statistics");
  add_instance_flags(sweep, o);
  add_solver_flags(sweep, o);
  sweep->add_option("--repeats", o.repeats, "number of runs (random kind: consecutive seeds)");
  sweep->add_option("--out", o.out, "JSON summary path (stdout if omitted)");
  sweep->add_option("--trace", o.trace, "CSV trace path; run index appended when repeats > 1");

  auto *surj = app.add_subcommand("surjectivity", "rank test of DH at the starting point");
  add_instance_flags(surj, o);
  surj->add_option("--rank-tol", o.rank_tol, "relative singular-value threshold");
  surj->add_option("--max-n", o.max_n, "size guard for the dense n^2-row matrix");
  surj->add_option("--out", o.out, "JSON report path (stdout if omitted)");

  auto *gen = app.add_subcommand("generate", "write an instance (problem + x0) as JSON");
  add_instance_flags(gen, o);
  gen->add_option("--out", o.out, "instance JSON path (stdout if omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*solve)
      return run_solve(o);
    if (*sweep)
      return run_sweep(o);
    if (*surj)
      return run_surjectivity(o);
    return run_generate(o);
  } catch (const lsiep::ConfigError &e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const lsiep::DimensionError &e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception &e) {
    std::cerr << "solver failure: " << e.what() << '\n';
    return 1;
  }
}
