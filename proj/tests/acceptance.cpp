#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "lsiep/diagnostics.hpp"
#include "lsiep/experiment.hpp"
#include "lsiep/preconditioner.hpp"
#include "lsiep/problems.hpp"
#include "lsiep/solver.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace lsiep;
using namespace lsiep::testing;

namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char *format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

// Slope of log g_{k+1} against log g_k over the final three steps of a trace.
double tail_order(const SolverReport &r) {
  const auto &tr = r.trace;
  if (tr.size() < 4)
    return 0.0;
  std::vector<double> prev, next;
  for (std::size_t k = tr.size() - 3; k < tr.size(); ++k) {
    prev.push_back(tr[k - 1].grad_norm);
    next.push_back(tr[k].grad_norm);
  }
  return loglog_slope(prev, next);
}

Verdict example1() {
  const auto inst = make_example1();
  SolverConfig cfg;
  cfg.grad_tol = 1e-7;
  const auto start = std::chrono::steady_clock::now();
  const auto r = solve(inst.problem, inst.x0, cfg);
  const double secs = seconds_since(start);

  Vector c_ref(5), eig_ref(5);
  c_ref << 0.4423, 0.6044, 0.6566, 0.6044, 0.4423;
  eig_ref << 0.5888, 1.0422, 2.0742, 3.1446, 4.1501;
  const double res = r.trace.back().residual_norm;
  const double c_err = (r.final_point.c - c_ref).lpNorm<Eigen::Infinity>();
  const Vector eigs = symmetric_eigenvalues(a_of_c(inst.problem, r.final_point.c));
  const double eig_err = (eigs - eig_ref).lpNorm<Eigen::Infinity>();
  const bool ok = r.status == SolverStatus::converged && std::abs(res - 0.4688) <= 5e-4 &&
                  c_err <= 1e-3 && eig_err <= 1e-3 && secs <= 5.0;
  return {ok, fmt("status=%s it=%zu res=%.6f c_err=%.2e eig_err=%.2e time=%.2fs",
                  to_string(r.status).c_str(), r.iterations, res, c_err, eig_err, secs)};
}

Verdict example2() {
  bool ok = true;
  std::string detail;
  std::size_t pcg_total = 0, cg_total = 0;
  const auto start = std::chrono::steady_clock::now();
  for (auto [n, l] : {std::pair<std::size_t, std::size_t>{10, 6}, {20, 12}, {30, 18}}) {
    const auto inst = make_sturm_liouville(n, l);
    SolverConfig cfg;
    cfg.grad_tol = 1e-8;
    const auto pcg = run_instance(inst, cfg);
    cfg.use_preconditioner = false;
    const auto cg = run_instance(inst, cfg);
    const auto &r = pcg.report;
    const double per_outer = r.iterations > 0
                                 ? static_cast<double>(r.total_cg_iters) / static_cast<double>(r.iterations)
                                 : 0.0;
    ok = ok && r.status == SolverStatus::converged && r.iterations <= 8 && per_outer <= 3.0 &&
         *pcg.err_c <= 1e-8 && cg.report.status == SolverStatus::converged;
    pcg_total += r.total_cg_iters;
    cg_total += cg.report.total_cg_iters;
    detail += fmt("(%zu,%zu): it=%zu ncg/it=%.2f err_c=%.1e cg_ncg=%zu; ", n, l, r.iterations,
                  per_outer, *pcg.err_c, cg.report.total_cg_iters);
  }
  const double secs = seconds_since(start);
  ok = ok && 5 * pcg_total <= cg_total && secs <= 30.0;
  return {ok, detail + fmt("pcg_total=%zu cg_total=%zu time=%.2fs", pcg_total, cg_total, secs)};
}

Verdict example3() {
  std::vector<double> errs;
  std::size_t converged = 0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto inst = make_random(20, 10, 18, seed);
    SolverConfig cfg;
    cfg.grad_tol = 1e-8;
    const auto rec = run_instance(inst, cfg, seed);
    converged += rec.report.status == SolverStatus::converged ? 1 : 0;
    errs.push_back(*rec.err_c);
  }
  std::sort(errs.begin(), errs.end());
  const double median = 0.5 * (errs[4] + errs[5]);
  return {converged == 10 && median <= 1e-9,
          fmt("converged=%zu/10 median_err_c=%.2e max_err_c=%.2e", converged, median, errs.back())};
}

Verdict quadratic_rate() {
  SolverConfig cfg;
  cfg.grad_tol = 1e-6;
  const auto sl = make_sturm_liouville(10, 6);
  const auto r2 = solve(sl.problem, sl.x0, cfg);
  const auto rnd = make_random(20, 10, 18, 1);
  const auto r3 = solve(rnd.problem, rnd.x0, cfg);
  const double s2 = tail_order(r2), s3 = tail_order(r3);
  const bool ok = r2.status == SolverStatus::converged && r3.status == SolverStatus::converged &&
                  s2 >= 1.8 && s3 >= 1.8;
  return {ok, fmt("zeta=1e-6 sturm_liouville(10,6) slope=%.3f random(20,10,18) slope=%.3f", s2, s3)};
}

Verdict adjoint_oracle() {
  Rng rng(101);
  double worst = 0.0;
  for (std::size_t n : {3, 6, 12}) {
    for (int trial = 0; trial < 1000; ++trial) {
      const std::size_t m = 1 + static_cast<std::size_t>(trial) % n;
      const auto p = random_problem(rng, n, 1 + static_cast<std::size_t>(trial) % 4, m);
      const auto x = random_point(rng, p);
      const auto u = random_tangent(rng, x);
      const Matrix z = rng.symmetric(static_cast<Eigen::Index>(n));
      const Matrix du = diff(p, x, u);
      const TangentVector az = adjoint(p, x, z);
      const double scale = du.norm() * z.norm() + norm(x, u) * norm(x, az);
      worst = std::max(worst, std::abs(frob(du, z) - inner(x, u, az)) / scale);
    }
  }
  return {worst <= 1e-11, fmt("max relative mismatch=%.2e over 3000 triples", worst)};
}

Verdict gradient_oracle() {
  Rng rng(102);
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const auto p = random_problem(rng, 6, 3, 1 + static_cast<std::size_t>(trial) % 6);
    const auto x = random_point(rng, p);
    const auto u = random_tangent(rng, x);
    const double h0 = cost(p, x);
    const double dd = inner(x, gradient(p, x), u);
    std::vector<double> ts, errs;
    for (double t = 1e-2; t >= 1e-6 * 0.999; t /= 10.0) {
      ts.push_back(t);
      errs.push_back(std::abs((cost(p, retract(x, u, t)) - h0) / t - dd));
    }
    worst = std::max(worst, std::abs(loglog_slope(ts, errs) - 1.0));
  }
  return {worst <= 0.1, fmt("max |slope - 1|=%.3f over 20 points", worst)};
}

Verdict preconditioner_oracle() {
  Rng rng(103);
  const auto p10 = random_problem(rng, 10, 6, 7);
  const auto x10 = random_point(rng, p10);
  const auto round_trip_error = [&](double t_hat) {
    const PrecondState s(p10, x10, t_hat);
    Rng inputs(7);
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
      const Matrix z = inputs.symmetric(10);
      worst = std::max(worst, (s.apply(s.apply_inverse(z)) - z).norm() / z.norm());
    }
    return worst;
  };
  const double round_trip = round_trip_error(1e-2);
  const double round_trip_default = round_trip_error(kDefaultPrecondShift);
  double dense = 0.0;
  for (int trial = 0; trial < 10; ++trial) {
    const auto p6 = random_problem(rng, 6, 3, 2 + static_cast<std::size_t>(trial) % 5);
    const auto x6 = random_point(rng, p6);
    const PrecondState s6(p6, x6, kDefaultPrecondShift);
    const Matrix m_hat = dense_m_hat(p6, x6, kDefaultPrecondShift);
    const Matrix z = rng.symmetric(6);
    const Vector mz = m_hat * vec(z);
    dense = std::max(dense, (vec(s6.apply(z)) - mz).norm() / mz.norm());
  }
  return {round_trip <= 1e-10 && dense <= 1e-11,
          fmt("round trip (t_hat=1e-2)=%.2e round trip (t_hat=1e-5, not gated)=%.2e dense oracle=%.2e",
              round_trip, round_trip_default, dense)};
}

Verdict surjectivity_oracle() {
  Rng rng(104);
  std::size_t agree = 0;
  std::string ranks;
  for (int trial = 0; trial < 10; ++trial) {
    const auto p = random_problem(rng, 5, 1 + static_cast<std::size_t>(trial) % 5,
                                  static_cast<std::size_t>(trial) % 6);
    const auto x = random_point(rng, p);
    const auto report = surjectivity_check(p, x, SurjectivityOptions{1e-10, 64});
    const std::size_t oracle = numeric_rank(diff_columns(p, x), 1e-10);
    agree += report.numeric_rank == oracle ? 1 : 0;
    ranks += std::to_string(report.numeric_rank) + (trial < 9 ? "," : "");
  }
  return {agree == 10, fmt("agreement=%zu/10 ranks=[%s]", agree, ranks.c_str())};
}

Verdict retraction_suite() {
  Rng rng(105);
  double fixed = 0.0, orth = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = trial % 20 == 0 ? 20 : 6;
    const auto p = random_problem(rng, n, 2, n - 1);
    const auto x = random_point(rng, p);
    if (trial < 20) {
      const auto y = retract(x, TangentVector::zero_like(x), 1.0);
      fixed = std::max({fixed, (y.q - x.q).cwiseAbs().maxCoeff(), (y.c - x.c).norm(),
                        (y.lambda - x.lambda).norm()});
    }
    const auto u = random_tangent(rng, x);
    orth = std::max(orth, retract(x, u, std::pow(0.5, trial % 3)).orthogonality_error());
  }
  const auto p = random_problem(rng, 7, 3, 5);
  const auto x = random_point(rng, p);
  const auto u = random_tangent(rng, x);
  std::vector<double> ts, gaps;
  for (double t = 1e-1; t >= 1e-4 * 0.999; t /= 10.0) {
    ts.push_back(t);
    gaps.push_back((retract(x, u, t).q - (x.q + t * x.q * u.omega())).norm());
  }
  const double slope = loglog_slope(ts, gaps);
  return {fixed <= 1e-14 && orth <= 1e-12 && std::abs(slope - 2.0) <= 0.1,
          fmt("fixed point err=%.1e max orth err=%.2e slope=%.3f", fixed, orth, slope)};
}

} // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria{
      {"example 1 reproduction", example1},
      {"example 2 reproduction", example2},
      {"example 3 property run", example3},
      {"quadratic convergence", quadratic_rate},
      {"adjoint oracle", adjoint_oracle},
      {"gradient finite differences", gradient_oracle},
      {"preconditioner oracles", preconditioner_oracle},
      {"surjectivity equivalence", surjectivity_oracle},
      {"retraction suite", retraction_suite},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Verdict v;
    try {
      v = criteria[i].second();
    } catch (const std::exception &e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    failures += v.pass ? 0 : 1;
    std::printf("%s criterion %zu (%s): %s\n", v.pass ? "PASS" : "FAIL", i + 1,
                criteria[i].first.c_str(), v.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures,
              criteria.size());
  return failures == 0 ? 0 : 1;
}
