#include "lsiep/serialization.hpp"

#include <iomanip>
#include <limits>
#include <ostream>
#include <vector>

#include "lsiep/errors.hpp"

namespace lsiep {

namespace {

std::vector<double> row_major(const Matrix &a) {
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(a.size()));
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.push_back(a(i, j));
  return out;
}

Matrix from_row_major(const Json &j, std::size_t n, const char *what) {
  const auto values = j.get<std::vector<double>>();
  if (values.size() != n * n)
    throw ConfigError(std::string(what) + ": expected " + std::to_string(n * n) + " entries");
  const auto nn = static_cast<Eigen::Index>(n);
  Matrix a(nn, nn);
  for (Eigen::Index i = 0; i < nn; ++i)
    for (Eigen::Index k = 0; k < nn; ++k)
      a(i, k) = values[static_cast<std::size_t>(i * nn + k)];
  return a;
}

std::vector<double> to_std(const Vector &v) { return {v.data(), v.data() + v.size()}; }

Vector from_std(const Json &j) {
  const auto values = j.get<std::vector<double>>();
  return Eigen::Map<const Vector>(values.data(), static_cast<Eigen::Index>(values.size()));
}

} // namespace

Json problem_to_json(const ProblemData &p) {
  Json basis = Json::array();
  for (const auto &a : p.basis())
    basis.push_back(row_major(a));
  return Json{{"n", p.n()},
              {"l", p.l()},
              {"m", p.m()},
              {"target_eigs", to_std(p.target_eigs())},
              {"basis", std::move(basis)}};
}

ProblemData problem_from_json(const Json &j) {
  try {
    const auto n = j.at("n").get<std::size_t>();
    const auto l = j.at("l").get<std::size_t>();
    const auto m = j.at("m").get<std::size_t>();
    const Json &basis_json = j.at("basis");
    if (basis_json.size() != l + 1)
      throw ConfigError("problem JSON: basis must hold l + 1 matrices");
    std::vector<Matrix> basis;
    for (const auto &entry : basis_json)
      basis.push_back(from_row_major(entry, n, "problem JSON basis"));
    Vector targets = from_std(j.at("target_eigs"));
    if (static_cast<std::size_t>(targets.size()) != m)
      throw ConfigError("problem JSON: target_eigs length differs from m");
    return ProblemData(std::move(basis), std::move(targets));
  } catch (const Json::exception &e) {
    throw ConfigError(std::string("problem JSON: ") + e.what());
  }
}

Json point_to_json(const ManifoldPoint &x) {
  return Json{{"c", to_std(x.c)}, {"q", row_major(x.q)}, {"lambda", to_std(x.lambda)}};
}

ManifoldPoint point_from_json(const Json &j, std::size_t n) {
  try {
    ManifoldPoint x;
    x.c = from_std(j.at("c"));
    x.q = from_row_major(j.at("q"), n, "point JSON q");
    x.lambda = from_std(j.at("lambda"));
    return x;
  } catch (const Json::exception &e) {
    throw ConfigError(std::string("point JSON: ") + e.what());
  }
}

Json instance_to_json(const GeneratedInstance &inst) {
  Json j = problem_to_json(inst.problem);
  j["x0"] = point_to_json(inst.x0);
  if (inst.c_true)
    j["c_true"] = to_std(*inst.c_true);
  return j;
}

GeneratedInstance instance_from_json(const Json &j) {
  ProblemData p = problem_from_json(j);
  std::optional<Vector> c_true;
  if (j.contains("c_true"))
    c_true = from_std(j.at("c_true"));
  if (c_true && static_cast<std::size_t>(c_true->size()) != p.l())
    throw ConfigError("instance JSON: c_true length differs from l");
  ManifoldPoint x0 = j.contains("x0")
                         ? point_from_json(j.at("x0"), p.n())
                         : initial_point(p, Vector::Zero(static_cast<Eigen::Index>(p.l())));
  p.check_point(x0);
  return GeneratedInstance{std::move(p), std::move(c_true), std::move(x0)};
}

Json report_to_json(const SolverReport &r) {
  Json trace = Json::array();
  for (const auto &row : r.trace)
    trace.push_back(Json{{"cost", row.cost},
                         {"grad_norm", row.grad_norm},
                         {"res_norm", row.residual_norm},
                         {"cg_iters", row.cg_iters},
                         {"l_k", row.step_exponent},
                         {"fallback", row.fallback}});
  return Json{{"status", to_string(r.status)},
              {"iterations", r.iterations},
              {"function_evals", r.function_evals},
              {"total_cg_iters", r.total_cg_iters},
              {"final_point", point_to_json(r.final_point)},
              {"trace", std::move(trace)}};
}

void write_trace_csv(std::ostream &os, const SolverReport &r) {
  const auto old_precision = os.precision(std::numeric_limits<double>::max_digits10);
  os << "iter,cost,grad_norm,res_norm,cg_iters,l_k,fallback\n";
  for (std::size_t k = 0; k < r.trace.size(); ++k) {
    const auto &row = r.trace[k];
    os << k << ',' << row.cost << ',' << row.grad_norm << ',' << row.residual_norm << ','
       << row.cg_iters << ',' << row.step_exponent << ',' << (row.fallback ? 1 : 0) << '\n';
  }
  os.precision(old_precision);
}

std::string dump(const Json &j) { return j.dump(2); }

} // namespace lsiep
