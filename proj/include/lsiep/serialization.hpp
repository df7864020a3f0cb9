#pragma once

#include <iosfwd>
#include <string>

#include "json.hpp"

#include "lsiep/problems.hpp"
#include "lsiep/solver.hpp"

namespace lsiep {

using Json = nlohmann::json;

/// {n, l, m, target_eigs: [...], basis: [[row-major n*n], ...]} with l+1 basis
/// entries (A_0 first).
Json problem_to_json(const ProblemData &p);
ProblemData problem_from_json(const Json &j);

/// {c, q (row-major), lambda}.
Json point_to_json(const ManifoldPoint &x);
ManifoldPoint point_from_json(const Json &j, std::size_t n);

/// Problem document plus "x0" and, when known, "c_true".
Json instance_to_json(const GeneratedInstance &inst);
GeneratedInstance instance_from_json(const Json &j);

Json report_to_json(const SolverReport &r);

/// Header: iter,cost,grad_norm,res_norm,cg_iters,l_k,fallback
void write_trace_csv(std::ostream &os, const SolverReport &r);

/// Pretty-printed JSON with 17-significant-digit-safe floats.
std::string dump(const Json &j);

} // namespace lsiep
