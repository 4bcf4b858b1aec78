#pragma once

#include <optional>
#include <string>

#include "json.hpp"
#include "sprec/experiments.hpp"
#include "sprec/problem.hpp"
#include "sprec/solvers.hpp"

namespace sprec {

// Shortest decimal rendering that round-trips the exact double; never
// locale-dependent. NaN renders as "nan".
std::string format_double(double v);

// Instance document: a single JSON object
//   {version, n, m, tau, sigma, seed, a_row_major, x0, b}
// with x0 omitted when the instance has no ground truth. Field order is
// fixed, so equal instances serialize to equal bytes.
void write_instance_json(const std::string& path, const ProblemInstance& inst);
ProblemInstance read_instance_json(const std::string& path);

// Trace CSV, exact header: iter,dx_norm,du_norm,dw_norm,lagrangian,rel_err,lambda
void write_trace_csv(const std::string& path, const IterationTrace& trace);

// Sweep CSV, exact header:
// n,m,tau,sigma,algorithm,trials,successes,success_rate,mean_iterations,mean_wall_ms,base_seed
void write_sweep_csv(const std::string& path, const std::vector<SweepRecord>& records);

// Solution document: {version, algorithm, converged, iterations,
// final_lambda, rho, rel_err (null without ground truth), x_hat}.
void write_solution_json(const std::string& path, const Solution& sol,
                         const std::string& algorithm, std::optional<double> rel_err);

// Generic JSON document I/O (used for run manifests).
void write_json(const std::string& path, const nlohmann::ordered_json& doc);
nlohmann::ordered_json read_json(const std::string& path);

}  // namespace sprec
