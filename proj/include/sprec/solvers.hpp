#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "sprec/errors.hpp"
#include "sprec/linalg.hpp"
#include "sprec/penalties.hpp"
#include "sprec/problem.hpp"
#include "sprec/xupdate.hpp"

namespace sprec {

enum class Algorithm { AdmmMcpExact, AdmmMcpUnified, AdmmL0, Iht, Niht };
enum class LambdaStrategy { Fixed, Grid, Adaptive };
enum class RhoMode { Paper, Theory, Explicit };

// Canonical command-line tags: admm-mcp-exact, admm-mcp, admm-l0, iht, niht.
std::string algorithm_tag(Algorithm a);
// Throws std::invalid_argument listing the valid tags on an unknown one.
Algorithm parse_algorithm(const std::string& tag);

struct SolverConfig {
    Algorithm algorithm = Algorithm::AdmmMcpUnified;
    RhoMode rho_mode = RhoMode::Paper;
    double rho = 0.1;           // used when rho_mode = Explicit
    double gamma = 1.5;
    LambdaStrategy lambda_strategy = LambdaStrategy::Adaptive;
    double lambda = 0.1;        // used when lambda_strategy = Fixed
    std::size_t max_iter = 500;
    double tol = 1e-6;
};

// ADMM iterates. The multiplier w pairs with the consensus constraint x = u.
struct SolverState {
    std::vector<double> x, u, w;
    std::size_t k = 0;
};

struct TraceRow {
    std::size_t iter = 0;       // 1-based
    double dx_norm = 0.0;       // ||x^{k+1} - x^k||
    double du_norm = 0.0;
    double dw_norm = 0.0;
    double lagrangian = 0.0;    // augmented Lagrangian (ADMM) or ||b - A x||^2
    double rel_err = 0.0;       // ||x0 - x^k|| / ||x0||, NaN without ground truth
    double lambda = 0.0;        // lambda in effect this iteration (0 when unused)
};

using IterationTrace = std::vector<TraceRow>;

struct Solution {
    std::vector<double> x_hat;
    std::size_t iterations = 0;
    bool converged = false;
    IterationTrace trace;
    double final_lambda = 0.0;
    double rho_used = 0.0;
    // Runtime monitors, maxima over all iterations (0 for IHT/NIHT):
    // ||2 A^T (A x - b) + w|| / (1 + ||w||) — the multiplier identity —
    // and ||(x - u) - (w^+ - w)/rho|| / (1 + ||w^+||) — the residual identity.
    double max_grad_identity_resid = 0.0;
    double max_coupling_identity_resid = 0.0;
    // Iterations where the u-update failed to decrease the augmented
    // Lagrangian in u (beyond 1e-9 slack). Counted, never fatal.
    std::size_t u_descent_violations = 0;
};

// Divergence with whatever trace was accumulated before the blow-up.
class SolverDivergenceError : public DivergenceError {
public:
    SolverDivergenceError(std::string what, IterationTrace trace)
        : DivergenceError(std::move(what), trace.size()), partial_trace(std::move(trace)) {}

    IterationTrace partial_trace;
};

// ||b - A x||^2 + P(u) + w^T (x - u) + (rho/2) ||x - u||^2
double augmented_lagrangian(std::span<const double> x, std::span<const double> u,
                            std::span<const double> w, const DenseMatrix& a,
                            std::span<const double> b, const PenaltyParams& params, double rho);

// One ADMM sweep, in the fixed order u, then x, then w:
//   u^{k+1} = prox(x^k + w^k / rho)      (element-wise MCP prox)
//   x^{k+1} = cache.solve(u^{k+1}, w^k)
//   w^{k+1} = w^k + rho (x^{k+1} - u^{k+1})
// exact_prox selects the three-case prox; otherwise the unified formula.
void admm_mcp_step(SolverState& state, const XUpdateCache& cache, const PenaltyParams& params,
                   bool exact_prox);

// Same sweep with the u-update replaced by the tau-term hard threshold.
void admm_l0_step(SolverState& state, const XUpdateCache& cache, std::size_t tau);

// x^{k+1} = H_tau(x^k + A^T (b - A x^k))
std::vector<double> iht_step(std::span<const double> x, const DenseMatrix& a,
                             std::span<const double> b, std::size_t tau);

// IHT with the adaptive step mu = ||g_G||^2 / ||A g_G||^2 where g is the
// gradient direction A^T (b - A x) and G is the current support (top-tau of
// x, or of g when x = 0). Falls back to mu = 1 when A g_G = 0.
std::vector<double> niht_step(std::span<const double> x, const DenseMatrix& a,
                              std::span<const double> b, std::size_t tau);

// lambda = z_tau / gamma with z_tau the tau-th largest magnitude of
// x + w/rho; floored at 1e-12 when that order statistic is 0.
double adaptive_lambda(std::span<const double> x, std::span<const double> w, double rho,
                       std::size_t tau, double gamma);

// The presupposed grid 10^{-2}, 10^{-1.9}, ..., 10^{-0.1}.
std::vector<double> lambda_grid_values();

// Entries with |x_i| > 1e-6 * max(1, ||x||_inf) count as nonzero.
std::size_t sparsity_count(std::span<const double> x);

struct GridEntry {
    double lambda = 0.0;
    std::size_t sparsity = 0;
    bool converged = false;
    bool diverged = false;
};

// Tie-break rule, exposed for direct testing: pick the index of minimal
// sparsity; among ties prefer the smallest |s(prev) - s(next)| over grid
// neighbors (a boundary index uses its single neighbor); remaining ties go
// to the lowest lambda (lowest index). Diverged entries never win.
std::size_t grid_pick_index(const std::vector<GridEntry>& entries);

struct GridSelection {
    double lambda = 0.0;
    std::vector<GridEntry> entries;  // one per grid value, in grid order
};

// Runs the configured solver once per grid lambda and applies the rule
// above. Throws SolverDivergenceError when every run diverges, listing the
// per-lambda status in the message.
GridSelection lambda_grid_select(const ProblemInstance& problem, const SolverConfig& config);

// paper -> 0.1; explicit -> config.rho; theory -> 1.05 * max{1/gamma,
// sqrt(2) * l, l} with l = 2 * spectral_norm_sq(A), the closed form of the
// convergence conditions' lower bound.
double resolve_rho(const DenseMatrix& a, const SolverConfig& config);

// Full run from the zero start (or warm_start for x when given). Stops when
// max(||x^{k+1}-x^k||, ||x^{k+1}-u^{k+1}||) <= tol * (1 + ||x^{k+1}||) —
// just ||dx|| for IHT/NIHT — or at max_iter. Aborts with
// SolverDivergenceError on a non-finite iterate or ||x|| > 1e12.
Solution run_solver(const ProblemInstance& problem, const SolverConfig& config);
Solution run_solver(const ProblemInstance& problem, const SolverConfig& config,
                    std::span<const double> warm_start);

}  // namespace sprec
