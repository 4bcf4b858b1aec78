#include "sprec/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>
#include <stdexcept>

namespace sprec {

namespace {

constexpr double kDivergenceNormGuard = 1e12;
constexpr double kAdaptiveLambdaFloor = 1e-12;

bool is_admm(Algorithm a) {
    return a == Algorithm::AdmmMcpExact || a == Algorithm::AdmmMcpUnified ||
           a == Algorithm::AdmmL0;
}

bool is_mcp(Algorithm a) {
    return a == Algorithm::AdmmMcpExact || a == Algorithm::AdmmMcpUnified;
}

// w^T (x - u) + (rho/2) ||x - u||^2
double coupling_terms(std::span<const double> x, std::span<const double> u,
                      std::span<const double> w, double rho) {
    double lin = 0.0, quad = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double d = x[i] - u[i];
        lin += w[i] * d;
        quad += d * d;
    }
    return lin + 0.5 * rho * quad;
}

}  // namespace

std::string algorithm_tag(Algorithm a) {
    switch (a) {
        case Algorithm::AdmmMcpExact: return "admm-mcp-exact";
        case Algorithm::AdmmMcpUnified: return "admm-mcp";
        case Algorithm::AdmmL0: return "admm-l0";
        case Algorithm::Iht: return "iht";
        case Algorithm::Niht: return "niht";
    }
    throw std::logic_error("unreachable algorithm tag");
}

Algorithm parse_algorithm(const std::string& tag) {
    if (tag == "admm-mcp-exact") return Algorithm::AdmmMcpExact;
    if (tag == "admm-mcp") return Algorithm::AdmmMcpUnified;
    if (tag == "admm-l0") return Algorithm::AdmmL0;
    if (tag == "iht") return Algorithm::Iht;
    if (tag == "niht") return Algorithm::Niht;
    throw std::invalid_argument("unknown algorithm '" + tag +
                                "' (valid: admm-mcp, admm-mcp-exact, admm-l0, iht, niht)");
}

double augmented_lagrangian(std::span<const double> x, std::span<const double> u,
                            std::span<const double> w, const DenseMatrix& a,
                            std::span<const double> b, const PenaltyParams& params, double rho) {
    if (x.size() != a.cols() || u.size() != x.size() || w.size() != x.size() ||
        b.size() != a.rows())
        throw std::invalid_argument("augmented_lagrangian: dimension mismatch");
    std::vector<double> ax(a.rows());
    matvec(a, x, ax);
    double psi = 0.0;
    for (std::size_t i = 0; i < ax.size(); ++i) {
        const double r = b[i] - ax[i];
        psi += r * r;
    }
    return psi + penalty_value_vec(u, params) + coupling_terms(x, u, w, rho);
}

void admm_mcp_step(SolverState& state, const XUpdateCache& cache, const PenaltyParams& params,
                   bool exact_prox) {
    const double rho = cache.rho();
    for (std::size_t i = 0; i < state.u.size(); ++i) {
        const double s = state.x[i] + state.w[i] / rho;
        state.u[i] = exact_prox ? mcp_prox_exact(s, params, rho).value
                                : mcp_prox_unified(s, params).value;
    }
    state.x = cache.solve(state.u, state.w);
    for (std::size_t i = 0; i < state.w.size(); ++i)
        state.w[i] += rho * (state.x[i] - state.u[i]);
    ++state.k;
}

void admm_l0_step(SolverState& state, const XUpdateCache& cache, std::size_t tau) {
    const double rho = cache.rho();
    std::vector<double> s(state.x.size());
    for (std::size_t i = 0; i < s.size(); ++i) s[i] = state.x[i] + state.w[i] / rho;
    state.u = hard_threshold(s, tau);
    state.x = cache.solve(state.u, state.w);
    for (std::size_t i = 0; i < state.w.size(); ++i)
        state.w[i] += rho * (state.x[i] - state.u[i]);
    ++state.k;
}

std::vector<double> iht_step(std::span<const double> x, const DenseMatrix& a,
                             std::span<const double> b, std::size_t tau) {
    std::vector<double> r(a.rows());
    matvec(a, x, r);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = b[i] - r[i];
    std::vector<double> g(a.cols());
    matvec_t(a, r, g);
    for (std::size_t i = 0; i < g.size(); ++i) g[i] += x[i];
    return hard_threshold(g, tau);
}

std::vector<double> niht_step(std::span<const double> x, const DenseMatrix& a,
                              std::span<const double> b, std::size_t tau) {
    std::vector<double> r(a.rows());
    matvec(a, x, r);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = b[i] - r[i];
    std::vector<double> g(a.cols());
    matvec_t(a, r, g);

    const bool x_is_zero = std::all_of(x.begin(), x.end(), [](double v) { return v == 0.0; });
    const auto support = top_tau_indices(x_is_zero ? std::span<const double>(g) : x, tau);

    std::vector<double> g_restricted(g.size(), 0.0);
    for (std::size_t i : support) g_restricted[i] = g[i];
    std::vector<double> ag(a.rows());
    matvec(a, g_restricted, ag);
    const double denom = dot(ag, ag);
    const double mu = denom > 0.0 ? dot(g_restricted, g_restricted) / denom : 1.0;

    std::vector<double> v(x.begin(), x.end());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] += mu * g[i];
    return hard_threshold(v, tau);
}

double adaptive_lambda(std::span<const double> x, std::span<const double> w, double rho,
                       std::size_t tau, double gamma) {
    if (tau < 1 || tau > x.size())
        throw std::invalid_argument("adaptive_lambda requires 1 <= tau <= N");
    if (!(gamma > 1.0)) throw std::invalid_argument("adaptive_lambda requires gamma > 1");
    std::vector<double> mags(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) mags[i] = std::abs(x[i] + w[i] / rho);
    std::nth_element(mags.begin(), mags.begin() + (tau - 1), mags.end(), std::greater<>());
    const double z_tau = mags[tau - 1];
    if (z_tau == 0.0) return kAdaptiveLambdaFloor;
    return z_tau / gamma;
}

std::vector<double> lambda_grid_values() {
    std::vector<double> grid(20);
    for (int i = 0; i < 20; ++i) grid[i] = std::pow(10.0, -2.0 + 0.1 * i);
    return grid;
}

std::size_t sparsity_count(std::span<const double> x) {
    const double thresh = 1e-6 * std::max(1.0, norm_inf(x));
    std::size_t n = 0;
    for (double v : x) {
        if (std::abs(v) > thresh) ++n;
    }
    return n;
}

std::size_t grid_pick_index(const std::vector<GridEntry>& entries) {
    if (entries.empty()) throw std::invalid_argument("grid_pick_index: no entries");
    const std::size_t count = entries.size();

    std::size_t best_sparsity = std::numeric_limits<std::size_t>::max();
    for (const auto& e : entries) {
        if (!e.diverged) best_sparsity = std::min(best_sparsity, e.sparsity);
    }
    if (best_sparsity == std::numeric_limits<std::size_t>::max())
        throw std::invalid_argument("grid_pick_index: every entry diverged");

    // neighbor difference |s(prev) - s(next)|; a boundary index pairs its
    // single neighbor with itself
    auto neighbor_diff = [&](std::size_t i) {
        const std::size_t lo = i == 0 ? i : i - 1;
        const std::size_t hi = i + 1 == count ? i : i + 1;
        const std::size_t a = entries[lo].sparsity;
        const std::size_t b = entries[hi].sparsity;
        return a > b ? a - b : b - a;
    };

    std::size_t best = count;
    std::size_t best_diff = 0;
    for (std::size_t i = 0; i < count; ++i) {
        if (entries[i].diverged || entries[i].sparsity != best_sparsity) continue;
        const std::size_t d = neighbor_diff(i);
        if (best == count || d < best_diff) {
            best = i;
            best_diff = d;
        }
    }
    return best;
}

GridSelection lambda_grid_select(const ProblemInstance& problem, const SolverConfig& config) {
    if (!is_mcp(config.algorithm))
        throw std::invalid_argument("lambda grid search applies only to the MCP solvers");
    GridSelection sel;
    std::size_t diverged = 0;
    for (double lam : lambda_grid_values()) {
        SolverConfig sub = config;
        sub.lambda_strategy = LambdaStrategy::Fixed;
        sub.lambda = lam;
        GridEntry entry;
        entry.lambda = lam;
        try {
            const Solution sol = run_solver(problem, sub);
            entry.sparsity = sparsity_count(sol.x_hat);
            entry.converged = sol.converged;
        } catch (const SolverDivergenceError&) {
            entry.diverged = true;
            entry.sparsity = problem.n() + 1;  // sentinel: worse than any real count
            ++diverged;
        }
        sel.entries.push_back(entry);
    }
    if (diverged == sel.entries.size()) {
        std::ostringstream msg;
        msg << "every grid lambda diverged:";
        for (const auto& e : sel.entries) msg << ' ' << e.lambda;
        throw SolverDivergenceError(msg.str(), {});
    }
    sel.lambda = sel.entries[grid_pick_index(sel.entries)].lambda;
    return sel;
}

double resolve_rho(const DenseMatrix& a, const SolverConfig& config) {
    switch (config.rho_mode) {
        case RhoMode::Paper: return 0.1;
        case RhoMode::Explicit: return config.rho;
        case RhoMode::Theory: {
            const double l_psi = 2.0 * spectral_norm_sq(a);
            const double bound =
                std::max({1.0 / config.gamma, std::sqrt(2.0) * l_psi, l_psi});
            return 1.05 * bound;
        }
    }
    throw std::logic_error("unreachable rho mode");
}

namespace {

Solution run_impl(const ProblemInstance& problem, const SolverConfig& config,
                  std::span<const double> warm_start) {
    const DenseMatrix& a = problem.a;
    const std::size_t n = a.cols();
    const Algorithm algo = config.algorithm;

    if (a.empty() || problem.b.size() != a.rows())
        throw std::invalid_argument("run_solver: inconsistent instance dimensions");
    if (!(config.tol > 0.0)) throw std::invalid_argument("run_solver: tol must be positive");
    if (config.max_iter < 1) throw std::invalid_argument("run_solver: max_iter must be >= 1");
    if (is_mcp(algo) && !(config.gamma > 1.0))
        throw std::invalid_argument("run_solver: MCP requires gamma > 1");
    if (is_mcp(algo) && config.lambda_strategy == LambdaStrategy::Fixed && !(config.lambda > 0.0))
        throw std::invalid_argument("run_solver: fixed lambda must be positive");
    const bool needs_tau = algo == Algorithm::AdmmL0 || algo == Algorithm::Iht ||
                           algo == Algorithm::Niht ||
                           (is_mcp(algo) && config.lambda_strategy == LambdaStrategy::Adaptive);
    if (needs_tau && (problem.tau < 1 || problem.tau > n))
        throw std::invalid_argument("run_solver: algorithm/lambda strategy requires 1 <= tau <= N");
    if (!warm_start.empty() && warm_start.size() != n)
        throw std::invalid_argument("run_solver: warm start length must equal N");

    const bool admm = is_admm(algo);
    const double rho = admm ? resolve_rho(a, config) : 0.0;
    std::optional<XUpdateCache> cache;
    if (admm) cache.emplace(a, problem.b, rho);

    SolverState state;
    state.x.assign(n, 0.0);
    state.u.assign(n, 0.0);
    state.w.assign(n, 0.0);
    if (!warm_start.empty()) state.x.assign(warm_start.begin(), warm_start.end());

    const double x0_norm = problem.x0 ? norm2(*problem.x0) : 0.0;

    Solution sol;
    sol.rho_used = rho;
    std::vector<double> x_prev, u_prev, w_prev, ax(a.rows()), grad(n);
    double lambda_k = 0.0;

    for (std::size_t k = 1; k <= config.max_iter; ++k) {
        x_prev = state.x;
        u_prev = state.u;
        w_prev = state.w;

        if (is_mcp(algo)) {
            lambda_k = config.lambda_strategy == LambdaStrategy::Adaptive
                           ? adaptive_lambda(x_prev, w_prev, rho, problem.tau, config.gamma)
                           : config.lambda;
        }
        const PenaltyParams params{lambda_k, config.gamma, PenaltyFamily::MCP};

        switch (algo) {
            case Algorithm::AdmmMcpExact:
                admm_mcp_step(state, *cache, params, true);
                break;
            case Algorithm::AdmmMcpUnified:
                admm_mcp_step(state, *cache, params, false);
                break;
            case Algorithm::AdmmL0:
                admm_l0_step(state, *cache, problem.tau);
                break;
            case Algorithm::Iht:
                state.x = iht_step(state.x, a, problem.b, problem.tau);
                ++state.k;
                break;
            case Algorithm::Niht:
                state.x = niht_step(state.x, a, problem.b, problem.tau);
                ++state.k;
                break;
        }

        if (!all_finite(state.x) || !all_finite(state.u) || !all_finite(state.w))
            throw SolverDivergenceError(
                "non-finite iterate at iteration " + std::to_string(k), std::move(sol.trace));
        const double x_norm = norm2(state.x);
        if (x_norm > kDivergenceNormGuard)
            throw SolverDivergenceError(
                "iterate norm exceeded 1e12 at iteration " + std::to_string(k),
                std::move(sol.trace));

        matvec(a, state.x, ax);
        double psi = 0.0;
        for (std::size_t i = 0; i < ax.size(); ++i) {
            const double r = problem.b[i] - ax[i];
            psi += r * r;
        }

        double lagrangian = psi;
        if (admm) {
            // multiplier identity: 2 A^T (A x - b) = -w after the w-update
            for (std::size_t i = 0; i < ax.size(); ++i) ax[i] -= problem.b[i];
            matvec_t(a, ax, grad);
            double num = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                const double d = 2.0 * grad[i] + state.w[i];
                num += d * d;
            }
            const double w_norm = norm2(state.w);
            sol.max_grad_identity_resid =
                std::max(sol.max_grad_identity_resid, std::sqrt(num) / (1.0 + w_norm));

            // residual identity: x - u = (w^+ - w)/rho
            double cnum = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                const double d = (state.x[i] - state.u[i]) - (state.w[i] - w_prev[i]) / rho;
                cnum += d * d;
            }
            sol.max_coupling_identity_resid =
                std::max(sol.max_coupling_identity_resid, std::sqrt(cnum) / (1.0 + w_norm));

            // u-descent of the Lagrangian at (x^k, w^k), penalty at this
            // iteration's lambda; the psi term cancels in the difference
            const double p_new = is_mcp(algo) ? penalty_value_vec(state.u, params) : 0.0;
            const double p_old = is_mcp(algo) ? penalty_value_vec(u_prev, params) : 0.0;
            const double delta = (p_new + coupling_terms(x_prev, state.u, w_prev, rho)) -
                                 (p_old + coupling_terms(x_prev, u_prev, w_prev, rho));
            if (delta > 1e-9) ++sol.u_descent_violations;

            lagrangian = psi + p_new + coupling_terms(state.x, state.u, state.w, rho);
        }

        TraceRow row;
        row.iter = k;
        row.dx_norm = norm2_diff(state.x, x_prev);
        row.du_norm = norm2_diff(state.u, u_prev);
        row.dw_norm = norm2_diff(state.w, w_prev);
        row.lagrangian = lagrangian;
        row.rel_err = problem.x0 ? norm2_diff(*problem.x0, state.x) / x0_norm
                                 : std::numeric_limits<double>::quiet_NaN();
        row.lambda = is_mcp(algo) ? lambda_k : 0.0;
        sol.trace.push_back(row);

        const double stop_metric =
            admm ? std::max(row.dx_norm, norm2_diff(state.x, state.u)) : row.dx_norm;
        if (stop_metric <= config.tol * (1.0 + x_norm)) {
            sol.converged = true;
            break;
        }
    }

    sol.x_hat = std::move(state.x);
    sol.iterations = sol.trace.size();
    sol.final_lambda = is_mcp(algo) ? lambda_k : 0.0;
    return sol;
}

}  // namespace

Solution run_solver(const ProblemInstance& problem, const SolverConfig& config,
                    std::span<const double> warm_start) {
    if (config.lambda_strategy == LambdaStrategy::Grid) {
        const GridSelection sel = lambda_grid_select(problem, config);
        SolverConfig fixed = config;
        fixed.lambda_strategy = LambdaStrategy::Fixed;
        fixed.lambda = sel.lambda;
        return run_impl(problem, fixed, warm_start);
    }
    return run_impl(problem, config, warm_start);
}

Solution run_solver(const ProblemInstance& problem, const SolverConfig& config) {
    return run_solver(problem, config, {});
}

}  // namespace sprec
