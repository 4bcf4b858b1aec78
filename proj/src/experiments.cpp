#include "sprec/experiments.hpp"

#include <chrono>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "sprec/rng.hpp"

namespace sprec {

namespace {

// Substream tags; fixed so regenerating any one part is stable against the
// others (see generate_instance contract).
enum Stream : std::uint64_t { kMatrix = 0, kSupport = 1, kSigns = 2, kNoise = 3 };

}  // namespace

ProblemInstance generate_instance(std::size_t n, std::size_t m, std::size_t tau, double sigma,
                                  std::uint64_t seed) {
    if (!(tau <= m)) throw std::invalid_argument("generate_instance: requires tau <= M");
    if (!(m < n)) throw std::invalid_argument("generate_instance: requires M < N");
    if (!(sigma >= 0.0)) throw std::invalid_argument("generate_instance: requires sigma >= 0");

    ProblemInstance inst;
    inst.sigma = sigma;
    inst.tau = tau;
    inst.seed = seed;

    const double scale = 1.0 / std::sqrt(static_cast<double>(m));
    inst.a = DenseMatrix(m, n);
    Rng matrix_rng(seed, kMatrix);
    for (double& v : inst.a.data()) v = matrix_rng.sign() * scale;

    // support: first tau entries of a Fisher-Yates shuffle of 0..n-1
    Rng support_rng(seed, kSupport);
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    for (std::size_t i = 0; i < tau; ++i)
        std::swap(idx[i], idx[i + support_rng.below(n - i)]);

    Rng signs_rng(seed, kSigns);
    std::vector<double> x0(n, 0.0);
    for (std::size_t i = 0; i < tau; ++i) x0[idx[i]] = signs_rng.sign();

    inst.b.resize(m);
    matvec(inst.a, x0, inst.b);
    if (sigma > 0.0) {
        Rng noise_rng(seed, kNoise);
        for (double& v : inst.b) v += sigma * noise_rng.normal();
    }
    inst.x0 = std::move(x0);
    return inst;
}

bool is_success(std::span<const double> x0, std::span<const double> x_hat, double tol_rel) {
    const double denom = norm2(x0);
    if (denom == 0.0) throw std::invalid_argument("is_success: ground truth must be nonzero");
    return norm2_diff(x0, x_hat) / denom <= tol_rel;
}

std::vector<SweepRecord> run_sweep(std::size_t n, std::size_t tau, double sigma,
                                   std::span<const std::size_t> m_list, std::size_t trials,
                                   std::span<const SolverConfig> configs,
                                   std::uint64_t base_seed) {
    if (trials < 1) throw std::invalid_argument("run_sweep: trials must be >= 1");
    if (configs.empty()) throw std::invalid_argument("run_sweep: no solver configs");

    std::vector<SweepRecord> records;
    for (std::size_t m : m_list) {
        for (const SolverConfig& config : configs) {
            // per-trial slots written independently, aggregated after the
            // loop, so parallel execution cannot affect the totals
            std::vector<unsigned char> ok(trials, 0), div(trials, 0);
            std::vector<double> iters(trials, 0.0), wall_ms(trials, 0.0);

#pragma omp parallel for schedule(dynamic)
            for (std::int64_t t = 0; t < static_cast<std::int64_t>(trials); ++t) {
                const ProblemInstance inst =
                    generate_instance(n, m, tau, sigma, base_seed + static_cast<std::uint64_t>(t));
                const auto start = std::chrono::steady_clock::now();
                try {
                    const Solution sol = run_solver(inst, config);
                    iters[t] = static_cast<double>(sol.iterations);
                    ok[t] = is_success(*inst.x0, sol.x_hat) ? 1 : 0;
                } catch (const SolverDivergenceError& e) {
                    iters[t] = static_cast<double>(e.iterations_completed);
                    div[t] = 1;
                }
                wall_ms[t] = std::chrono::duration<double, std::milli>(
                                 std::chrono::steady_clock::now() - start)
                                 .count();
            }

            SweepRecord rec;
            rec.n = n;
            rec.m = m;
            rec.tau = tau;
            rec.sigma = sigma;
            rec.algorithm = algorithm_tag(config.algorithm);
            rec.trials = trials;
            for (std::size_t t = 0; t < trials; ++t) {
                rec.successes += ok[t];
                rec.diverged += div[t];
                rec.mean_iterations += iters[t];
                rec.mean_wall_ms += wall_ms[t];
            }
            rec.success_rate = static_cast<double>(rec.successes) / static_cast<double>(trials);
            rec.mean_iterations /= static_cast<double>(trials);
            rec.mean_wall_ms /= static_cast<double>(trials);
            rec.base_seed = base_seed;
            records.push_back(std::move(rec));
        }
    }
    return records;
}

IterationTrace capture_trace(const ProblemInstance& problem, const SolverConfig& config) {
    return run_solver(problem, config).trace;
}

}  // namespace sprec
