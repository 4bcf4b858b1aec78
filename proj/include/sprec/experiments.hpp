#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "sprec/problem.hpp"
#include "sprec/solvers.hpp"

namespace sprec {

// Aggregate over `trials` independent instances at one (M, algorithm) cell.
// `diverged` trials are counted as failures; the CSV schema carries only the
// fields through base_seed.
struct SweepRecord {
    std::size_t n = 0;
    std::size_t m = 0;
    std::size_t tau = 0;
    double sigma = 0.0;
    std::string algorithm;
    std::size_t trials = 0;
    std::size_t successes = 0;
    double success_rate = 0.0;
    double mean_iterations = 0.0;
    double mean_wall_ms = 0.0;
    std::uint64_t base_seed = 0;
    std::size_t diverged = 0;
};

// Draws A entrywise as fair signs scaled by 1/sqrt(M), a uniform tau-subset
// support with fair +-1 spikes, and Gaussian noise of deviation sigma, each
// from its own substream of `seed` — so changing sigma alone never
// reshuffles A or x0. Bit-identical for equal arguments.
ProblemInstance generate_instance(std::size_t n, std::size_t m, std::size_t tau, double sigma,
                                  std::uint64_t seed);

// ||x0 - x_hat|| / ||x0|| <= tol_rel (inclusive). Throws on x0 = 0.
bool is_success(std::span<const double> x0, std::span<const double> x_hat,
                double tol_rel = 0.01);

// One record per (M in m_list, config in configs), M-major, with trial
// seeds base_seed + trial. Trials of the same (M, trial) share their
// instance across algorithms. Trials may run in parallel; aggregation is
// serial and record order is fixed. A diverged trial counts as a failure.
std::vector<SweepRecord> run_sweep(std::size_t n, std::size_t tau, double sigma,
                                   std::span<const std::size_t> m_list, std::size_t trials,
                                   std::span<const SolverConfig> configs,
                                   std::uint64_t base_seed);

// Full per-iteration diagnostics of a single run (the quantities behind the
// convergence plots). Divergence propagates with the partial trace attached.
IterationTrace capture_trace(const ProblemInstance& problem, const SolverConfig& config);

}  // namespace sprec
