#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "sprec/linalg.hpp"

namespace sprec {

// One sparse-recovery problem: recover a tau-sparse x0 from b = A x0 + noise.
// Generated instances have A entries +-1/sqrt(M), x0 with exactly tau
// nonzeros of +-1, and i.i.d. Gaussian noise of deviation sigma; everything
// regenerates bit-identically from (dimensions, sigma, tau, seed).
struct ProblemInstance {
    DenseMatrix a;                           // M x N measurement matrix
    std::vector<double> b;                   // length M
    std::optional<std::vector<double>> x0;   // ground truth, length N
    double sigma = 0.0;
    std::size_t tau = 0;
    std::uint64_t seed = 0;

    std::size_t n() const { return a.cols(); }
    std::size_t m() const { return a.rows(); }
};

}  // namespace sprec
