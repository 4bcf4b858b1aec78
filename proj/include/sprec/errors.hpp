#pragma once

#include <stdexcept>
#include <string>

namespace sprec {

// Cholesky breakdown while building an x-update cache. Carries rho and the
// offending pivot so callers can report why the system stopped being SPD.
class FactorizationError : public std::runtime_error {
public:
    FactorizationError(double rho, std::size_t pivot_index, double pivot_value)
        : std::runtime_error("factorization failed at pivot " + std::to_string(pivot_index) +
                             " (value " + std::to_string(pivot_value) + ", rho " +
                             std::to_string(rho) + ")"),
          rho(rho),
          pivot_index(pivot_index),
          pivot_value(pivot_value) {}

    double rho;
    std::size_t pivot_index;
    double pivot_value;
};

// Solver iterate left the finite range (or blew past the norm guard).
// iterations_completed tells the caller how much of the trace is valid.
class DivergenceError : public std::runtime_error {
public:
    DivergenceError(std::string what, std::size_t iterations_completed)
        : std::runtime_error(std::move(what)), iterations_completed(iterations_completed) {}

    std::size_t iterations_completed;
};

}  // namespace sprec
