#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace sprec {

enum class PenaltyFamily { MCP, SCAD, ETF, LTF };

// Scale/concavity pair for the separable penalties. Domains: lambda > 0
// always; MCP needs gamma > 1, SCAD gamma > 2, ETF/LTF gamma > 0.
struct PenaltyParams {
    double lambda = 1.0;
    double gamma = 1.5;
    PenaltyFamily family = PenaltyFamily::MCP;
};

// Scalar penalty values. Each validates its own parameter domain and throws
// std::invalid_argument outside it.
double mcp_value(double u, const PenaltyParams& params);
double scad_value(double u, const PenaltyParams& params);
double etf_value(double u, const PenaltyParams& params);
double ltf_value(double u, const PenaltyParams& params);

// Sum of the element-wise penalty over a vector, dispatched on params.family.
double penalty_value_vec(std::span<const double> u, const PenaltyParams& params);

// sign(z) * max(|z| - eta, 0)
double soft_threshold(double z, double eta);

// Indices of the tau largest-magnitude entries. Ties in magnitude keep the
// lowest indices (stable selection), so results are reproducible across
// platforms. This single rule backs hard_threshold, the NIHT support pick,
// and the adaptive-lambda order statistic.
std::vector<std::size_t> top_tau_indices(std::span<const double> z, std::size_t tau);

// Keeps the tau largest-magnitude entries, zeroing the rest (ties as above).
std::vector<double> hard_threshold(std::span<const double> z, std::size_t tau);

enum class ProxBranch { PassThrough, Shrunk, Zeroed };

// Minimizer of P(u) + (rho/2)(s-u)^2 together with which case fired;
// the branch tag exists so tests can pin the case structure, not just values.
struct ProxResult {
    double value = 0.0;
    ProxBranch branch = ProxBranch::Zeroed;
};

// Exact scalar MCP prox. Three regimes:
//   rho > 1/gamma : pass-through above gamma*lambda, scaled soft threshold
//                   sign(s)(|s|-lambda/rho)/(1-1/(gamma*rho)) on
//                   (lambda/rho, gamma*lambda], zero at or below lambda/rho
//   rho = 1/gamma : hard threshold at gamma*lambda
//   rho < 1/gamma : hard threshold at sqrt(gamma/rho)*lambda
// Inner branches are inclusive (<=); the functions are continuous at the
// knots in the first regime, so the convention only matters for the tag.
// rho is compared to 1/gamma with exact floating-point equality.
ProxResult mcp_prox_exact(double s, const PenaltyParams& params, double rho);

// Unified approximation (rho-independent): pass-through above gamma*lambda;
// sign(s)(|s|-lambda)/(1-1/gamma) on (lambda, gamma*lambda]; zero at or
// below lambda. Coincides with the exact prox when rho = 1.
ProxResult mcp_prox_unified(double s, const PenaltyParams& params);

}  // namespace sprec
