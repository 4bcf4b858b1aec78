#include "sprec/penalties.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace sprec {

namespace {

double require(double v, bool ok, const char* msg) {
    if (!ok) throw std::invalid_argument(msg);
    return v;
}

double sgn(double x) { return x < 0.0 ? -1.0 : 1.0; }

}  // namespace

double mcp_value(double u, const PenaltyParams& params) {
    const double l = params.lambda;
    const double g = require(params.gamma, params.gamma > 1.0 && params.lambda > 0.0,
                             "MCP requires gamma > 1 and lambda > 0");
    const double au = std::abs(u);
    if (au <= g * l) return l * au - u * u / (2.0 * g);
    return 0.5 * g * l * l;
}

double scad_value(double u, const PenaltyParams& params) {
    const double l = params.lambda;
    const double g = require(params.gamma, params.gamma > 2.0 && params.lambda > 0.0,
                             "SCAD requires gamma > 2 and lambda > 0");
    const double au = std::abs(u);
    if (au <= l) return l * au;
    if (au <= g * l) return -(au * au - 2.0 * g * l * au + l * l) / (2.0 * (g - 1.0));
    return 0.5 * (g + 1.0) * l * l;
}

double etf_value(double u, const PenaltyParams& params) {
    const double l = params.lambda;
    const double g = require(params.gamma, params.gamma > 0.0 && params.lambda > 0.0,
                             "ETF requires gamma > 0 and lambda > 0");
    return l * (1.0 - std::exp(-g * std::abs(u))) / (1.0 - std::exp(-g));
}

double ltf_value(double u, const PenaltyParams& params) {
    const double l = params.lambda;
    const double g = require(params.gamma, params.gamma > 0.0 && params.lambda > 0.0,
                             "LTF requires gamma > 0 and lambda > 0");
    return l * std::log(g * std::abs(u) + 1.0) / std::log(g + 1.0);
}

double penalty_value_vec(std::span<const double> u, const PenaltyParams& params) {
    double (*scalar)(double, const PenaltyParams&) = nullptr;
    switch (params.family) {
        case PenaltyFamily::MCP: scalar = mcp_value; break;
        case PenaltyFamily::SCAD: scalar = scad_value; break;
        case PenaltyFamily::ETF: scalar = etf_value; break;
        case PenaltyFamily::LTF: scalar = ltf_value; break;
    }
    double s = 0.0;
    for (double v : u) s += scalar(v, params);
    return s;
}

double soft_threshold(double z, double eta) {
    if (!(eta >= 0.0)) throw std::invalid_argument("soft_threshold requires eta >= 0");
    return sgn(z) * std::max(std::abs(z) - eta, 0.0);
}

std::vector<std::size_t> top_tau_indices(std::span<const double> z, std::size_t tau) {
    if (tau > z.size()) throw std::invalid_argument("top_tau_indices: tau exceeds vector length");
    // stable_sort keeps lower indices first among equal magnitudes, which
    // pins the tie rule.
    std::vector<std::size_t> idx(z.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        return std::abs(z[a]) > std::abs(z[b]);
    });
    idx.resize(tau);
    return idx;
}

std::vector<double> hard_threshold(std::span<const double> z, std::size_t tau) {
    std::vector<double> out(z.size(), 0.0);
    for (std::size_t i : top_tau_indices(z, tau)) out[i] = z[i];
    return out;
}

ProxResult mcp_prox_exact(double s, const PenaltyParams& params, double rho) {
    const double l = params.lambda;
    const double g = params.gamma;
    if (!(g > 1.0) || !(l > 0.0) || !(rho > 0.0))
        throw std::invalid_argument("mcp_prox_exact requires gamma > 1, lambda > 0, rho > 0");
    const double as = std::abs(s);
    if (rho > 1.0 / g) {
        if (as > g * l) return {s, ProxBranch::PassThrough};
        if (as > l / rho) {
            const double v = sgn(s) * (as - l / rho) / (1.0 - 1.0 / (g * rho));
            return {v, ProxBranch::Shrunk};
        }
        return {0.0, ProxBranch::Zeroed};
    }
    // the two hard-threshold regimes differ only in where the jump sits
    const double thresh = (rho == 1.0 / g) ? g * l : std::sqrt(g / rho) * l;
    if (as > thresh) return {s, ProxBranch::PassThrough};
    return {0.0, ProxBranch::Zeroed};
}

ProxResult mcp_prox_unified(double s, const PenaltyParams& params) {
    const double l = params.lambda;
    const double g = params.gamma;
    if (!(g > 1.0) || !(l > 0.0))
        throw std::invalid_argument("mcp_prox_unified requires gamma > 1 and lambda > 0");
    const double as = std::abs(s);
    if (as > g * l) return {s, ProxBranch::PassThrough};
    if (as > l) {
        const double v = sgn(s) * (as - l) / (1.0 - 1.0 / g);
        return {v, ProxBranch::Shrunk};
    }
    return {0.0, ProxBranch::Zeroed};
}

}  // namespace sprec
