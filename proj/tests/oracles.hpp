// Independent reference implementations used to pin derived test values.
// Everything here is deliberately written from the mathematical definitions
// (piecewise formulas, textbook LU, naive summation) without calling the
// library code paths under test.
#pragma once

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "sprec/linalg.hpp"

namespace oracle {

// MCP value straight from the definition, independent of sprec::mcp_value.
inline double mcp(double u, double lambda, double gamma) {
    const double au = std::abs(u);
    if (au <= gamma * lambda) return lambda * au - u * u / (2.0 * gamma);
    return 0.5 * gamma * lambda * lambda;
}

// The scalar objective behind the MCP prox: L(u) = P(u) + (rho/2)(s-u)^2.
inline double prox_objective(double u, double s, double lambda, double gamma, double rho) {
    return mcp(u, lambda, gamma) + 0.5 * rho * (s - u) * (s - u);
}

struct GridMin {
    double arg = 0.0;
    double objective = 0.0;
};

// Brute-force grid minimization of prox_objective over
// [-(|s|+gamma*lambda+1), |s|+gamma*lambda+1] with the given step.
inline GridMin prox_grid_argmin(double s, double lambda, double gamma, double rho,
                                double step = 1e-4) {
    const double span = std::abs(s) + gamma * lambda + 1.0;
    GridMin best{-span, prox_objective(-span, s, lambda, gamma, rho)};
    const long steps = static_cast<long>(std::ceil(2.0 * span / step));
    for (long i = 1; i <= steps; ++i) {
        const double u = -span + static_cast<double>(i) * step;
        const double v = prox_objective(u, s, lambda, gamma, rho);
        if (v < best.objective) best = {u, v};
    }
    return best;
}

// Dense LU solve with partial pivoting (textbook), for checking the
// Woodbury/Cholesky x-update path against a direct N x N solve.
inline std::vector<double> lu_solve(sprec::DenseMatrix a, std::vector<double> rhs) {
    const std::size_t n = a.rows();
    assert(a.cols() == n && rhs.size() == n);
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::abs(a(r, col)) > std::abs(a(piv, col))) piv = r;
        if (a(piv, col) == 0.0) throw std::runtime_error("singular matrix in lu_solve");
        if (piv != col) {
            for (std::size_t c = 0; c < n; ++c) std::swap(a(col, c), a(piv, c));
            std::swap(rhs[col], rhs[piv]);
        }
        for (std::size_t r = col + 1; r < n; ++r) {
            const double f = a(r, col) / a(col, col);
            a(r, col) = 0.0;
            for (std::size_t c = col + 1; c < n; ++c) a(r, c) -= f * a(col, c);
            rhs[r] -= f * rhs[col];
        }
    }
    std::vector<double> x(n);
    for (std::size_t ii = n; ii-- > 0;) {
        double s = rhs[ii];
        for (std::size_t c = ii + 1; c < n; ++c) s -= a(ii, c) * x[c];
        x[ii] = s / a(ii, ii);
    }
    return x;
}

// Naive full evaluation of the augmented Lagrangian
//   ||b - A x||^2 + sum_i MCP(u_i) + w^T (x - u) + (rho/2) ||x - u||^2
// term by term with plain loops.
inline double lagrangian(std::span<const double> x, std::span<const double> u,
                         std::span<const double> w, const sprec::DenseMatrix& a,
                         std::span<const double> b, double lambda, double gamma, double rho) {
    double fit = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i) {
        double ax = 0.0;
        for (std::size_t j = 0; j < a.cols(); ++j) ax += a(i, j) * x[j];
        fit += (b[i] - ax) * (b[i] - ax);
    }
    double pen = 0.0;
    for (double v : u) pen += mcp(v, lambda, gamma);
    double lin = 0.0, quad = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        lin += w[i] * (x[i] - u[i]);
        quad += (x[i] - u[i]) * (x[i] - u[i]);
    }
    return fit + pen + lin + 0.5 * rho * quad;
}

// Hard threshold via full sort of (magnitude, index) pairs; lower index wins
// ties. Re-derives the selection rule without the library's helper.
inline std::vector<double> sort_hard_threshold(std::span<const double> z, std::size_t tau) {
    std::vector<std::pair<double, std::size_t>> mags;
    mags.reserve(z.size());
    for (std::size_t i = 0; i < z.size(); ++i) mags.emplace_back(std::abs(z[i]), i);
    std::sort(mags.begin(), mags.end(), [](const auto& p, const auto& q) {
        if (p.first != q.first) return p.first > q.first;
        return p.second < q.second;
    });
    std::vector<double> out(z.size(), 0.0);
    for (std::size_t k = 0; k < tau; ++k) out[mags[k].second] = z[mags[k].second];
    return out;
}

// Deterministic pseudo-random doubles for test data, independent of
// sprec::Rng (so generator bugs cannot mask themselves). Linear congruential
// generator, Numerical Recipes constants.
class TestRand {
public:
    explicit TestRand(std::uint64_t seed) : state_(seed * 2 + 1) {}

    double uniform(double lo, double hi) {
        state_ = state_ * 6364136223846793005ULL + 1442695040888963407ULL;
        const double t = static_cast<double>(state_ >> 11) * 0x1.0p-53;
        return lo + t * (hi - lo);
    }

    sprec::DenseMatrix matrix(std::size_t rows, std::size_t cols, double lo = -1.0,
                              double hi = 1.0) {
        sprec::DenseMatrix m(rows, cols);
        for (auto& v : m.data()) v = uniform(lo, hi);
        return m;
    }

    std::vector<double> vec(std::size_t n, double lo = -1.0, double hi = 1.0) {
        std::vector<double> v(n);
        for (auto& x : v) x = uniform(lo, hi);
        return v;
    }

private:
    std::uint64_t state_;
};

}  // namespace oracle
