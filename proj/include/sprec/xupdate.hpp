#pragma once

#include <span>
#include <vector>

#include "sprec/linalg.hpp"

namespace sprec {

// Lower-triangular Cholesky factor of an SPD matrix (L such that L L^T = G).
class CholeskyFactor {
public:
    CholeskyFactor() = default;

    // Factors g in place conceptually; throws FactorizationError (carrying
    // rho_hint for the message) when a pivot is not strictly positive.
    static CholeskyFactor factor(const DenseMatrix& g, double rho_hint);

    // Solves L L^T y = rhs.
    std::vector<double> solve(std::span<const double> rhs) const;

    std::size_t dim() const { return l_.rows(); }

private:
    DenseMatrix l_;
};

// Cached pieces of the ADMM x-update
//
//   x = [2 A^T A + rho I]^{-1} [2 A^T b + rho u - w].
//
// With M < N the N x N inverse is wasteful; by the Woodbury identity
//
//   [rho I + 2 A^T A]^{-1} r = (1/rho) (r - A^T G^{-1} (2 A r)),
//   G = rho I_M + 2 A A^T,
//
// so we factor the M x M matrix G once per (A, rho) and each solve costs two
// matvecs plus two triangular solves. The cache is immutable after build and
// may be shared read-only across concurrent solver runs; it must be rebuilt
// if A or rho changes.
class XUpdateCache {
public:
    XUpdateCache(const DenseMatrix& a, std::span<const double> b, double rho);

    // Returns [2 A^T A + rho I]^{-1} [2 A^T b + rho u - w].
    std::vector<double> solve(std::span<const double> u, std::span<const double> w) const;

    // Applies the cached inverse to an arbitrary right-hand side r (length N).
    std::vector<double> apply_inverse(std::span<const double> r) const;

    double rho() const { return rho_; }
    const DenseMatrix& a() const { return *a_; }

private:
    const DenseMatrix* a_ = nullptr;  // non-owning; instance outlives the cache
    double rho_ = 0.0;
    CholeskyFactor chol_;              // factor of rho I + 2 A A^T
    std::vector<double> two_at_b_;     // 2 A^T b
};

}  // namespace sprec
