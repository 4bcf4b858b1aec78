#include "sprec/xupdate.hpp"

#include <cassert>
#include <cmath>
#include <stdexcept>

#include "sprec/errors.hpp"

namespace sprec {

CholeskyFactor CholeskyFactor::factor(const DenseMatrix& g, double rho_hint) {
    assert(g.rows() == g.cols());
    const std::size_t n = g.rows();
    CholeskyFactor f;
    f.l_ = DenseMatrix(n, n);
    DenseMatrix& l = f.l_;
    for (std::size_t j = 0; j < n; ++j) {
        double d = g(j, j);
        for (std::size_t k = 0; k < j; ++k) d -= l(j, k) * l(j, k);
        if (!(d > 0.0) || !std::isfinite(d)) throw FactorizationError(rho_hint, j, d);
        l(j, j) = std::sqrt(d);
        for (std::size_t i = j + 1; i < n; ++i) {
            double s = g(i, j);
            for (std::size_t k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
            l(i, j) = s / l(j, j);
        }
    }
    return f;
}

std::vector<double> CholeskyFactor::solve(std::span<const double> rhs) const {
    const std::size_t n = l_.rows();
    assert(rhs.size() == n);
    std::vector<double> y(rhs.begin(), rhs.end());
    // forward: L z = rhs
    for (std::size_t i = 0; i < n; ++i) {
        double s = y[i];
        for (std::size_t k = 0; k < i; ++k) s -= l_(i, k) * y[k];
        y[i] = s / l_(i, i);
    }
    // backward: L^T y = z
    for (std::size_t ii = n; ii-- > 0;) {
        double s = y[ii];
        for (std::size_t k = ii + 1; k < n; ++k) s -= l_(k, ii) * y[k];
        y[ii] = s / l_(ii, ii);
    }
    return y;
}

XUpdateCache::XUpdateCache(const DenseMatrix& a, std::span<const double> b, double rho)
    : a_(&a), rho_(rho) {
    if (!(rho > 0.0)) throw std::invalid_argument("x-update cache requires rho > 0");
    if (b.size() != a.rows()) throw std::invalid_argument("b length must equal rows(A)");
    chol_ = CholeskyFactor::factor(scaled_gram(a, rho), rho);
    two_at_b_.resize(a.cols());
    matvec_t(a, b, two_at_b_);
    for (auto& v : two_at_b_) v *= 2.0;
}

std::vector<double> XUpdateCache::apply_inverse(std::span<const double> r) const {
    const DenseMatrix& a = *a_;
    if (r.size() != a.cols()) throw std::invalid_argument("rhs length must equal cols(A)");
    std::vector<double> ar(a.rows());
    matvec(a, r, ar);
    for (auto& v : ar) v *= 2.0;
    const std::vector<double> g_inv_ar = chol_.solve(ar);
    std::vector<double> corr(a.cols());
    matvec_t(a, g_inv_ar, corr);
    std::vector<double> x(a.cols());
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = (r[i] - corr[i]) / rho_;
    return x;
}

std::vector<double> XUpdateCache::solve(std::span<const double> u,
                                        std::span<const double> w) const {
    const std::size_t n = a_->cols();
    if (u.size() != n || w.size() != n) throw std::invalid_argument("u, w length must equal cols(A)");
    std::vector<double> r(n);
    for (std::size_t i = 0; i < n; ++i) r[i] = two_at_b_[i] + rho_ * u[i] - w[i];
    return apply_inverse(r);
}

}  // namespace sprec
