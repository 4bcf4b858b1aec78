#include "sprec/linalg.hpp"

#include <cassert>
#include <cmath>
#include <cstdint>
#include <stdexcept>

#include "sprec/rng.hpp"

namespace sprec {

namespace {
// Below this many multiply-adds the OpenMP fork/join overhead dominates.
constexpr std::size_t kParallelCutoff = 16384;
}  // namespace

DenseMatrix DenseMatrix::from_rows(std::initializer_list<std::initializer_list<double>> rows) {
    DenseMatrix m(rows.size(), rows.size() ? rows.begin()->size() : 0);
    std::size_t i = 0;
    for (const auto& r : rows) {
        if (r.size() != m.cols()) throw std::invalid_argument("ragged row list");
        std::size_t j = 0;
        for (double v : r) m(i, j++) = v;
        ++i;
    }
    return m;
}

bool DenseMatrix::all_finite() const { return sprec::all_finite(data_); }

double dot(std::span<const double> a, std::span<const double> b) {
    assert(a.size() == b.size());
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double norm2(std::span<const double> v) { return std::sqrt(dot(v, v)); }

double norm_inf(std::span<const double> v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

double norm2_diff(std::span<const double> a, std::span<const double> b) {
    assert(a.size() == b.size());
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return std::sqrt(s);
}

bool all_finite(std::span<const double> v) {
    for (double x : v) {
        if (!std::isfinite(x)) return false;
    }
    return true;
}

namespace serial {

void matvec(const DenseMatrix& a, std::span<const double> x, std::span<double> y) {
    assert(x.size() == a.cols() && y.size() == a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i) y[i] = dot(a.row(i), x);
}

void matvec_t(const DenseMatrix& a, std::span<const double> x, std::span<double> y) {
    assert(x.size() == a.rows() && y.size() == a.cols());
    const std::size_t m = a.rows();
    const std::size_t n = a.cols();
    for (std::size_t j = 0; j < n; ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < m; ++i) s += a(i, j) * x[i];
        y[j] = s;
    }
}

DenseMatrix scaled_gram(const DenseMatrix& a, double rho) {
    const std::size_t m = a.rows();
    DenseMatrix g(m, m);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = i; j < m; ++j) {
            const double v = 2.0 * dot(a.row(i), a.row(j));
            g(i, j) = v;
            g(j, i) = v;
        }
        g(i, i) += rho;
    }
    return g;
}

}  // namespace serial

void matvec(const DenseMatrix& a, std::span<const double> x, std::span<double> y) {
    assert(x.size() == a.cols() && y.size() == a.rows());
    const std::int64_t m = static_cast<std::int64_t>(a.rows());
#pragma omp parallel for if (a.rows() * a.cols() > kParallelCutoff) schedule(static)
    for (std::int64_t i = 0; i < m; ++i) {
        y[static_cast<std::size_t>(i)] = dot(a.row(static_cast<std::size_t>(i)), x);
    }
}

void matvec_t(const DenseMatrix& a, std::span<const double> x, std::span<double> y) {
    assert(x.size() == a.rows() && y.size() == a.cols());
    const std::size_t m = a.rows();
    const std::int64_t n = static_cast<std::int64_t>(a.cols());
#pragma omp parallel for if (a.rows() * a.cols() > kParallelCutoff) schedule(static)
    for (std::int64_t j = 0; j < n; ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < m; ++i) s += a(i, static_cast<std::size_t>(j)) * x[i];
        y[static_cast<std::size_t>(j)] = s;
    }
}

DenseMatrix scaled_gram(const DenseMatrix& a, double rho) {
    const std::size_t m = a.rows();
    DenseMatrix g(m, m);
#pragma omp parallel for if (m * m * a.cols() > kParallelCutoff) schedule(dynamic)
    for (std::int64_t ii = 0; ii < static_cast<std::int64_t>(m); ++ii) {
        const std::size_t i = static_cast<std::size_t>(ii);
        for (std::size_t j = i; j < m; ++j) g(i, j) = 2.0 * dot(a.row(i), a.row(j));
        g(i, i) += rho;
    }
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < i; ++j) g(i, j) = g(j, i);
    }
    return g;
}

double spectral_norm_sq(const DenseMatrix& a) {
    if (a.empty()) throw std::invalid_argument("spectral_norm_sq: empty matrix");
    if (!a.all_finite()) throw std::invalid_argument("spectral_norm_sq: non-finite entries");

    bool zero = true;
    for (double v : a.data()) {
        if (v != 0.0) {
            zero = false;
            break;
        }
    }
    if (zero) return 0.0;

    // Iterate on the smaller Gram operator: v -> A (A^T v) when M <= N,
    // v -> A^T (A v) otherwise. Rayleigh quotient of either equals
    // sigma_max(A)^2 at the top eigenvector.
    const bool use_rows = a.rows() <= a.cols();
    const std::size_t dim = use_rows ? a.rows() : a.cols();
    const std::size_t other = use_rows ? a.cols() : a.rows();

    std::vector<double> v(dim, 1.0 / std::sqrt(static_cast<double>(dim)));
    std::vector<double> mid(other), next(dim);

    auto apply = [&](const std::vector<double>& in, std::vector<double>& out) {
        if (use_rows) {
            matvec_t(a, in, mid);
            matvec(a, mid, out);
        } else {
            matvec(a, in, mid);
            matvec_t(a, mid, out);
        }
    };

    double rayleigh = 0.0;
    int restarts = 0;
    for (int iter = 0; iter < 10000; ++iter) {
        apply(v, next);
        const double rq = dot(v, next);  // v is unit length
        const double nn = norm2(next);
        if (nn == 0.0) {
            // start vector happened to lie in the null space; restart from a
            // deterministic pseudo-random direction
            if (++restarts > 4) throw std::runtime_error("spectral_norm_sq: degenerate iteration");
            Rng rng(0x5EC7A1u + static_cast<unsigned>(restarts));
            for (auto& vi : v) vi = rng.uniform01() - 0.5;
            const double nv = norm2(v);
            for (auto& vi : v) vi /= nv;
            rayleigh = 0.0;
            continue;
        }
        for (std::size_t i = 0; i < dim; ++i) v[i] = next[i] / nn;
        if (iter > 0 && std::abs(rq - rayleigh) <= 1e-10 * std::max(1.0, std::abs(rq))) {
            return rq;
        }
        rayleigh = rq;
    }
    return rayleigh;
}

}  // namespace sprec
