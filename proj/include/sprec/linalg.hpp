#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace sprec {

// Dense row-major matrix of doubles. Sized for the desk-scale problems this
// toolkit targets (a few thousand columns); everything stays dense.
class DenseMatrix {
public:
    DenseMatrix() = default;
    DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    static DenseMatrix from_rows(std::initializer_list<std::initializer_list<double>> rows);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool empty() const { return rows_ == 0 || cols_ == 0; }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    std::span<const double> row(std::size_t i) const {
        return {data_.data() + i * cols_, cols_};
    }
    std::span<double> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }

    std::span<const double> data() const { return data_; }
    std::span<double> data() { return data_; }

    bool all_finite() const;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

// --- small vector helpers -------------------------------------------------

double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> v);
double norm_inf(std::span<const double> v);
double norm2_diff(std::span<const double> a, std::span<const double> b);
bool all_finite(std::span<const double> v);

// --- matrix kernels --------------------------------------------------------
//
// The OpenMP versions parallelize over independent output elements only, so
// their results are bitwise identical to the serial reference versions below
// for any thread count. Tests assert that equality; bench/ compares speed.

// y = A x
void matvec(const DenseMatrix& a, std::span<const double> x, std::span<double> y);
// y = A^T x
void matvec_t(const DenseMatrix& a, std::span<const double> x, std::span<double> y);
// rho * I + 2 * A * A^T  (symmetric M x M)
DenseMatrix scaled_gram(const DenseMatrix& a, double rho);

namespace serial {
void matvec(const DenseMatrix& a, std::span<const double> x, std::span<double> y);
void matvec_t(const DenseMatrix& a, std::span<const double> x, std::span<double> y);
DenseMatrix scaled_gram(const DenseMatrix& a, double rho);
}  // namespace serial

// Largest squared singular value of A, by power iteration on the smaller of
// A^T A and A A^T (applied matrix-free). Deterministic all-ones start vector;
// stops when the Rayleigh quotient's relative change drops below 1e-10, with
// a 10000-iteration cap. Returns 0 for the zero matrix; throws
// std::invalid_argument on empty or non-finite input.
double spectral_norm_sq(const DenseMatrix& a);

}  // namespace sprec
