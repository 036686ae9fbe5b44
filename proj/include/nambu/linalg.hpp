#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <stdexcept>
#include <type_traits>
#include <utility>
#include <vector>

#include "nambu/ad.hpp"

namespace nambu {

/// Dense row-major matrix.
template <class T>
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, const T& fill = T(0.0)) : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }

    T& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const T& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    const std::vector<T>& data() const noexcept { return data_; }
    std::vector<T>& data() noexcept { return data_; }

    void swap_rows(std::size_t a, std::size_t b) {
        if (a == b) return;
        for (std::size_t c = 0; c < cols_; ++c) std::swap((*this)(a, c), (*this)(b, c));
    }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<T> data_;
};

using RealMatrix = Matrix<double>;

/// Determinant by LU with partial pivoting. Works for any scalar type with
/// field arithmetic; pivots are chosen on `value_of`, so for jets the pivot
/// sequence (and hence the differentiated path) is the one of the values.
template <class T>
T determinant(Matrix<T> a) {
    if (a.rows() != a.cols()) throw std::invalid_argument("determinant: matrix is not square");
    const std::size_t n = a.rows();
    T det(1.0);
    bool negate = false;
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t pivot = k;
        double best = std::abs(value_of(a(k, k)));
        for (std::size_t r = k + 1; r < n; ++r) {
            const double mag = std::abs(value_of(a(r, k)));
            if (mag > best) {
                best = mag;
                pivot = r;
            }
        }
        if (best == 0.0) {
            if constexpr (std::is_same_v<T, double>) {
                return T(0.0);
            } else {
                // Zero column value, possibly nonzero derivative: expand the
                // trailing block along column k instead of dividing by zero.
                const std::size_t m = n - k;
                T sub(0.0);
                for (std::size_t r = 0; r < m; ++r) {
                    Matrix<T> minor(m - 1, m - 1);
                    for (std::size_t i = 0, mi = 0; i < m; ++i) {
                        if (i == r) continue;
                        for (std::size_t j = 1; j < m; ++j) minor(mi, j - 1) = a(k + i, k + j);
                        ++mi;
                    }
                    T term = a(k + r, k) * determinant(std::move(minor));
                    sub = (r % 2 == 0) ? sub + term : sub - term;
                }
                det *= sub;
                return negate ? T(-det) : det;
            }
        }
        if (pivot != k) {
            a.swap_rows(pivot, k);
            negate = !negate;
        }
        const T& p = a(k, k);
        for (std::size_t r = k + 1; r < n; ++r) {
            const T factor = a(r, k) / p;
            for (std::size_t c = k + 1; c < n; ++c) a(r, c) -= factor * a(k, c);
        }
        det *= p;
    }
    return negate ? T(-det) : det;
}

/// Parity (+1/-1) of a permutation given as an index vector.
int permutation_sign(const std::vector<std::size_t>& perm);

/// Determinant as the explicit Levi-Civita sum over all n! permutations.
/// Test oracle only; throws for n > max_n.
double determinant_by_permutations(const RealMatrix& a, std::size_t max_n = 8);

/// Singular values in descending order (one-sided Jacobi SVD).
std::vector<double> singular_values(const RealMatrix& a);

/// Number of singular values above `relative_tol` times the largest one.
std::size_t numerical_rank(const RealMatrix& a, double relative_tol);

double frobenius_norm(const RealMatrix& a);

}  // namespace nambu
