#pragma once

// Forward-mode jets truncated at second order.
//
// A Jet carries f, ∇f and (at order 2) the upper triangle of the Hessian,
// packed row-major. Storing only one triangle makes every Hessian we hand
// out symmetric bit for bit.

#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace nambu {

/// Index of (i, j), i <= j, in a packed upper triangle of a dim x dim matrix.
constexpr std::size_t packed_index(std::size_t i, std::size_t j, std::size_t dim) noexcept {
    return i * dim - i * (i - 1) / 2 + (j - i);
}

struct Jet {
    double v = 0.0;
    int order = 0;              // 0: constant, 1: + gradient, 2: + hessian
    std::vector<double> g;      // size dim when order >= 1
    std::vector<double> h;      // size dim(dim+1)/2 when order == 2

    Jet() = default;
    Jet(double value) : v(value) {}  // NOLINT: constants convert implicitly

    static Jet variable(double value, std::size_t index, std::size_t dim, int order);

    std::size_t dim() const noexcept { return g.size(); }
    double hess(std::size_t i, std::size_t j, std::size_t dim) const {
        return order < 2 ? 0.0 : (i <= j ? h[packed_index(i, j, dim)] : h[packed_index(j, i, dim)]);
    }
};

double value_of(const Jet& a) noexcept;
inline double value_of(double a) noexcept { return a; }

Jet operator-(const Jet& a);
Jet operator+(const Jet& a, const Jet& b);
Jet operator-(const Jet& a, const Jet& b);
Jet operator*(const Jet& a, const Jet& b);
Jet operator/(const Jet& a, const Jet& b);
Jet& operator+=(Jet& a, const Jet& b);
Jet& operator-=(Jet& a, const Jet& b);
Jet& operator*=(Jet& a, const Jet& b);

/// Composition f(u) from f(u.v), f'(u.v), f''(u.v).
Jet chain(const Jet& u, double f0, double f1, double f2);

/// Drops one order: the gradient entry `index` of `a` as a jet whose own
/// gradient is the matching Hessian row.
Jet partial(const Jet& a, std::size_t index);

/// Value, gradient and optional Hessian of a scalar field at a point.
struct ADScalar {
    double value = 0.0;
    std::vector<double> gradient;
    /// Row-major dim x dim; symmetric exactly when present.
    std::optional<std::vector<double>> hessian;

    double hessian_at(std::size_t i, std::size_t j) const { return (*hessian)[i * gradient.size() + j]; }
};

/// Expands a jet into an ADScalar; derivative parts the jet lacks are zero.
ADScalar to_ad_scalar(const Jet& jet, std::size_t dim, int order);

}  // namespace nambu
