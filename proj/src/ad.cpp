#include "nambu/ad.hpp"

#include <algorithm>
#include <stdexcept>

namespace nambu {

Jet Jet::variable(double value, std::size_t index, std::size_t dim, int order) {
    Jet j(value);
    j.order = order;
    if (order >= 1) {
        j.g.assign(dim, 0.0);
        j.g[index] = 1.0;
    }
    if (order >= 2) j.h.assign(dim * (dim + 1) / 2, 0.0);
    return j;
}

double value_of(const Jet& a) noexcept { return a.v; }

namespace {

std::size_t common_dim(const Jet& a, const Jet& b) {
    if (a.order >= 1 && b.order >= 1 && a.g.size() != b.g.size())
        throw std::invalid_argument("Jet: dimension mismatch");
    return a.order >= 1 ? a.g.size() : b.g.size();
}

// Shapes `r` for the given order and dimension, zero-filled.
void shape(Jet& r, int order, std::size_t dim) {
    r.order = order;
    if (order >= 1) r.g.assign(dim, 0.0);
    if (order >= 2) r.h.assign(dim * (dim + 1) / 2, 0.0);
}

// r += s * a (derivative parts only).
void axpy(Jet& r, double s, const Jet& a) {
    if (a.order >= 1 && r.order >= 1)
        for (std::size_t i = 0; i < a.g.size(); ++i) r.g[i] += s * a.g[i];
    if (a.order >= 2 && r.order >= 2)
        for (std::size_t i = 0; i < a.h.size(); ++i) r.h[i] += s * a.h[i];
}

}  // namespace

Jet operator-(const Jet& a) {
    Jet r = a;
    r.v = -r.v;
    for (double& x : r.g) x = -x;
    for (double& x : r.h) x = -x;
    return r;
}

Jet operator+(const Jet& a, const Jet& b) {
    Jet r(a.v + b.v);
    shape(r, std::max(a.order, b.order), common_dim(a, b));
    axpy(r, 1.0, a);
    axpy(r, 1.0, b);
    return r;
}

Jet operator-(const Jet& a, const Jet& b) {
    Jet r(a.v - b.v);
    shape(r, std::max(a.order, b.order), common_dim(a, b));
    axpy(r, 1.0, a);
    axpy(r, -1.0, b);
    return r;
}

Jet operator*(const Jet& a, const Jet& b) {
    const std::size_t dim = common_dim(a, b);
    Jet r(a.v * b.v);
    shape(r, std::max(a.order, b.order), dim);
    axpy(r, b.v, a);
    axpy(r, a.v, b);
    if (r.order >= 2 && a.order >= 1 && b.order >= 1) {
        for (std::size_t i = 0; i < dim; ++i)
            for (std::size_t j = i; j < dim; ++j)
                r.h[packed_index(i, j, dim)] += a.g[i] * b.g[j] + b.g[i] * a.g[j];
    }
    return r;
}

Jet chain(const Jet& u, double f0, double f1, double f2) {
    const std::size_t dim = u.g.size();
    Jet r(f0);
    shape(r, u.order, dim);
    axpy(r, f1, u);
    if (r.order >= 2) {
        for (std::size_t i = 0; i < dim; ++i)
            for (std::size_t j = i; j < dim; ++j) r.h[packed_index(i, j, dim)] += f2 * u.g[i] * u.g[j];
    }
    return r;
}

Jet operator/(const Jet& a, const Jet& b) {
    if (b.order == 0) {
        Jet r = a;
        const double s = 1.0 / b.v;
        r.v *= s;
        for (double& x : r.g) x *= s;
        for (double& x : r.h) x *= s;
        return r;
    }
    const double inv = 1.0 / b.v;
    return a * chain(b, inv, -inv * inv, 2.0 * inv * inv * inv);
}

Jet& operator+=(Jet& a, const Jet& b) { return a = a + b; }
Jet& operator-=(Jet& a, const Jet& b) { return a = a - b; }
Jet& operator*=(Jet& a, const Jet& b) { return a = a * b; }

Jet partial(const Jet& a, std::size_t index) {
    if (a.order == 0) return Jet(0.0);
    const std::size_t dim = a.g.size();
    Jet r(a.g[index]);
    if (a.order >= 2) {
        r.order = 1;
        r.g.resize(dim);
        for (std::size_t j = 0; j < dim; ++j) r.g[j] = a.hess(index, j, dim);
    }
    return r;
}

ADScalar to_ad_scalar(const Jet& jet, std::size_t dim, int order) {
    ADScalar out;
    out.value = jet.v;
    if (order >= 1) out.gradient = jet.order >= 1 ? jet.g : std::vector<double>(dim, 0.0);
    if (order >= 2) {
        std::vector<double> full(dim * dim, 0.0);
        if (jet.order >= 2) {
            for (std::size_t i = 0; i < dim; ++i)
                for (std::size_t j = i; j < dim; ++j)
                    full[i * dim + j] = full[j * dim + i] = jet.h[packed_index(i, j, dim)];
        }
        out.hessian = std::move(full);
    }
    return out;
}

}  // namespace nambu
