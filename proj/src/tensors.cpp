#include "nambu/tensors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <string>

#include "nambu/error.hpp"

namespace nambu {

namespace {

void check_k(const SystemSpec& sys, std::size_t k) {
    if (k > 2 * sys.dof() - 2)
        throw std::invalid_argument("tensor index k out of range 0.." + std::to_string(2 * sys.dof() - 2));
}

// Gradient rows of the constants other than H_k, as jets of one order less.
Matrix<Jet> retained_gradients(std::span<const Jet> c, std::size_t k, std::size_t dim) {
    Matrix<Jet> g(c.size() - 1, dim);
    for (std::size_t j = 0, r = 0; j < c.size(); ++j) {
        if (j == k) continue;
        for (std::size_t col = 0; col < dim; ++col) g(r, col) = partial(c[j], col);
        ++r;
    }
    return g;
}

RealMatrix values(const Matrix<Jet>& m) {
    RealMatrix out(m.rows(), m.cols());
    for (std::size_t r = 0; r < m.rows(); ++r)
        for (std::size_t c = 0; c < m.cols(); ++c) out(r, c) = m(r, c).v;
    return out;
}

template <class T>
Matrix<T> drop_columns(const Matrix<T>& g, std::size_t a, std::size_t b) {
    Matrix<T> out(g.rows(), g.cols() - 2);
    for (std::size_t r = 0; r < g.rows(); ++r)
        for (std::size_t c = 0, oc = 0; c < g.cols(); ++c) {
            if (c == a || c == b) continue;
            out(r, oc++) = g(r, c);
        }
    return out;
}

}  // namespace

SkewTensor make_skew(std::size_t n, std::size_t k, const PhasePoint& x, const RealMatrix& m) {
    SkewTensor t{n, k, x, RealMatrix(m.rows(), m.cols())};
    for (std::size_t a = 0; a < m.rows(); ++a)
        for (std::size_t b = a + 1; b < m.cols(); ++b) {
            t.entries(a, b) = m(a, b);
            t.entries(b, a) = -m(a, b);
        }
    return t;
}

Matrix<Jet> lambda_k_jet(std::span<const Jet> constants, std::size_t n, std::size_t k) {
    const std::size_t dim = 2 * n;
    const Matrix<Jet> g = retained_gradients(constants, k, dim);
    const Jet scale = Jet(bracket_sign(n, k)) / det_b(constants, n);
    Matrix<Jet> out(dim, dim);
    for (std::size_t a = 0; a < dim; ++a)
        for (std::size_t b = a + 1; b < dim; ++b) {
            Jet e = scale * determinant(drop_columns(g, a, b));
            if ((a + b) % 2 == 0) e = -e;  // (-1)^{a+b+1}
            out(b, a) = -e;
            out(a, b) = std::move(e);
        }
    return out;
}

Matrix<Jet> lambda_k_jet(const SystemSpec& sys, std::size_t k, const PhasePoint& x) {
    check_k(sys, k);
    regular_det_b(sys, x);
    return lambda_k_jet(constant_jets(sys, x, 2), sys.dof(), k);
}

SkewTensor lambda_k(const SystemSpec& sys, std::size_t k, const PhasePoint& x) {
    check_k(sys, k);
    const double det = regular_det_b(sys, x);
    const std::size_t n = sys.dof(), dim = 2 * n;
    const auto c = constant_jets(sys, x, 1);
    const RealMatrix g = values(retained_gradients(c, k, dim));
    const double scale = bracket_sign(n, k) / det;
    RealMatrix m(dim, dim);
    for (std::size_t a = 0; a < dim; ++a)
        for (std::size_t b = a + 1; b < dim; ++b) {
            const double e = scale * determinant(drop_columns(g, a, b));
            m(a, b) = (a + b) % 2 == 0 ? -e : e;
        }
    return make_skew(n, k, x, m);
}

SkewTensor lambda_oracle(const SystemSpec& sys, std::size_t k, const PhasePoint& x) {
    check_k(sys, k);
    const std::size_t n = sys.dof(), dim = 2 * n;
    if (n > 3) throw std::invalid_argument("lambda_oracle: n > 3");
    const double det = regular_det_b(sys, x);
    const auto c = constant_jets(sys, x, 1);
    const RealMatrix g = values(retained_gradients(c, k, dim));
    const double scale = bracket_sign(n, k) / det;

    // Lambda^{ab} = scale * eps^{a b c_1 .. c_{2n-2}} dH_{r_1}/dx^{c_1} ... ; summed over
    // all permutations whose first two slots are (a, b).
    RealMatrix m(dim, dim);
    std::vector<std::size_t> perm(dim);
    std::iota(perm.begin(), perm.end(), 0);
    do {
        double term = permutation_sign(perm);
        for (std::size_t i = 0; i + 2 < dim; ++i) term *= g(i, perm[i + 2]);
        m(perm[0], perm[1]) += term;
    } while (std::next_permutation(perm.begin(), perm.end()));
    for (double& v : m.data()) v *= scale;
    return make_skew(n, k, x, m);
}

std::vector<RealMatrix> lambda_derivatives(const SystemSpec& sys, std::size_t k, const PhasePoint& x) {
    const Matrix<Jet> l = lambda_k_jet(sys, k, x);
    const std::size_t dim = sys.dimension();
    std::vector<RealMatrix> out(dim, RealMatrix(dim, dim));
    for (std::size_t a = 0; a < dim; ++a)
        for (std::size_t b = 0; b < dim; ++b)
            if (l(a, b).order >= 1)
                for (std::size_t g = 0; g < dim; ++g) out[g](a, b) = l(a, b).g[g];
    return out;
}

SkewTensor landau_closed_form(const SystemSpec& sys, std::size_t k, const PhasePoint& x) {
    if (sys.dof() != 2 || k > 2) throw std::invalid_argument("landau_closed_form: needs n = 2 and k in 0..2");
    const auto& p = sys.parameters();
    auto param = [&](const char* name) {
        auto it = p.find(name);
        if (it == p.end()) throw ConfigError(std::string("landau_closed_form: missing parameter ") + name);
        return it->second;
    };
    const double m = param("m"), q = param("q"), c = param("c"), bf = param("B");

    // Vector potential a = (B/2)(-q2, q1) + grad chi and its first derivatives.
    double chi1 = 0, chi2 = 0, chi11 = 0, chi12 = 0, chi22 = 0;
    if (sys.gauge()) {
        const Jet chi = sys.gauge()->jet(x, 2);
        if (chi.order >= 1) {
            chi1 = chi.g[0];
            chi2 = chi.g[1];
        }
        chi11 = chi.hess(0, 0, 4);
        chi12 = chi.hess(0, 1, 4);
        chi22 = chi.hess(1, 1, 4);
    }
    const double a1 = -bf * x.q(1) / 2 + chi1, a2 = bf * x.q(0) / 2 + chi2;
    const double d1a1 = chi11, d2a1 = -bf / 2 + chi12;
    const double d1a2 = bf / 2 + chi12, d2a2 = chi22;
    const double v1 = (x.p(0) - q / c * a1) / m, v2 = (x.p(1) - q / c * a2) / m;

    // 2x2 blocks, row-major.
    using B2 = std::array<double, 4>;
    const B2 y{0, 1, -1, 0};
    const B2 z{d2a1, d2a2, -d1a1, -d1a2};
    const double l = z[0] * z[3] - z[1] * z[2];
    const double l1 = v1 * d1a1 + v2 * d1a2;
    const double l2 = v1 * d2a1 + v2 * d2a2;

    RealMatrix t(4, 4);
    auto put = [&](std::size_t r0, std::size_t c0, const B2& blk, double s) {
        for (std::size_t i = 0; i < 2; ++i)
            for (std::size_t j = 0; j < 2; ++j) t(r0 + i, c0 + j) += s * blk[2 * i + j];
    };
    auto put_t = [&](std::size_t r0, std::size_t c0, const B2& blk, double s) {
        for (std::size_t i = 0; i < 2; ++i)
            for (std::size_t j = 0; j < 2; ++j) t(r0 + i, c0 + j) += s * blk[2 * j + i];
    };

    // Lambda_(0) = J0 + (1/B) [[ (c/q) Y, Z ], [ -Z^T, (q/c) l Y ]]
    put(0, 2, {1, 0, 0, 1}, 1.0);
    put(2, 0, {1, 0, 0, 1}, -1.0);
    put(0, 0, y, c / q / bf);
    put(0, 2, z, 1.0 / bf);
    put_t(2, 0, z, -1.0 / bf);
    put(2, 2, y, q / c * l / bf);

    if (k > 0) {
        const double w = k == 1 ? -v2 : v1;
        for (double& e : t.data()) e *= w;
        const B2 s = k == 1 ? B2{0, v1, 0, v2} : B2{-v1, 0, -v2, 0};
        put(0, 2, s, 1.0);
        put_t(2, 0, s, -1.0);
        put(2, 2, y, q / c * (k == 1 ? l1 : l2));
    }
    return make_skew(2, k, x, t);
}

TensorResidual jacobi_tensor_residual(const Matrix<Jet>& lam) {
    const std::size_t dim = lam.rows();
    auto d = [&](std::size_t a, std::size_t b, std::size_t g) {
        const Jet& e = lam(a, b);
        return e.order >= 1 ? e.g[g] : 0.0;
    };
    TensorResidual out;
    for (std::size_t eta = 0; eta < dim; ++eta)
        for (std::size_t al = 0; al < dim; ++al)
            for (std::size_t be = 0; be < dim; ++be) {
                double sum = 0.0, mag = 0.0;
                for (std::size_t g = 0; g < dim; ++g) {
                    const double t1 = lam(eta, g).v * d(al, be, g);
                    const double t2 = lam(al, g).v * d(be, eta, g);
                    const double t3 = lam(be, g).v * d(eta, al, g);
                    sum += t1 + t2 + t3;
                    mag += std::abs(t1) + std::abs(t2) + std::abs(t3);
                }
                out.absolute = std::max(out.absolute, std::abs(sum));
                out.relative = std::max(out.relative, std::abs(sum) / (mag + 1.0));
            }
    return out;
}

TensorResidual jacobi_tensor_residual(const SystemSpec& sys, std::size_t k, const PhasePoint& x) {
    return jacobi_tensor_residual(lambda_k_jet(sys, k, x));
}

TensorResidual compatibility_residual(const SystemSpec& sys, std::size_t k1, std::size_t k2, double a, double b,
                                      const PhasePoint& x) {
    check_k(sys, k1);
    check_k(sys, k2);
    regular_det_b(sys, x);
    const auto c = constant_jets(sys, x, 2);
    const auto l1 = lambda_k_jet(c, sys.dof(), k1);
    const auto l2 = lambda_k_jet(c, sys.dof(), k2);
    Matrix<Jet> sum(l1.rows(), l1.cols());
    for (std::size_t r = 0; r < sum.rows(); ++r)
        for (std::size_t col = 0; col < sum.cols(); ++col) sum(r, col) = Jet(a) * l1(r, col) + Jet(b) * l2(r, col);
    return jacobi_tensor_residual(sum);
}

Degeneracy degeneracy_check(const SkewTensor& t, double tol) {
    return {determinant(t.entries), numerical_rank(t.entries, tol)};
}

TensorResidual orthogonality_residual(const SystemSpec& sys, std::size_t k, const PhasePoint& x) {
    const SkewTensor t = lambda_k(sys, k, x);
    const std::size_t dim = sys.dimension();
    TensorResidual out;
    for (std::size_t j = 0; j < sys.constants().size(); ++j) {
        if (j == k) continue;
        const auto grad = sys.constant(j).eval_grad(x).gradient;
        for (std::size_t a = 0; a < dim; ++a) {
            double s = 0.0, mag = 0.0;
            for (std::size_t b = 0; b < dim; ++b) {
                s += t.entries(a, b) * grad[b];
                mag += std::abs(t.entries(a, b) * grad[b]);
            }
            out.absolute = std::max(out.absolute, std::abs(s));
            out.relative = std::max(out.relative, std::abs(s) / (mag + 1.0));
        }
    }
    return out;
}

double contract(const SkewTensor& t, std::span<const double> df, std::span<const double> dh) {
    const std::size_t dim = t.entries.rows();
    if (df.size() != dim || dh.size() != dim) throw DimensionMismatch("gradient length differs from tensor size");
    double s = 0.0;
    for (std::size_t a = 0; a < dim; ++a)
        for (std::size_t b = 0; b < dim; ++b) s += df[a] * t.entries(a, b) * dh[b];
    return s;
}

}  // namespace nambu
