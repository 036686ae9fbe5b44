#include "nambu/brackets.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <string>

#include "nambu/error.hpp"

namespace nambu {

namespace {

void require_phase_dim(std::size_t dim) {
    if (dim == 0 || dim % 2 != 0)
        throw DimensionMismatch("phase space must have even positive dimension, got " + std::to_string(dim));
}

void require_same_frame(const ScalarField& f, const ScalarField& g) {
    if (f.dimension() != g.dimension())
        throw DimensionMismatch("fields live on spaces of dimension " + std::to_string(f.dimension()) + " and " +
                                std::to_string(g.dimension()));
}

std::vector<Jet> field_jets(std::span<const ScalarField> fs, std::span<const double> x, int order) {
    std::vector<Jet> out;
    out.reserve(fs.size());
    for (const auto& f : fs) out.push_back(f.jet(x, order));
    return out;
}

// Row-swap the jets into a matrix of first partials and take the determinant.
Jet jacobian_det(std::span<const Jet> fs) {
    const std::size_t n = fs.size();
    Matrix<Jet> m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) m(i, j) = partial(fs[i], j);
    return determinant(std::move(m));
}

std::vector<Jet> retained(std::span<const Jet> constants, std::size_t k) {
    std::vector<Jet> out;
    for (std::size_t j = 0; j < constants.size(); ++j)
        if (j != k) out.push_back(constants[j]);
    return out;
}

Matrix<Jet> b_jets(std::span<const Jet> c, std::size_t n) {
    Matrix<Jet> b(n - 1, n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i)
        for (std::size_t j = 0; j + 1 < n; ++j) b(i, j) = poisson_bracket(c[1 + i], c[n + j]);
    return b;
}

void check_regular(double det, const RealMatrix& b) {
    const double eps = singular_threshold(b);
    if (!(std::abs(det) > eps)) {
        char buf[96];
        std::snprintf(buf, sizeof buf, "singular locus: |detB| = %.3e <= %.3e", std::abs(det), eps);
        throw SingularLocus(buf, det, eps);
    }
}

}  // namespace

double poisson_bracket(std::span<const double> df, std::span<const double> dg) {
    if (df.size() != dg.size()) throw DimensionMismatch("gradient lengths differ");
    require_phase_dim(df.size());
    const std::size_t n = df.size() / 2;
    double s = 0.0;
    for (std::size_t j = 0; j < n; ++j) s += df[j] * dg[n + j] - df[n + j] * dg[j];
    return s;
}

double poisson_bracket(const ScalarField& f, const ScalarField& g, std::span<const double> x) {
    require_same_frame(f, g);
    return poisson_bracket(f.eval_grad(x).gradient, g.eval_grad(x).gradient);
}

Jet poisson_bracket(const Jet& f, const Jet& g) {
    if (f.order == 0 || g.order == 0) return Jet(0.0);
    if (f.dim() != g.dim()) throw DimensionMismatch("jet dimensions differ");
    require_phase_dim(f.dim());
    const std::size_t n = f.dim() / 2;
    Jet s(0.0);
    for (std::size_t j = 0; j < n; ++j) s += partial(f, j) * partial(g, n + j) - partial(f, n + j) * partial(g, j);
    return s;
}

std::vector<double> hamiltonian_vector_field(std::span<const double> df) {
    require_phase_dim(df.size());
    const std::size_t n = df.size() / 2;
    std::vector<double> xi(2 * n);
    for (std::size_t j = 0; j < n; ++j) {
        xi[j] = df[n + j];
        xi[n + j] = -df[j];
    }
    return xi;
}

std::vector<double> hamiltonian_vector_field(const ScalarField& f, std::span<const double> x) {
    return hamiltonian_vector_field(f.eval_grad(x).gradient);
}

RealMatrix jacobian_matrix(std::span<const ScalarField> fs, std::span<const double> x) {
    const std::size_t n = fs.size();
    if (x.size() != n)
        throw DimensionMismatch("Nambu bracket of " + std::to_string(n) + " fields needs a point of length " +
                                std::to_string(n) + ", got " + std::to_string(x.size()));
    RealMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        if (fs[i].dimension() != n) throw DimensionMismatch("field dimension differs from the bracket order");
        const auto g = fs[i].eval_grad(x).gradient;
        for (std::size_t j = 0; j < n; ++j) m(i, j) = g[j];
    }
    return m;
}

double nambu_bracket(std::span<const ScalarField> fs, std::span<const double> x) {
    return determinant(jacobian_matrix(fs, x));
}

double nambu_bracket_oracle(std::span<const ScalarField> fs, std::span<const double> x) {
    if (fs.size() > 6) throw std::invalid_argument("nambu_bracket_oracle: N > 6");
    return determinant_by_permutations(jacobian_matrix(fs, x), 6);
}

Jet nambu_bracket(std::span<const Jet> fs) {
    for (const auto& f : fs)
        if (f.order >= 1 && f.dim() != fs.size()) throw DimensionMismatch("jet dimension differs from bracket order");
    return jacobian_det(fs);
}

std::vector<Jet> constant_jets(const SystemSpec& sys, std::span<const double> x, int order) {
    return field_jets(sys.constants(), x, order);
}

RealMatrix b_matrix(const SystemSpec& sys, const PhasePoint& x) {
    const std::size_t n = sys.dof();
    if (x.size() != sys.dimension()) throw DimensionMismatch("point length differs from system dimension");
    std::vector<std::vector<double>> grads;
    for (const auto& c : sys.constants()) grads.push_back(c.eval_grad(x).gradient);
    RealMatrix b(n - 1, n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i)
        for (std::size_t j = 0; j + 1 < n; ++j) b(i, j) = poisson_bracket(grads[1 + i], grads[n + j]);
    return b;
}

double det_b(const SystemSpec& sys, const PhasePoint& x) { return determinant(b_matrix(sys, x)); }

Jet det_b(std::span<const Jet> constants, std::size_t n) { return determinant(b_jets(constants, n)); }

double singular_threshold(const RealMatrix& b) {
    double mx = 0.0;
    for (double v : b.data()) mx = std::max(mx, std::abs(v));
    return 1e-10 * (1.0 + mx);
}

double regular_det_b(const SystemSpec& sys, const PhasePoint& x) {
    const RealMatrix b = b_matrix(sys, x);
    const double det = determinant(b);
    check_regular(det, b);
    return det;
}

double bracket_sign(std::size_t n, std::size_t k) { return (n + k + 1) % 2 == 0 ? 1.0 : -1.0; }

Residual independence_identity_residual(const ScalarField& f, const SystemSpec& sys, const PhasePoint& x) {
    std::vector<ScalarField> fs{f};
    fs.insert(fs.end(), sys.constants().begin(), sys.constants().end());
    const double lhs = nambu_bracket(fs, x);
    const double rhs = bracket_sign(sys.dof(), 0) * det_b(sys, x) * poisson_bracket(f, sys.hamiltonian(), x);
    return {std::abs(lhs - rhs), std::abs(lhs) + std::abs(rhs) + 1.0};
}

BracketResult normalized_evolution_bracket(const ScalarField& f, const SystemSpec& sys, const PhasePoint& x) {
    const double det = regular_det_b(sys, x);
    std::vector<ScalarField> fs{f};
    fs.insert(fs.end(), sys.constants().begin(), sys.constants().end());
    const double c = bracket_sign(sys.dof(), 0) / det;
    return {c * nambu_bracket(fs, x), det, c};
}

double bracket_k(const ScalarField& f, const ScalarField& g, const SystemSpec& sys, std::size_t k,
                 const PhasePoint& x) {
    const std::size_t n = sys.dof();
    if (k > 2 * n - 2) throw std::invalid_argument("bracket index k out of range 0.." + std::to_string(2 * n - 2));
    const double det = regular_det_b(sys, x);
    std::vector<ScalarField> fs{f, g};
    for (std::size_t j = 0; j < sys.constants().size(); ++j)
        if (j != k) fs.push_back(sys.constant(j));
    return bracket_sign(n, k) / det * nambu_bracket(fs, x);
}

Jet bracket_k(const Jet& f, const Jet& g, std::span<const Jet> constants, std::size_t n, std::size_t k) {
    std::vector<Jet> rows{f, g};
    for (auto& c : retained(constants, k)) rows.push_back(std::move(c));
    return Jet(bracket_sign(n, k)) * jacobian_det(rows) / det_b(constants, n);
}

Residual fundamental_identity_residual(std::span<const ScalarField> fs, std::span<const ScalarField> gs,
                                       std::span<const double> x) {
    const std::size_t n = gs.size();
    if (fs.size() + 1 != n) throw DimensionMismatch("fundamental identity needs N-1 and N fields");
    const auto fj = field_jets(fs, x, 2);
    const auto gj = field_jets(gs, x, 2);

    auto with = [&](const std::vector<Jet>& head, const Jet& last) {
        std::vector<Jet> rows = head;
        rows.push_back(last);
        return rows;
    };
    const Jet inner = nambu_bracket(gj);
    const double lhs = nambu_bracket(with(fj, inner)).v;
    double sum = 0.0, scale = std::abs(lhs) + 1.0;
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<Jet> rows = gj;
        rows[i] = nambu_bracket(with(fj, gj[i]));
        const double term = nambu_bracket(rows).v;
        sum += term;
        scale += std::abs(term);
    }
    return {std::abs(lhs - sum), scale};
}

Residual leibniz_residual(std::span<const ScalarField> fs, std::span<const double> x) {
    const std::size_t n = x.size();
    if (fs.size() != n + 1) throw DimensionMismatch("Leibniz rule needs N+1 fields");
    auto js = field_jets(fs, x, 1);
    std::vector<Jet> rows(js.begin() + 1, js.end());
    rows[0] = js[0] * js[1];
    const double prod = nambu_bracket(rows).v;
    rows[0] = js[1];
    const double t1 = js[0].v * nambu_bracket(rows).v;
    rows[0] = js[0];
    const double t2 = js[1].v * nambu_bracket(rows).v;
    return {std::abs(prod - t1 - t2), std::abs(prod) + std::abs(t1) + std::abs(t2) + 1.0};
}

Residual jacobi_residual_bracket(const ScalarField& f, const ScalarField& g, const ScalarField& h,
                                 const SystemSpec& sys, std::size_t k, const PhasePoint& x) {
    const std::size_t n = sys.dof();
    if (k > 2 * n - 2) throw std::invalid_argument("bracket index k out of range");
    regular_det_b(sys, x);
    const auto c = constant_jets(sys, x, 2);
    const Jet a = f.jet(x, 2), b = g.jet(x, 2), d = h.jet(x, 2);
    const double t1 = bracket_k(a, bracket_k(b, d, c, n, k), c, n, k).v;
    const double t2 = bracket_k(b, bracket_k(d, a, c, n, k), c, n, k).v;
    const double t3 = bracket_k(d, bracket_k(a, b, c, n, k), c, n, k).v;
    return {std::abs(t1 + t2 + t3), std::abs(t1) + std::abs(t2) + std::abs(t3) + 1.0};
}

}  // namespace nambu
