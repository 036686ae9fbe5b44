#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "nambu/ad.hpp"
#include "nambu/field.hpp"
#include "nambu/linalg.hpp"
#include "nambu/system.hpp"

namespace nambu {

/// An identity residual with the magnitude it should be judged against:
/// scale = sum of |constituent terms| + 1.
struct Residual {
    double absolute = 0.0;
    double scale = 1.0;
    double relative() const noexcept { return absolute / scale; }
};

struct BracketResult {
    double value = 0.0;
    std::optional<double> det_b;
    std::optional<double> normalization;  // (-1)^{n+1} / detB
};

// -- canonical Poisson bracket ----------------------------------------------

double poisson_bracket(std::span<const double> df, std::span<const double> dg);
double poisson_bracket(const ScalarField& f, const ScalarField& g, std::span<const double> x);
/// Bracket of two jets; the result is one order lower than the lower input.
Jet poisson_bracket(const Jet& f, const Jet& g);

/// xi_f = (df/dp, -df/dq).
std::vector<double> hamiltonian_vector_field(std::span<const double> df);
std::vector<double> hamiltonian_vector_field(const ScalarField& f, std::span<const double> x);

// -- canonical Nambu bracket (Jacobian determinant) ---------------------------

RealMatrix jacobian_matrix(std::span<const ScalarField> fs, std::span<const double> x);
double nambu_bracket(std::span<const ScalarField> fs, std::span<const double> x);
/// Explicit Levi-Civita sum; N <= 6.
double nambu_bracket_oracle(std::span<const ScalarField> fs, std::span<const double> x);
/// Jacobian determinant of jets (each of order >= 1); one order is lost.
Jet nambu_bracket(std::span<const Jet> fs);

// -- B-matrix and the singular locus ---------------------------------------

/// Jets of the 2n-1 constants H_0..H_{2n-2} at x.
std::vector<Jet> constant_jets(const SystemSpec& sys, std::span<const double> x, int order);

RealMatrix b_matrix(const SystemSpec& sys, const PhasePoint& x);
double det_b(const SystemSpec& sys, const PhasePoint& x);
/// detB as a jet from order-2 constant jets (result has order 1).
Jet det_b(std::span<const Jet> constants, std::size_t n);

/// eps_B = 1e-10 * (1 + max |B_ij|).
double singular_threshold(const RealMatrix& b);
/// detB at x, or SingularLocus when |detB| <= eps_B.
double regular_det_b(const SystemSpec& sys, const PhasePoint& x);

/// Sign (-1)^{n+k+1} of the k-th normalized bracket.
double bracket_sign(std::size_t n, std::size_t k);

// -- normalized brackets -----------------------------------------------------

/// det J(f, H, H_1.., A_1..) - (-1)^{n+1} detB {f, H}.
Residual independence_identity_residual(const ScalarField& f, const SystemSpec& sys, const PhasePoint& x);

BracketResult normalized_evolution_bracket(const ScalarField& f, const SystemSpec& sys, const PhasePoint& x);

double bracket_k(const ScalarField& f, const ScalarField& g, const SystemSpec& sys, std::size_t k,
                 const PhasePoint& x);
/// Jet form; constants must be order-2 jets of H_0..H_{2n-2}.
Jet bracket_k(const Jet& f, const Jet& g, std::span<const Jet> constants, std::size_t n, std::size_t k);

// -- axiom residuals ---------------------------------------------------------

/// {f_1..f_{N-1}, {g_1..g_N}} - sum_i {g_1.., {f_1..f_{N-1}, g_i}, ..g_N}.
Residual fundamental_identity_residual(std::span<const ScalarField> fs, std::span<const ScalarField> gs,
                                       std::span<const double> x);

/// {f1 f2, f3..} - f1 {f2, f3..} - f2 {f1, f3..}; fs holds N+1 fields.
Residual leibniz_residual(std::span<const ScalarField> fs, std::span<const double> x);

/// Cyclic sum {f,{g,h}} + {g,{h,f}} + {h,{f,g}} under bracket k.
Residual jacobi_residual_bracket(const ScalarField& f, const ScalarField& g, const ScalarField& h,
                                 const SystemSpec& sys, std::size_t k, const PhasePoint& x);

}  // namespace nambu
