#pragma once

#include <cstddef>
#include <vector>

#include "nambu/ad.hpp"
#include "nambu/brackets.hpp"
#include "nambu/linalg.hpp"
#include "nambu/system.hpp"

namespace nambu {

/// Components of the k-th Poisson tensor at a point; entries(a, b) = -entries(b, a) exactly.
struct SkewTensor {
    std::size_t n = 0;
    std::size_t k = 0;
    PhasePoint point;
    RealMatrix entries;
};

/// Upper triangle from `m`, mirrored; the diagonal is set to zero.
SkewTensor make_skew(std::size_t n, std::size_t k, const PhasePoint& x, const RealMatrix& m);

/// Lambda_(k) from signed (2n-2)-minors of the retained gradients. SingularLocus near detB = 0.
SkewTensor lambda_k(const SystemSpec& sys, std::size_t k, const PhasePoint& x);

/// Same tensor from the explicit epsilon sum; n <= 3.
SkewTensor lambda_oracle(const SystemSpec& sys, std::size_t k, const PhasePoint& x);

/// Lambda_(k) with first derivatives: entries are order-1 jets.
Matrix<Jet> lambda_k_jet(const SystemSpec& sys, std::size_t k, const PhasePoint& x);
/// Same, from order-2 jets of H_0..H_{2n-2}.
Matrix<Jet> lambda_k_jet(std::span<const Jet> constants, std::size_t n, std::size_t k);

/// d Lambda / d x^gamma for every gamma.
std::vector<RealMatrix> lambda_derivatives(const SystemSpec& sys, std::size_t k, const PhasePoint& x);

/// Landau tensors assembled from the closed-form 4x4 block matrices (k = 0, 1, 2).
/// `sys` must be a landau system (parameters m, q, c, B; optional gauge).
SkewTensor landau_closed_form(const SystemSpec& sys, std::size_t k, const PhasePoint& x);

struct TensorResidual {
    double absolute = 0.0;  // max over index triples
    double relative = 0.0;  // max over triples of |R| / (sum |terms| + 1)
};

/// Lambda^{eta gamma} d_gamma Lambda^{alpha beta} + cyclic, for a jet-valued tensor field.
TensorResidual jacobi_tensor_residual(const Matrix<Jet>& lambda);
TensorResidual jacobi_tensor_residual(const SystemSpec& sys, std::size_t k, const PhasePoint& x);

/// Jacobi residual of a Lambda_(k1) + b Lambda_(k2).
TensorResidual compatibility_residual(const SystemSpec& sys, std::size_t k1, std::size_t k2, double a, double b,
                                      const PhasePoint& x);

struct Degeneracy {
    double det = 0.0;
    std::size_t rank = 0;
};

Degeneracy degeneracy_check(const SkewTensor& t, double tol = 1e-9);

/// max over rows and retained j of |Lambda_(k) grad H_j|, absolute and relative.
TensorResidual orthogonality_residual(const SystemSpec& sys, std::size_t k, const PhasePoint& x);

/// grad f . Lambda . grad h
double contract(const SkewTensor& t, std::span<const double> df, std::span<const double> dh);

}  // namespace nambu
