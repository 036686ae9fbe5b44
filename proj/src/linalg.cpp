#include "nambu/linalg.hpp"

#include <Eigen/SVD>

namespace nambu {

int permutation_sign(const std::vector<std::size_t>& perm) {
    std::vector<bool> seen(perm.size(), false);
    int sign = 1;
    for (std::size_t i = 0; i < perm.size(); ++i) {
        if (seen[i]) continue;
        std::size_t len = 0;
        for (std::size_t j = i; !seen[j]; j = perm[j]) {
            seen[j] = true;
            ++len;
        }
        if (len % 2 == 0) sign = -sign;
    }
    return sign;
}

double determinant_by_permutations(const RealMatrix& a, std::size_t max_n) {
    if (a.rows() != a.cols()) throw std::invalid_argument("determinant_by_permutations: matrix is not square");
    const std::size_t n = a.rows();
    if (n > max_n) throw std::invalid_argument("determinant_by_permutations: n too large for factorial expansion");
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    double sum = 0.0;
    do {
        double term = permutation_sign(perm);
        for (std::size_t i = 0; i < n; ++i) term *= a(i, perm[i]);
        sum += term;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return sum;
}

std::vector<double> singular_values(const RealMatrix& a) {
    Eigen::MatrixXd m(a.rows(), a.cols());
    for (std::size_t r = 0; r < a.rows(); ++r)
        for (std::size_t c = 0; c < a.cols(); ++c) m(r, c) = a(r, c);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
    const auto& s = svd.singularValues();
    return {s.data(), s.data() + s.size()};
}

std::size_t numerical_rank(const RealMatrix& a, double relative_tol) {
    const auto s = singular_values(a);
    if (s.empty() || s.front() == 0.0) return 0;
    return static_cast<std::size_t>(
        std::count_if(s.begin(), s.end(), [&](double v) { return v > relative_tol * s.front(); }));
}

double frobenius_norm(const RealMatrix& a) {
    double sum = 0.0;
    for (double v : a.data()) sum += v * v;
    return std::sqrt(sum);
}

}  // namespace nambu
