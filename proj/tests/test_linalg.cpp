#include <doctest.h>

#include <random>

#include "nambu/linalg.hpp"

using namespace nambu;

namespace {
RealMatrix random_matrix(std::size_t n, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-1, 1);
    RealMatrix m(n, n);
    for (auto& v : m.data()) v = u(rng);
    return m;
}
}  // namespace

TEST_SUITE("linalg") {
    TEST_CASE("LU determinant matches the permutation sum") {
        std::mt19937_64 rng(3);
        for (std::size_t n = 1; n <= 6; ++n)
            for (int t = 0; t < 20; ++t) {
                const auto m = random_matrix(n, rng);
                CHECK(determinant(m) == doctest::Approx(determinant_by_permutations(m)).epsilon(1e-12));
            }
        CHECK(determinant(RealMatrix(0, 0)) == 1.0);
    }

    TEST_CASE("permutation signs") {
        CHECK(permutation_sign({0, 1, 2}) == 1);
        CHECK(permutation_sign({1, 0, 2}) == -1);
        CHECK(permutation_sign({1, 2, 0}) == 1);
        CHECK(permutation_sign({3, 2, 1, 0}) == 1);
    }

    TEST_CASE("jet determinant differentiates the entries") {
        // det [[x, 1], [1, x]] = x^2 - 1
        const Jet x = Jet::variable(3.0, 0, 1, 2);
        Matrix<Jet> m(2, 2);
        m(0, 0) = x;
        m(0, 1) = Jet(1.0);
        m(1, 0) = Jet(1.0);
        m(1, 1) = x;
        const Jet d = determinant(m);
        CHECK(d.v == doctest::Approx(8.0));
        CHECK(d.g[0] == doctest::Approx(6.0));
        CHECK(d.hess(0, 0, 1) == doctest::Approx(2.0));
    }

    TEST_CASE("jet determinant with a zero leading value") {
        const Jet x = Jet::variable(0.0, 0, 1, 1);
        Matrix<Jet> m(2, 2);
        m(0, 0) = x;
        m(0, 1) = Jet(2.0);
        m(1, 0) = Jet(3.0);
        m(1, 1) = x * x;
        const Jet d = determinant(m);  // x^3 - 6
        CHECK(d.v == doctest::Approx(-6.0));
        CHECK(d.g[0] == doctest::Approx(0.0));
    }

    TEST_CASE("rank and singular values") {
        RealMatrix j(4, 4);
        j(0, 2) = j(1, 3) = 1;
        j(2, 0) = j(3, 1) = -1;
        CHECK(numerical_rank(j, 1e-9) == 4);
        CHECK(determinant(j) == doctest::Approx(1.0));
        CHECK(numerical_rank(RealMatrix(4, 4), 1e-9) == 0);
        RealMatrix r(3, 3);
        r(0, 1) = 2;
        r(1, 0) = -2;
        const auto sv = singular_values(r);
        CHECK(sv[0] == doctest::Approx(2.0));
        CHECK(numerical_rank(r, 1e-9) == 2);
        CHECK(frobenius_norm(r) == doctest::Approx(std::sqrt(8.0)));
    }
}
