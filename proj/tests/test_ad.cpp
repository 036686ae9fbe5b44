#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "nambu/ad.hpp"
#include "nambu/field.hpp"
#include "support.hpp"

using namespace nambu;

namespace {

std::vector<double> fd_gradient(const ScalarField& f, std::vector<double> x, double h = 1e-5) {
    std::vector<double> g(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double x0 = x[i];
        x[i] = x0 + h;
        const double fp = f.eval(x);
        x[i] = x0 - h;
        const double fm = f.eval(x);
        x[i] = x0;
        g[i] = (fp - fm) / (2 * h);
    }
    return g;
}

double rel_err(const std::vector<double>& a, const std::vector<double>& b) {
    double num = 0, den = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        num = std::max(num, std::abs(a[i] - b[i]));
        den = std::max(den, std::max(std::abs(a[i]), std::abs(b[i])));
    }
    return num / (den + 1.0);
}

const ScalarField& cm_hamiltonian() {
    static const ScalarField h = ScalarField::compile("(p1^2 + p2^2)/(2*m) + g^2/(2*(q1 - q2)^2)",
                                                      {"q1", "q2", "p1", "p2"}, {{"m", 1.0}, {"g", 1.0}});
    return h;
}

}  // namespace

TEST_SUITE("ad") {
    TEST_CASE("gradient examples") {
        auto f = ScalarField::compile("q1^2", {"q1", "p1"}, {});
        auto r = f.eval_grad(std::vector<double>{3, 5});
        CHECK(r.value == 9.0);
        CHECK(r.gradient == std::vector<double>{6, 0});
        auto c = ScalarField::compile("a*b + 3", {"q1", "p1"}, {{"a", 2}, {"b", 4}});
        CHECK(c.eval_grad(std::vector<double>{1, 1}).gradient == std::vector<double>{0, 0});
        CHECK(cm_hamiltonian().eval_grad(std::vector<double>{1, 0, 0, 0}).gradient[0] == doctest::Approx(-1.0));
    }

    TEST_CASE("hessian examples") {
        auto f = ScalarField::compile("q1*p1", {"q1", "p1"}, {});
        auto r = f.eval_hess(std::vector<double>{0.3, -0.2});
        CHECK(r.hessian_at(0, 1) == 1.0);
        CHECK(r.hessian_at(1, 0) == 1.0);
        CHECK(r.hessian_at(0, 0) == 0.0);
        CHECK(r.hessian_at(1, 1) == 0.0);
        auto s = ScalarField::compile("q1^2 + p1^2", {"q1", "p1"}, {}).eval_hess(std::vector<double>{1, 2});
        CHECK(s.hessian_at(0, 0) == 2.0);
        CHECK(s.hessian_at(1, 1) == 2.0);
        CHECK(s.hessian_at(0, 1) == 0.0);
        CHECK(cm_hamiltonian().eval_hess(std::vector<double>{1, 0, 0, 0}).hessian_at(0, 0) == doctest::Approx(3.0));
    }

    TEST_CASE("AD gradient vs central differences, 1000 pairs") {
        testing::ExprGen gen(2024);
        double worst = 0;
        for (int i = 0; i < 1000; ++i) {
            auto f = ScalarField::compile(gen(3), testing::coords4(), {{"a", 0.8}});
            const auto x = gen.point();
            const double e = rel_err(f.eval_grad(x).gradient, fd_gradient(f, x));
            worst = std::max(worst, e);
        }
        MESSAGE("worst relative gradient error ", worst);
        CHECK(worst <= 1e-6);
    }

    TEST_CASE("AD hessian vs differenced gradients") {
        testing::ExprGen gen(99);
        for (int i = 0; i < 200; ++i) {
            auto f = ScalarField::compile(gen(3), testing::coords4(), {{"a", 0.8}});
            auto x = gen.point();
            const auto r = f.eval_hess(x);
            const double h = 1e-5;
            for (std::size_t j = 0; j < 4; ++j) {
                auto xp = x, xm = x;
                xp[j] += h;
                xm[j] -= h;
                const auto gp = f.eval_grad(xp).gradient, gm = f.eval_grad(xm).gradient;
                std::vector<double> col(4), ad(4);
                for (std::size_t k = 0; k < 4; ++k) {
                    col[k] = (gp[k] - gm[k]) / (2 * h);
                    ad[k] = r.hessian_at(k, j);
                }
                CHECK(rel_err(ad, col) <= 1e-5);
            }
        }
    }

    TEST_CASE("hessian is exactly symmetric") {
        testing::ExprGen gen(5);
        for (int i = 0; i < 300; ++i) {
            auto f = ScalarField::compile(gen(4), testing::coords4(), {{"a", -0.4}});
            const auto r = f.eval_hess(gen.point());
            for (std::size_t a = 0; a < 4; ++a)
                for (std::size_t b = 0; b < 4; ++b) REQUIRE(r.hessian_at(a, b) == r.hessian_at(b, a));
        }
    }

    TEST_CASE("partial of a jet equals the gradient entry and carries its derivatives") {
        auto f = ScalarField::compile("q1^2*p1 + sin(q2)", testing::coords4(), {});
        const std::vector<double> x{0.5, 0.2, -1.0, 0.3};
        const Jet j = f.jet(x, 2);
        const Jet d = partial(j, 0);  // 2 q1 p1
        CHECK(d.v == doctest::Approx(2 * 0.5 * -1.0));
        CHECK(d.g[0] == doctest::Approx(2 * -1.0));
        CHECK(d.g[2] == doctest::Approx(2 * 0.5));
    }

    TEST_CASE("jet arithmetic follows the quotient rule") {
        const Jet x = Jet::variable(2.0, 0, 1, 2);
        const Jet y = Jet(1.0) / x;
        CHECK(y.v == 0.5);
        CHECK(y.g[0] == doctest::Approx(-0.25));
        CHECK(y.hess(0, 0, 1) == doctest::Approx(0.25));
    }
}
