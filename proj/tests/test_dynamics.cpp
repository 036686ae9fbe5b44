#include <doctest.h>

#include <cmath>
#include <numbers>

#include "nambu/brackets.hpp"
#include "nambu/dynamics.hpp"
#include "nambu/error.hpp"
#include "nambu/systems.hpp"
#include "support.hpp"

using namespace nambu;

namespace {
double endpoint_error(const SystemSpec& osc, double dt) {
    const PhasePoint x0(std::vector<double>{1, 0});
    auto r = integrate(osc, std::nullopt, x0, 1.0, dt);
    const auto& x = r.trajectory.states.back();
    return std::hypot(x[0] - std::cos(1.0), x[1] + std::sin(1.0));
}
}  // namespace

TEST_SUITE("dynamics") {
    TEST_CASE("canonical rhs examples") {
        auto osc = testing::harmonic();
        CHECK(canonical_rhs(osc, PhasePoint(std::vector<double>{1, 0})) == std::vector<double>{0, -1});
        auto cm = builtin("cm", {{"m", 1}, {"g", 1}});
        CHECK(canonical_rhs(cm, PhasePoint(std::vector<double>{1, 0, 0, 0}))[2] == doctest::Approx(1.0));
        auto landau = builtin("landau", builtin_defaults("landau"));
        const PhasePoint x(std::vector<double>{0.3, -0.2, 0.5, 0.4});
        const auto r = canonical_rhs(landau, x);
        CHECK(r[0] == doctest::Approx(0.5 - 0.2 / 2));  // v1
        CHECK(r[1] == doctest::Approx(0.4 - 0.3 / 2));  // v2
    }

    TEST_CASE("multi-hamiltonian rhs equals the canonical one") {
        for (const auto& name : builtin_names()) {
            auto sys = builtin(name, builtin_defaults(name));
            for (const auto& x : sample_points(sys, 20, 42)) {
                const auto c = canonical_rhs(sys, x);
                double nc = 0;
                for (double v : c) nc += v * v;
                for (std::size_t k = 0; k < 3; ++k) {
                    try {
                        const auto m = multihamiltonian_rhs(sys, k, x);
                        double d = 0;
                        for (std::size_t i = 0; i < 4; ++i) d += (m[i] - c[i]) * (m[i] - c[i]);
                        CHECK(std::sqrt(d) <= 1e-9 * (std::sqrt(nc) + 1));
                    } catch (const SingularLocus&) {
                    }
                }
            }
        }
    }

    TEST_CASE("harmonic oscillator returns after one period") {
        auto osc = testing::harmonic();
        auto r = integrate(osc, std::nullopt, PhasePoint(std::vector<double>{1, 0}), 2 * std::numbers::pi, 1e-3);
        REQUIRE(r.status == IntegrationStatus::completed);
        const auto& x = r.trajectory.states.back();
        CHECK(std::abs(x[0] - 1) <= 1e-8);
        CHECK(std::abs(x[1]) <= 1e-8);
        const auto& t = r.trajectory.times;
        for (std::size_t i = 1; i < t.size(); ++i) REQUIRE(t[i] > t[i - 1]);
    }

    TEST_CASE("RK4 convergence order") {
        auto osc = testing::harmonic();
        const double ratio = endpoint_error(osc, 0.1) / endpoint_error(osc, 0.05);
        MESSAGE("halving ratio ", ratio);
        CHECK(ratio >= 12);
        CHECK(ratio <= 20);
    }

    TEST_CASE("landau cyclotron orbit") {
        auto sys = builtin("landau", builtin_defaults("landau"));
        auto r = integrate(sys, std::nullopt, PhasePoint(std::vector<double>{0, 0, 1, 0}), 2 * std::numbers::pi, 1e-3);
        double lo = 1e9, hi = -1e9;
        for (const auto& x : r.trajectory.states) {
            lo = std::min(lo, x[1]);
            hi = std::max(hi, x[1]);
        }
        CHECK(std::abs((hi - lo) - 2.0) <= 1e-6);
    }

    TEST_CASE("different k give the same trajectory") {
        auto cm = builtin("cm", {{"m", 1}, {"g", 1}});
        const PhasePoint x0(std::vector<double>{1.0, -0.5, 0.3, -0.2});
        auto a = integrate(cm, std::nullopt, x0, 5, 1e-3);
        auto b = integrate(cm, 1, x0, 5, 1e-3);
        REQUIRE(a.status == IntegrationStatus::completed);
        REQUIRE(b.status == IntegrationStatus::completed);
        double d = 0;
        for (std::size_t i = 0; i < a.trajectory.states.size(); ++i)
            for (std::size_t j = 0; j < 4; ++j)
                d = std::max(d, std::abs(a.trajectory.states[i][j] - b.trajectory.states[i][j]));
        CHECK(d <= 1e-7);
    }

    TEST_CASE("conservation drift") {
        auto sys = builtin("landau", {{"m", 1}, {"q", 1}, {"c", 1}, {"B", 1}});
        auto r = integrate(sys, std::nullopt, PhasePoint(std::vector<double>{0.2, -0.1, 0.5, 0.3}), 10, 1e-3);
        const auto d = conservation_drift(sys, r.trajectory);
        REQUIRE(d.size() == 3);
        for (double v : d) CHECK(v <= 1e-6);
        Trajectory exact;
        for (int i = 0; i <= 100; ++i) {
            const double t = 0.0628 * i;
            exact.times.push_back(t);
            exact.states.emplace_back(std::vector<double>{std::cos(t), -std::sin(t)});
        }
        CHECK(conservation_drift(testing::harmonic(), exact)[0] <= 1e-15);
    }

    TEST_CASE("domain exit and bad arguments") {
        // two particles pushed together: the exclusion margin stops the run
        auto cm = builtin("cm", {{"m", 1}, {"g", 0.1}});
        auto r = integrate(cm, std::nullopt, PhasePoint(std::vector<double>{1, -1, -2, 2}), 10, 1e-3);
        CHECK(r.status == IntegrationStatus::domain_exit);
        CHECK(r.last_time() < 10);
        CHECK_FALSE(r.trajectory.states.empty());
        auto osc = testing::harmonic();
        CHECK_THROWS_AS(integrate(osc, std::nullopt, PhasePoint(std::vector<double>{1, 0}), 1, 0), ConfigError);
        CHECK_THROWS_AS(integrate(osc, std::nullopt, PhasePoint(std::vector<double>{1, 0}), -1, 0.1), ConfigError);
        CHECK_THROWS_AS(integrate(osc, 3, PhasePoint(std::vector<double>{1, 0}), 1, 0.1), ConfigError);
        CHECK_THROWS_AS(integrate(cm, std::nullopt, PhasePoint(std::vector<double>{1, 0}), 1, 0.1), DimensionMismatch);
    }

    TEST_CASE("singular locus mid-flight") {
        auto sw1 = builtin("sw1", builtin_defaults("sw1"));
        auto r = integrate(sw1, 1, PhasePoint(std::vector<double>{1, 1, 0, 0}), 1, 1e-3);
        CHECK(r.status == IntegrationStatus::singular);
    }
}
