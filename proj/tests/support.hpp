#pragma once

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "nambu/system.hpp"

namespace testing {

// Random smooth expressions over q1, q2, p1, p2 (and parameter a). Divisors
// and log/sqrt arguments are kept positive by construction.
class ExprGen {
public:
    explicit ExprGen(std::uint64_t seed) : rng_(seed) {}

    std::string operator()(int depth = 3) {
        if (depth == 0 || coin(0.25)) return leaf();
        switch (pick(9)) {
            case 0: return "(" + (*this)(depth - 1) + " + " + (*this)(depth - 1) + ")";
            case 1: return "(" + (*this)(depth - 1) + " - " + (*this)(depth - 1) + ")";
            case 2: return (*this)(depth - 1) + "*" + (*this)(depth - 1);
            case 3: return "(" + (*this)(depth - 1) + ")/(1.5 + (" + (*this)(depth - 1) + ")^2)";
            case 4: return "(" + (*this)(depth - 1) + ")^" + std::to_string(2 + pick(2));
            case 5: return "-" + (*this)(depth - 1);
            case 6: return "sqrt(1 + (" + (*this)(depth - 1) + ")^2)";
            case 7: return "ln(2 + sin(" + (*this)(depth - 1) + "))";
            default: return (pick(2) ? "exp(" : "cos(") + std::string("0.3*") + (*this)(depth - 1) + ")";
        }
    }

    std::vector<double> point(std::size_t dim = 4) {
        std::uniform_real_distribution<double> u(-1.5, 1.5);
        std::vector<double> x(dim);
        for (auto& v : x) v = u(rng_);
        return x;
    }

private:
    bool coin(double p) { return std::uniform_real_distribution<double>(0, 1)(rng_) < p; }
    std::size_t pick(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_); }
    std::string leaf() {
        static const char* names[] = {"q1", "q2", "p1", "p2", "a"};
        if (coin(0.3)) {
            char buf[32];
            std::snprintf(buf, sizeof buf, "%.3g", std::uniform_real_distribution<double>(0.1, 3)(rng_));
            return buf;
        }
        return names[pick(5)];
    }
    std::mt19937_64 rng_;
};

inline const std::vector<std::string>& coords4() {
    static const std::vector<std::string> c{"q1", "q2", "p1", "p2"};
    return c;
}

// H = (q^2 + p^2)/2, one degree of freedom
inline nambu::SystemSpec harmonic() {
    nambu::SystemDefinition d;
    d.name = "harmonic";
    d.n = 1;
    d.hamiltonian = "(q1^2 + p1^2)/2";
    return nambu::SystemSpec(d);
}

inline nambu::SystemSpec oscillator3() {
    nambu::SystemDefinition d;
    d.name = "oscillator3";
    d.n = 3;
    d.hamiltonian = "(p1^2 + p2^2 + p3^2 + q1^2 + q2^2 + q3^2)/2";
    d.involutive = {"(p1^2 + q1^2)/2", "(p2^2 + q2^2)/2"};
    d.additional = {"q1*p2 - q2*p1", "q2*p3 - q3*p2"};
    return nambu::SystemSpec(d);
}

inline double rel(double a, double b) { return std::abs(a - b) / (std::abs(a) + std::abs(b) + 1e-300); }

}  // namespace testing
