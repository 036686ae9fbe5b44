#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "nambu/system.hpp"

namespace nambu {

/// Which vector field drives the flow: nullopt is the canonical xi_H,
/// a value k is Lambda_(k) grad H_k.
using RhsSelector = std::optional<std::size_t>;

std::vector<double> canonical_rhs(const SystemSpec& sys, const PhasePoint& x);
std::vector<double> multihamiltonian_rhs(const SystemSpec& sys, std::size_t k, const PhasePoint& x);
std::vector<double> rhs(const SystemSpec& sys, RhsSelector which, const PhasePoint& x);

struct Trajectory {
    std::vector<double> times;
    std::vector<PhasePoint> states;
    std::string method = "rk4";
    double dt = 0.0;
};

enum class IntegrationStatus { completed, domain_exit, singular };

struct IntegrationResult {
    Trajectory trajectory;  // up to and including the last valid state
    IntegrationStatus status = IntegrationStatus::completed;
    std::string message;
    double last_time() const { return trajectory.times.empty() ? 0.0 : trajectory.times.back(); }
};

/// Fixed-step classical RK4 from x0 to t_final: round(t_final/dt) uniform steps
/// of t_final/steps, so the last state sits exactly at t_final.
/// Leaving an exclusion margin or the real domain stops the run with
/// domain_exit; hitting the singular locus (k-flows) stops with singular.
IntegrationResult integrate(const SystemSpec& sys, RhsSelector which, const PhasePoint& x0, double t_final,
                            double dt);

/// For each of the 2n-1 constants: max_t |F(x(t)) - F(x0)| / (|F(x0)| + 1).
std::vector<double> conservation_drift(const SystemSpec& sys, const Trajectory& traj);

}  // namespace nambu
