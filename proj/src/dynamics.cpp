#include "nambu/dynamics.hpp"

#include <cmath>

#include "nambu/brackets.hpp"
#include "nambu/error.hpp"
#include "nambu/systems.hpp"
#include "nambu/tensors.hpp"

namespace nambu {

std::vector<double> canonical_rhs(const SystemSpec& sys, const PhasePoint& x) {
    return hamiltonian_vector_field(sys.hamiltonian(), x);
}

std::vector<double> multihamiltonian_rhs(const SystemSpec& sys, std::size_t k, const PhasePoint& x) {
    const SkewTensor t = lambda_k(sys, k, x);
    const auto grad = sys.constant(k).eval_grad(x).gradient;
    const std::size_t dim = sys.dimension();
    std::vector<double> out(dim, 0.0);
    for (std::size_t a = 0; a < dim; ++a)
        for (std::size_t b = 0; b < dim; ++b) out[a] += t.entries(a, b) * grad[b];
    return out;
}

std::vector<double> rhs(const SystemSpec& sys, RhsSelector which, const PhasePoint& x) {
    return which ? multihamiltonian_rhs(sys, *which, x) : canonical_rhs(sys, x);
}

IntegrationResult integrate(const SystemSpec& sys, RhsSelector which, const PhasePoint& x0, double t_final,
                            double dt) {
    if (!(dt > 0.0) || !std::isfinite(dt)) throw ConfigError("dt must be positive");
    if (!(t_final >= 0.0) || !std::isfinite(t_final)) throw ConfigError("t_final must be non-negative");
    if (x0.size() != sys.dimension()) throw DimensionMismatch("x0 length differs from system dimension");
    if (which && *which > 2 * sys.dof() - 2) throw ConfigError("k out of range");

    if (t_final / dt > 1e9) throw ConfigError("t_final/dt exceeds 1e9 steps");
    // uniform steps that land exactly on t_final
    const auto steps = static_cast<std::size_t>(std::llround(t_final / dt));
    const double h = steps ? t_final / static_cast<double>(steps) : dt;

    IntegrationResult res;
    res.trajectory.dt = h;
    if (!sys.admissible(x0)) {
        res.status = IntegrationStatus::domain_exit;
        res.message = "x0 violates an exclusion margin";
        return res;
    }
    res.trajectory.times.push_back(0.0);
    res.trajectory.states.push_back(x0);

    const std::size_t dim = x0.size();
    std::vector<double> x = x0.vector(), tmp(dim);
    auto axpy = [&](const std::vector<double>& k, double h) {
        for (std::size_t i = 0; i < dim; ++i) tmp[i] = x[i] + h * k[i];
        return PhasePoint(tmp);
    };
    for (std::size_t s = 1; s <= steps; ++s) {
        try {
            const auto k1 = rhs(sys, which, PhasePoint(x));
            const auto k2 = rhs(sys, which, axpy(k1, h / 2));
            const auto k3 = rhs(sys, which, axpy(k2, h / 2));
            const auto k4 = rhs(sys, which, axpy(k3, h));
            for (std::size_t i = 0; i < dim; ++i) x[i] += h / 6 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
        } catch (const SingularLocus& e) {
            res.status = IntegrationStatus::singular;
            res.message = e.what();
            return res;
        } catch (const DomainError& e) {
            res.status = IntegrationStatus::domain_exit;
            res.message = e.what();
            return res;
        }
        bool finite = true;
        for (double v : x) finite = finite && std::isfinite(v);
        if (!finite || !sys.admissible(x)) {
            res.status = IntegrationStatus::domain_exit;
            res.message = "state left the admissible region after t = " + std::to_string(res.last_time());
            return res;
        }
        res.trajectory.times.push_back(static_cast<double>(s) * h);
        res.trajectory.states.emplace_back(x);
    }
    return res;
}

std::vector<double> conservation_drift(const SystemSpec& sys, const Trajectory& traj) {
    std::vector<double> out(sys.constants().size(), 0.0);
    if (traj.states.empty()) return out;
    for (std::size_t c = 0; c < out.size(); ++c) {
        const auto& f = sys.constant(c);
        const double f0 = f.eval(traj.states.front());
        for (const auto& x : traj.states) out[c] = std::max(out[c], std::abs(f.eval(x) - f0) / (std::abs(f0) + 1.0));
    }
    return out;
}

}  // namespace nambu
