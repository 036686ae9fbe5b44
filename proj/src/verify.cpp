#include "nambu/verify.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <random>

#include "nambu/brackets.hpp"
#include "nambu/dynamics.hpp"
#include "nambu/error.hpp"
#include "nambu/systems.hpp"
#include "nambu/tensors.hpp"

namespace nambu {

const std::map<std::string, double>& default_tolerances() {
    static const std::map<std::string, double> table{
        {"defining_relations", 1e-9},
        {"nb_skew_symmetry", 1e-12},
        {"nb_leibniz", 1e-10},
        {"nb_fundamental_identity", 1e-7},
        {"main_identity", 1e-8},
        {"normalized_evolution", 1e-9},
        {"bracket_k_evolution", 1e-9},
        {"bracket_jacobi", 1e-7},
        {"casimir", 0.0},
        {"tensor_contraction", 1e-10},
        {"tensor_oracle", 1e-10},
        {"tensor_jacobi", 1e-8},
        {"tensor_compatibility", 1e-8},
        {"tensor_degeneracy", 1e-12},
        {"tensor_rank_tolerance", 1e-9},
        {"tensor_orthogonality", 1e-10},
        {"rhs_equivalence", 1e-9},
        {"landau_closed_form", 1e-10},
        {"detb_constant", 1e-12},
        {"cm_trivialized_pb", 1e-8},
        {"cm_trivialized_nambu", 1e-8},
    };
    return table;
}

namespace {

double norm2(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

// q_i, p_i, q_i p_j, q_i^2, p_i^2 in the system's own coordinate names.
std::vector<ScalarField> monomial_basis(const SystemSpec& sys) {
    const auto& c = sys.coordinates();
    const std::size_t n = sys.dof();
    std::vector<std::string> text;
    for (const auto& s : c) text.push_back(s);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) text.push_back(c[i] + "*" + c[n + j]);
    for (const auto& s : c) text.push_back(s + "^2");
    std::vector<ScalarField> out;
    for (const auto& t : text) out.push_back(ScalarField::compile(t, c, {}));
    return out;
}

class Suite {
public:
    Suite(const SystemSpec& sys, const VerifyOptions& opt)
        : sys_(sys), points_(sample_points(sys, opt.samples, opt.seed)), rng_(opt.seed ^ 0x9e3779b97f4a7c15ULL),
          basis_(monomial_basis(sys)), overrides_(opt.tolerances) {
        pool_ = basis_;
        pool_.insert(pool_.end(), sys.constants().begin(), sys.constants().end());
    }

    std::vector<CheckRecord> run() {
        defining();
        axioms();
        normalized();
        tensors();
        if (sys_.name() == "landau") landau();
        if (sys_.name() == "calogero-moser") calogero_moser();
        auto algebra = algebra_records(sys_, points_);
        records_.insert(records_.end(), algebra.begin(), algebra.end());
        return std::move(records_);
    }

private:
    using Body = std::function<void(CheckRecord&, const PhasePoint&)>;

    void check(const std::string& id, const std::string& reference, const Body& body, bool absolute = false) {
        CheckRecord rec;
        rec.id = id;
        rec.reference = reference;
        rec.tolerance = default_tolerances().at(id);
        rec.absolute = absolute;
        for (const auto& x : points_) {
            try {
                body(rec, x);
            } catch (const SingularLocus&) {
                rec.skip();
            } catch (const DomainError& e) {
                throw DomainError(std::string(e.what()) + " during " + id + " at x = " + format_point(x));
            }
        }
        records_.push_back(std::move(rec));
    }

    std::size_t pick(std::size_t n) { return static_cast<std::size_t>(unit_uniform(rng_()) * static_cast<double>(n)); }
    const ScalarField& from(const std::vector<ScalarField>& v) { return v[pick(v.size())]; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * unit_uniform(rng_()); }
    double tolerance(const std::string& id) const {
        auto it = overrides_.find(id);
        return it != overrides_.end() ? it->second : default_tolerances().at(id);
    }
    std::size_t kmax() const { return 2 * sys_.dof() - 2; }

    void defining() {
        check("defining_relations", "{H,H_i} = {H_i,H_j} = {H,A_i} = 0", [&](CheckRecord& rec, const PhasePoint& x) {
            const std::size_t n = sys_.dof();
            std::vector<std::vector<double>> g;
            for (const auto& c : sys_.constants()) g.push_back(c.eval_grad(x).gradient);
            auto one = [&](std::size_t a, std::size_t b) {
                double v = 0.0, mag = 0.0;
                for (std::size_t j = 0; j < n; ++j) {
                    v += g[a][j] * g[b][n + j] - g[a][n + j] * g[b][j];
                    mag += std::abs(g[a][j] * g[b][n + j]) + std::abs(g[a][n + j] * g[b][j]);
                }
                rec.add(std::abs(v), std::abs(v) / (mag + 1.0));
            };
            for (std::size_t i = 1; i < 2 * n - 1; ++i) one(0, i);
            for (std::size_t i = 1; i < n; ++i)
                for (std::size_t j = i + 1; j < n; ++j) one(i, j);
        });
    }

    void axioms() {
        const std::size_t dim = sys_.dimension();
        check("nb_skew_symmetry", "{..f_i..f_j..} = -{..f_j..f_i..}", [&](CheckRecord& rec, const PhasePoint& x) {
            std::vector<ScalarField> fs;
            for (std::size_t i = 0; i < dim; ++i) fs.push_back(from(pool_));
            const RealMatrix m = jacobian_matrix(fs, x);
            const double a = determinant(m);
            for (int t = 0; t < 20; ++t) {
                const std::size_t i = pick(dim);
                std::size_t j = pick(dim - 1);
                if (j >= i) ++j;
                RealMatrix s = m;
                s.swap_rows(i, j);
                const double b = determinant(s);
                rec.add(std::abs(a + b), std::abs(a + b) / (std::abs(a) + std::abs(b) + 1.0));
            }
        });
        check("nb_leibniz", "{f1 f2, f3..} = f1 {f2, f3..} + f2 {f1, f3..}", [&](CheckRecord& rec, const PhasePoint& x) {
            std::vector<ScalarField> fs{from(basis_), from(basis_)};
            while (fs.size() < dim + 1) fs.push_back(from(pool_));
            const Residual r = leibniz_residual(fs, x);
            rec.add(r.absolute, r.relative());
        });
        check("nb_fundamental_identity", "{f.., {g_1..g_N}} = sum_i {g_1.., {f.., g_i}, ..g_N}",
              [&](CheckRecord& rec, const PhasePoint& x) {
                  std::vector<ScalarField> fs, gs;
                  for (std::size_t i = 0; i + 1 < dim; ++i) fs.push_back(from(pool_));
                  for (std::size_t i = 0; i < dim; ++i) gs.push_back(from(pool_));
                  const Residual r = fundamental_identity_residual(fs, gs, x);
                  rec.add(r.absolute, r.relative());
              });
    }

    void normalized() {
        check("main_identity", "{f,H,H_1..,A_1..} = (-1)^{n+1} detB {f,H}", [&](CheckRecord& rec, const PhasePoint& x) {
            for (const auto& f : basis_) {
                const Residual r = independence_identity_residual(f, sys_, x);
                rec.add(r.absolute, r.relative());
            }
        });
        check("normalized_evolution", "(-1)^{n+1}/detB {f,H,H_1..,A_1..} = {f,H}",
              [&](CheckRecord& rec, const PhasePoint& x) {
                  for (const auto& f : basis_) {
                      const double v = normalized_evolution_bracket(f, sys_, x).value;
                      const double pb = poisson_bracket(f, sys_.hamiltonian(), x);
                      rec.add(std::abs(v - pb), std::abs(v - pb) / (std::abs(v) + std::abs(pb) + 1.0));
                  }
              });
        check("bracket_k_evolution", "{f,H_k}^(k) = {f,H} for every k", [&](CheckRecord& rec, const PhasePoint& x) {
            for (const auto& f : basis_) {
                const double pb = poisson_bracket(f, sys_.hamiltonian(), x);
                for (std::size_t k = 0; k <= kmax(); ++k) {
                    const double v = bracket_k(f, sys_.constant(k), sys_, k, x);
                    rec.add(std::abs(v - pb), std::abs(v - pb) / (std::abs(v) + std::abs(pb) + 1.0));
                }
            }
        });
        check("bracket_jacobi", "{f,{g,h}^(k)}^(k) + cyclic = 0", [&](CheckRecord& rec, const PhasePoint& x) {
            for (std::size_t k = 0; k <= kmax(); ++k) {
                const Residual r = jacobi_residual_bracket(from(basis_), from(basis_), from(basis_), sys_, k, x);
                rec.add(r.absolute, r.relative());
            }
        });
        check(
            "casimir", "{H_j, f}^(k) = 0 for every retained H_j (exact)",
            [&](CheckRecord& rec, const PhasePoint& x) {
                for (std::size_t k = 0; k <= kmax(); ++k)
                    for (std::size_t j = 0; j <= kmax(); ++j) {
                        if (j == k) continue;
                        const double v = bracket_k(sys_.constant(j), from(basis_), sys_, k, x);
                        rec.add(std::abs(v), std::abs(v));
                    }
            },
            true);
    }

    void tensors() {
        const std::size_t n = sys_.dof();
        const std::size_t dim = sys_.dimension();
        check("tensor_contraction", "grad f . Lambda_(k) . grad h = {f,h}^(k)", [&](CheckRecord& rec, const PhasePoint& x) {
            for (std::size_t k = 0; k <= kmax(); ++k) {
                const SkewTensor t = lambda_k(sys_, k, x);
                const ScalarField& f = from(basis_);
                const ScalarField& h = from(pool_);
                const double a = contract(t, f.eval_grad(x).gradient, h.eval_grad(x).gradient);
                const double b = bracket_k(f, h, sys_, k, x);
                rec.add(std::abs(a - b), std::abs(a - b) / (std::abs(a) + std::abs(b) + 1.0));
            }
        });
        if (n <= 3)
            check("tensor_oracle", "Lambda_(k) from minors = Lambda_(k) from the epsilon sum",
                  [&](CheckRecord& rec, const PhasePoint& x) {
                      for (std::size_t k = 0; k <= kmax(); ++k) {
                          const auto a = lambda_k(sys_, k, x).entries;
                          const auto b = lambda_oracle(sys_, k, x).entries;
                          for (std::size_t i = 0; i < a.data().size(); ++i) {
                              const double d = std::abs(a.data()[i] - b.data()[i]);
                              rec.add(d, d / (std::abs(a.data()[i]) + std::abs(b.data()[i]) + 1.0));
                          }
                      }
                  });
        check("tensor_jacobi", "Lambda^{eta g} d_g Lambda^{ab} + cyclic = 0", [&](CheckRecord& rec, const PhasePoint& x) {
            for (std::size_t k = 0; k <= kmax(); ++k) {
                const TensorResidual r = jacobi_tensor_residual(sys_, k, x);
                rec.add(r.absolute, r.relative);
            }
        });
        if (kmax() >= 1)
            check("tensor_compatibility", "a Lambda_(k1) + b Lambda_(k2) satisfies the Jacobi identity",
                  [&](CheckRecord& rec, const PhasePoint& x) {
                      for (std::size_t k1 = 0; k1 <= kmax(); ++k1)
                          for (std::size_t k2 = k1 + 1; k2 <= kmax(); ++k2)
                              for (int draw = 0; draw < 10; ++draw) {
                                  const double a = uniform(-2, 2), b = uniform(-2, 2);
                                  const TensorResidual r = compatibility_residual(sys_, k1, k2, a, b, x);
                                  rec.add(r.absolute, r.relative);
                              }
                  });
        if (n >= 2) {
            std::size_t bad_rank = 0;
            check("tensor_degeneracy", "det Lambda_(k) = 0 and rank Lambda_(k) = 2",
                  [&](CheckRecord& rec, const PhasePoint& x) {
                      for (std::size_t k = 0; k <= kmax(); ++k) {
                          const SkewTensor t = lambda_k(sys_, k, x);
                          const Degeneracy d = degeneracy_check(t, tolerance("tensor_rank_tolerance"));
                          const double scale = std::pow(frobenius_norm(t.entries), static_cast<double>(dim));
                          double rel = std::abs(d.det) / std::max(scale, 1e-300);
                          if (d.rank != 2) {
                              ++bad_rank;
                              rel = INFINITY;
                          }
                          rec.add(std::abs(d.det), rel);
                      }
                  });
            records_.back().note = "relative residual is |det| / ||Lambda||_F^{2n}; rank != 2 at " +
                                   std::to_string(bad_rank) + " tensor(s)";
        }
        check("tensor_orthogonality", "Lambda_(k) grad H_j = 0 for every retained H_j",
              [&](CheckRecord& rec, const PhasePoint& x) {
                  for (std::size_t k = 0; k <= kmax(); ++k) {
                      const TensorResidual r = orthogonality_residual(sys_, k, x);
                      rec.add(r.absolute, r.relative);
                  }
              });
        check("rhs_equivalence", "Lambda_(k) grad H_k = xi_H", [&](CheckRecord& rec, const PhasePoint& x) {
            const auto xi = canonical_rhs(sys_, x);
            for (std::size_t k = 0; k <= kmax(); ++k) {
                auto v = multihamiltonian_rhs(sys_, k, x);
                for (std::size_t i = 0; i < v.size(); ++i) v[i] -= xi[i];
                const double d = norm2(v);
                rec.add(d, d / (norm2(xi) + 1.0));
            }
        });
    }

    void landau() {
        const auto& p = sys_.parameters();
        for (const char* key : {"m", "q", "c", "B", "w"})
            if (!p.count(key)) return;
        check(
            "landau_closed_form", "Lambda_(k) = closed-form block matrices in v, Y, Z, S_k, l, l_k",
            [&](CheckRecord& rec, const PhasePoint& x) {
                for (std::size_t k = 0; k <= 2; ++k) {
                    const auto a = lambda_k(sys_, k, x).entries;
                    const auto b = landau_closed_form(sys_, k, x).entries;
                    for (std::size_t i = 0; i < a.data().size(); ++i) {
                        const double d = std::abs(a.data()[i] - b.data()[i]);
                        rec.add(d, d / (std::abs(a.data()[i]) + std::abs(b.data()[i]) + 1.0));
                    }
                }
            },
            true);
        const double expected = -p.at("m") * p.at("w");
        check("detb_constant", "detB = -m w at every point", [&](CheckRecord& rec, const PhasePoint& x) {
            const double d = std::abs(det_b(sys_, x) - expected);
            rec.add(d, d / (1.0 + std::abs(expected)));
        });
    }

    void calogero_moser() {
        const auto& p = sys_.parameters();
        if (!p.count("m") || !p.count("g")) return;
        ParameterMap mg{{"m", p.at("m")}, {"g", p.at("g")}};
        if (sys_.coordinates() != canonical_coordinates(2)) return;
        const ScalarField app = cm_trivializing_constant(mg);
        // H1 is H_1 in either variant.
        const ScalarField& h1 = sys_.constant(1);
        check("cm_trivialized_pb", "{H1, A''} = -1", [&](CheckRecord& rec, const PhasePoint& x) {
            const double v = poisson_bracket(h1, app, x);
            rec.add(std::abs(v + 1.0), std::abs(v + 1.0) / (std::abs(v) + 2.0));
        });
        check("cm_trivialized_nambu", "{f, H, H1, A''} = {f, H}", [&](CheckRecord& rec, const PhasePoint& x) {
            for (const auto& f : basis_) {
                const std::vector<ScalarField> fs{f, sys_.hamiltonian(), h1, app};
                const double a = nambu_bracket(fs, x);
                const double b = poisson_bracket(f, sys_.hamiltonian(), x);
                rec.add(std::abs(a - b), std::abs(a - b) / (std::abs(a) + std::abs(b) + 1.0));
            }
        });
    }

    const SystemSpec& sys_;
    std::vector<PhasePoint> points_;
    std::mt19937_64 rng_;
    std::vector<ScalarField> basis_;
    std::vector<ScalarField> pool_;
    std::map<std::string, double> overrides_;
    std::vector<CheckRecord> records_;
};

}  // namespace

VerificationReport verify(const SystemSpec& sys, const VerifyOptions& opt) {
    if (opt.samples == 0) throw ConfigError("--samples must be positive");
    const auto start = std::chrono::steady_clock::now();

    auto records = Suite(sys, opt).run();

    std::map<std::string, double> table = default_tolerances();
    for (const auto& [id, value] : opt.tolerances) {
        if (!(value >= 0.0)) throw ConfigError("tolerance for '" + id + "' must be non-negative");
        bool known = table.count(id) > 0;
        for (auto& r : records)
            if (r.id == id) {
                r.tolerance = value;
                known = true;
            }
        if (!known) throw ConfigError("unknown check id '" + id + "' in tolerance overrides");
        table[id] = value;
    }
    for (auto& r : records) r.finish();

    VerificationReport rep;
    rep.system = sys.name();
    rep.parameters = sys.parameters();
    rep.seed = opt.seed;
    rep.samples = opt.samples;
    rep.tolerances = std::move(table);
    rep.records = std::move(records);
    rep.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return rep;
}

}  // namespace nambu
