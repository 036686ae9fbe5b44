#include "nambulab.h"

#include <cstdio>
#include <cstring>
#include <memory>
#include <string>

#include <json.hpp>

#include "nambu/brackets.hpp"
#include "nambu/dynamics.hpp"
#include "nambu/error.hpp"
#include "nambu/systems.hpp"
#include "nambu/tensors.hpp"
#include "nambu/verify.hpp"

using nlohmann::json;

struct nl_params {
    nambu::ParameterMap values;
    std::map<std::string, std::string> text;
};

struct nl_system {
    std::shared_ptr<const nambu::SystemSpec> spec;
};

struct nl_field {
    std::shared_ptr<const nambu::SystemSpec> spec;
    nambu::ScalarField field;
};

struct nl_trajectory {
    std::shared_ptr<const nambu::SystemSpec> spec;
    nambu::IntegrationResult result;
    int k = -1;
};

namespace {

thread_local std::string last_error;

nl_status fail(nl_status s, const std::string& msg) {
    last_error = msg;
    return s;
}

// Runs body, translating library exceptions into status codes.
template <class F>
nl_status guarded(F&& body) {
    try {
        body();
        last_error.clear();
        return NL_OK;
    } catch (const nambu::ParseError& e) {
        return fail(NL_PARSE, e.what());
    } catch (const nambu::UnknownIdentifier& e) {
        return fail(NL_PARSE, e.what());
    } catch (const nambu::SingularLocus& e) {
        return fail(NL_SINGULAR, e.what());
    } catch (const nambu::DomainError& e) {
        return fail(NL_DOMAIN, e.what());
    } catch (const nambu::RelationViolation& e) {
        return fail(NL_RELATION, e.what());
    } catch (const nambu::DimensionMismatch& e) {
        return fail(NL_ARGUMENT, e.what());
    } catch (const nambu::ConfigError& e) {
        return fail(NL_CONFIG, e.what());
    } catch (const json::exception& e) {
        return fail(NL_CONFIG, e.what());
    } catch (const std::exception& e) {
        return fail(NL_INTERNAL, e.what());
    } catch (...) {
        return fail(NL_INTERNAL, "unknown exception");
    }
}

char* dup(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (out) std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

nambu::PhasePoint point(const nambu::SystemSpec& sys, const double* x, std::size_t len) {
    if (!x && len) throw nambu::DimensionMismatch("null point");
    if (len != sys.dimension())
        throw nambu::DimensionMismatch("point has " + std::to_string(len) + " coordinates, system needs " +
                                       std::to_string(sys.dimension()));
    return nambu::PhasePoint(std::vector<double>(x, x + len));
}

json matrix_json(const nambu::RealMatrix& m) {
    json rows = json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        json r = json::array();
        for (std::size_t j = 0; j < m.cols(); ++j) r.push_back(m(i, j) + 0.0);  // no -0
        rows.push_back(r);
    }
    return rows;
}

std::string number(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

extern "C" {

const char* nl_last_error(void) { return last_error.c_str(); }
void nl_free_string(char* s) { std::free(s); }

nl_params* nl_params_new(void) { return new (std::nothrow) nl_params; }
void nl_params_free(nl_params* p) { delete p; }

nl_status nl_params_set(nl_params* p, const char* name, double value) {
    if (!p || !name) return fail(NL_ARGUMENT, "null argument");
    p->values[name] = value;
    return NL_OK;
}

nl_status nl_params_set_text(nl_params* p, const char* name, const char* value) {
    if (!p || !name || !value) return fail(NL_ARGUMENT, "null argument");
    const std::string key = name;
    if (key != "gauge" && key != "variant") return fail(NL_CONFIG, "parameter '" + key + "' needs a real value");
    p->text[key] = value;
    return NL_OK;
}

nl_status nl_builtin_names(char** out) {
    if (!out) return fail(NL_ARGUMENT, "null argument");
    return guarded([&] { *out = dup(json(nambu::builtin_names()).dump()); });
}

nl_status nl_system_builtin(const char* name, const nl_params* p, nl_system** out) {
    if (!name || !out) return fail(NL_ARGUMENT, "null argument");
    return guarded([&] {
        const std::string canon = nambu::canonical_builtin_name(name);
        nambu::ParameterMap params = nambu::builtin_defaults(canon);
        nambu::BuiltinOptions opt;
        if (p) {
            for (const auto& [k, v] : p->values) params[k] = v;
            if (auto it = p->text.find("gauge"); it != p->text.end()) opt.gauge = it->second;
            if (auto it = p->text.find("variant"); it != p->text.end()) opt.variant = it->second;
        }
        auto spec = std::make_shared<const nambu::SystemSpec>(nambu::builtin(canon, params, opt));
        *out = new nl_system{std::move(spec)};
    });
}

nl_status nl_system_load(const char* path, nl_system** out) {
    if (!path || !out) return fail(NL_ARGUMENT, "null argument");
    return guarded([&] { *out = new nl_system{std::make_shared<const nambu::SystemSpec>(nambu::load(path))}; });
}

nl_status nl_system_load_text(const char* text, nl_system** out) {
    if (!text || !out) return fail(NL_ARGUMENT, "null argument");
    return guarded([&] { *out = new nl_system{std::make_shared<const nambu::SystemSpec>(nambu::load_text(text))}; });
}

void nl_system_free(nl_system* s) { delete s; }
size_t nl_system_dof(const nl_system* s) { return s ? s->spec->dof() : 0; }
const char* nl_system_name(const nl_system* s) { return s ? s->spec->name().c_str() : ""; }
size_t nl_system_constant_count(const nl_system* s) { return s ? s->spec->constants().size() : 0; }

const char* nl_system_constant_name(const nl_system* s, size_t k) {
    if (!s || k >= s->spec->constant_names().size()) return nullptr;
    return s->spec->constant_names()[k].c_str();
}

const char* nl_system_coordinate(const nl_system* s, size_t i) {
    if (!s || i >= s->spec->coordinates().size()) return nullptr;
    return s->spec->coordinates()[i].c_str();
}

nl_status nl_system_admissible(const nl_system* s, const double* x, size_t len, int* ok) {
    if (!s || !ok) return fail(NL_ARGUMENT, "null argument");
    return guarded([&] { *ok = s->spec->admissible(point(*s->spec, x, len)) ? 1 : 0; });
}

nl_status nl_field_compile(const nl_system* s, const char* text, nl_field** out) {
    if (!s || !text || !out) return fail(NL_ARGUMENT, "null argument");
    return guarded([&] {
        auto f = nambu::ScalarField::compile(text, s->spec->coordinates(), s->spec->parameters());
        *out = new nl_field{s->spec, std::move(f)};
    });
}

void nl_field_free(nl_field* f) { delete f; }

nl_status nl_field_eval(const nl_field* f, const double* x, size_t len, double* value) {
    if (!f || !value) return fail(NL_ARGUMENT, "null argument");
    return guarded([&] { *value = f->field.eval(point(*f->spec, x, len)); });
}

nl_status nl_field_grad(const nl_field* f, const double* x, size_t len, double* value, double* grad) {
    if (!f || !value || !grad) return fail(NL_ARGUMENT, "null argument");
    return guarded([&] {
        const auto r = f->field.eval_grad(point(*f->spec, x, len));
        *value = r.value;
        std::copy(r.gradient.begin(), r.gradient.end(), grad);
    });
}

nl_status nl_poisson_bracket(const nl_field* f, const nl_field* g, const double* x, size_t len, double* out) {
    if (!f || !g || !out) return fail(NL_ARGUMENT, "null argument");
    return guarded([&] { *out = nambu::poisson_bracket(f->field, g->field, point(*f->spec, x, len)); });
}

nl_status nl_det_b(const nl_system* s, const double* x, size_t len, double* out) {
    if (!s || !out) return fail(NL_ARGUMENT, "null argument");
    return guarded([&] { *out = nambu::det_b(*s->spec, point(*s->spec, x, len)); });
}

nl_status nl_lambda(const nl_system* s, size_t k, const double* x, size_t len, int oracle, double* out) {
    if (!s || !out) return fail(NL_ARGUMENT, "null argument");
    if (k > 2 * s->spec->dof() - 2) return fail(NL_ARGUMENT, "k out of range");
    return guarded([&] {
        const auto p = point(*s->spec, x, len);
        const auto t = oracle ? nambu::lambda_oracle(*s->spec, k, p) : nambu::lambda_k(*s->spec, k, p);
        std::copy(t.entries.data().begin(), t.entries.data().end(), out);
    });
}

nl_status nl_tensor_json(const nl_system* s, size_t k, const double* x, size_t len, int oracle, char** out) {
    if (!s || !out) return fail(NL_ARGUMENT, "null argument");
    if (k > 2 * s->spec->dof() - 2) return fail(NL_CONFIG, "k out of range 0.." + std::to_string(2 * s->spec->dof() - 2));
    return guarded([&] {
        const auto& sys = *s->spec;
        const auto p = point(sys, x, len);
        const auto t = nambu::lambda_k(sys, k, p);
        const auto deg = nambu::degeneracy_check(t);
        const auto jac = nambu::jacobi_tensor_residual(sys, k, p);
        const auto orth = nambu::orthogonality_residual(sys, k, p);
        json j;
        j["system"] = sys.name();
        j["k"] = k;
        j["point"] = p.vector();
        j["entries"] = matrix_json(t.entries);
        j["det"] = deg.det;
        j["rank"] = deg.rank;
        j["residuals"] = {{"jacobi_abs", jac.absolute},
                          {"jacobi_rel", jac.relative},
                          {"orthogonality_abs", orth.absolute},
                          {"orthogonality_rel", orth.relative}};
        if (oracle) {
            if (sys.dof() > 3) throw nambu::ConfigError("--oracle needs n <= 3");
            const auto o = nambu::lambda_oracle(sys, k, p);
            double diff = 0.0;
            for (std::size_t a = 0; a < sys.dimension(); ++a)
                for (std::size_t b = 0; b < sys.dimension(); ++b)
                    diff = std::max(diff, std::abs(o.entries(a, b) - t.entries(a, b)));
            j["oracle"] = matrix_json(o.entries);
            j["residuals"]["oracle_max_abs"] = diff;
        }
        *out = dup(j.dump(2));
    });
}

nl_status nl_verify(const nl_system* s, uint64_t seed, size_t samples, const char* const* tol_ids,
                    const double* tol_values, size_t tol_count, char** report, int* failed) {
    if (!s || !report || !failed || (tol_count && (!tol_ids || !tol_values))) return fail(NL_ARGUMENT, "null argument");
    return guarded([&] {
        nambu::VerifyOptions opt;
        opt.seed = seed;
        opt.samples = samples;
        for (std::size_t i = 0; i < tol_count; ++i) opt.tolerances[tol_ids[i]] = tol_values[i];
        const auto r = nambu::verify(*s->spec, opt);
        *report = dup(r.dump());
        *failed = r.failed() ? 1 : 0;
    });
}

nl_status nl_default_tolerances(char** out) {
    if (!out) return fail(NL_ARGUMENT, "null argument");
    return guarded([&] { *out = dup(json(nambu::default_tolerances()).dump(2)); });
}

nl_status nl_integrate(const nl_system* s, int k, const double* x0, size_t len, double t_final, double dt,
                       nl_trajectory** out) {
    if (!s || !out) return fail(NL_ARGUMENT, "null argument");
    return guarded([&] {
        nambu::RhsSelector which;
        if (k >= 0) which = static_cast<std::size_t>(k);
        auto r = nambu::integrate(*s->spec, which, point(*s->spec, x0, len), t_final, dt);
        *out = new nl_trajectory{s->spec, std::move(r), k};
    });
}

void nl_trajectory_free(nl_trajectory* t) { delete t; }

nl_flow_status nl_trajectory_status(const nl_trajectory* t) {
    if (!t) return NL_FLOW_COMPLETED;
    switch (t->result.status) {
        case nambu::IntegrationStatus::domain_exit: return NL_FLOW_DOMAIN_EXIT;
        case nambu::IntegrationStatus::singular: return NL_FLOW_SINGULAR;
        default: return NL_FLOW_COMPLETED;
    }
}

const char* nl_trajectory_message(const nl_trajectory* t) { return t ? t->result.message.c_str() : ""; }
size_t nl_trajectory_length(const nl_trajectory* t) { return t ? t->result.trajectory.states.size() : 0; }

nl_status nl_trajectory_state(const nl_trajectory* t, size_t i, double* time, double* x) {
    if (!t || !time || !x) return fail(NL_ARGUMENT, "null argument");
    if (i >= t->result.trajectory.states.size()) return fail(NL_ARGUMENT, "state index out of range");
    *time = t->result.trajectory.times[i];
    const auto& v = t->result.trajectory.states[i].vector();
    std::copy(v.begin(), v.end(), x);
    return NL_OK;
}

nl_status nl_trajectory_csv(const nl_trajectory* t, char** out) {
    if (!t || !out) return fail(NL_ARGUMENT, "null argument");
    return guarded([&] {
        std::string csv = "t";
        for (const auto& c : t->spec->coordinates()) csv += "," + c;
        csv += "\n";
        const auto& tr = t->result.trajectory;
        for (std::size_t i = 0; i < tr.states.size(); ++i) {
            csv += number(tr.times[i]);
            for (double v : tr.states[i].vector()) csv += "," + number(v);
            csv += "\n";
        }
        *out = dup(csv);
    });
}

nl_status nl_trajectory_drift_json(const nl_trajectory* t, char** out) {
    if (!t || !out) return fail(NL_ARGUMENT, "null argument");
    return guarded([&] {
        const auto& sys = *t->spec;
        const auto drift = nambu::conservation_drift(sys, t->result.trajectory);
        json d = json::object();
        for (std::size_t c = 0; c < drift.size(); ++c) d[sys.constant_names()[c]] = drift[c];
        static const char* names[] = {"completed", "domain_exit", "singular"};
        json j;
        j["system"] = sys.name();
        j["flow"] = t->k < 0 ? json("canonical") : json(t->k);
        j["method"] = t->result.trajectory.method;
        j["dt"] = t->result.trajectory.dt;
        j["t_end"] = t->result.last_time();
        j["steps"] = t->result.trajectory.states.empty() ? 0 : t->result.trajectory.states.size() - 1;
        j["status"] = names[static_cast<int>(t->result.status)];
        if (!t->result.message.empty()) j["message"] = t->result.message;
        j["drift"] = d;
        *out = dup(j.dump(2));
    });
}

nl_status nl_write_file(const char* path, const char* text) {
    if (!path || !text) return fail(NL_ARGUMENT, "null argument");
    try {
        nambu::write_atomically(path, text);
        return NL_OK;
    } catch (const std::exception& e) {
        return fail(NL_IO, e.what());
    }
}

}  // extern "C"
