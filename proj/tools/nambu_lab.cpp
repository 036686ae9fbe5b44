// nambu_lab: verification suites, tensor dumps and trajectories.
// Talks to the library only through nambulab.h.
#include <cerrno>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "nambulab.h"

namespace {

enum Exit { ok = 0, check_failed = 1, config = 2, domain_exit = 3 };

struct Usage : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Free {
    void operator()(nl_system* s) const { nl_system_free(s); }
    void operator()(nl_params* p) const { nl_params_free(p); }
    void operator()(nl_trajectory* t) const { nl_trajectory_free(t); }
    void operator()(char* s) const { nl_free_string(s); }
};
using System = std::unique_ptr<nl_system, Free>;
using Text = std::unique_ptr<char, Free>;

int exit_for(nl_status s) {
    switch (s) {
        case NL_OK: return ok;
        case NL_DOMAIN: return domain_exit;
        case NL_SINGULAR: return check_failed;
        default: return config;
    }
}

struct Failure {
    nl_status status;
    std::string message;
};

void check(nl_status s) {
    if (s != NL_OK) throw Failure{s, nl_last_error()};
}

std::string trim(std::string s) {
    const auto a = s.find_first_not_of(" \t");
    const auto b = s.find_last_not_of(" \t");
    return a == std::string::npos ? "" : s.substr(a, b - a + 1);
}

// commas inside braces or parentheses belong to the item ("relation:{H,A1} = 0=1e-6")
std::vector<std::string> split_items(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    int depth = 0;
    for (char c : s) {
        if (c == '{' || c == '(') ++depth;
        if (c == '}' || c == ')') --depth;
        if (c == ',' && depth == 0) {
            out.push_back(trim(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!trim(cur).empty() || !out.empty()) out.push_back(trim(cur));
    return out;
}

std::optional<double> real(const std::string& s) {
    if (s.empty()) return std::nullopt;
    char* end = nullptr;
    errno = 0;
    const double v = std::strtod(s.c_str(), &end);
    if (end != s.c_str() + s.size() || errno == ERANGE) return std::nullopt;
    return v;
}

std::vector<double> reals(const std::string& csv, const char* flag) {
    std::vector<double> out;
    for (const auto& item : split_items(csv)) {
        auto v = real(item);
        if (!v) throw Usage(std::string(flag) + ": '" + item + "' is not a number");
        out.push_back(*v);
    }
    if (out.empty()) throw Usage(std::string(flag) + " is empty");
    return out;
}

// KEY=VALUE, split at the last '=' so keys may contain '='
std::pair<std::string, std::string> key_value(const std::string& item, const char* flag, bool last) {
    const auto eq = last ? item.rfind('=') : item.find('=');
    if (eq == std::string::npos || eq == 0) throw Usage(std::string(flag) + ": expected KEY=VALUE, got '" + item + "'");
    return {trim(item.substr(0, eq)), trim(item.substr(eq + 1))};
}

struct Common {
    std::string system;
    std::string file;
    std::string params;

    System open() const {
        if (system.empty() == file.empty()) throw Usage("give exactly one of --system or --file");
        nl_system* s = nullptr;
        if (!file.empty()) {
            if (!params.empty()) throw Usage("--params applies to builtin systems only");
            check(nl_system_load(file.c_str(), &s));
            return System(s);
        }
        std::unique_ptr<nl_params, Free> p(nl_params_new());
        for (const auto& item : split_items(params)) {
            if (item.empty()) continue;
            auto [k, v] = key_value(item, "--params", false);
            if (k == "gauge" || k == "variant") {
                check(nl_params_set_text(p.get(), k.c_str(), v.c_str()));
            } else if (auto x = real(v)) {
                check(nl_params_set(p.get(), k.c_str(), *x));
            } else {
                throw Usage("--params: value of '" + k + "' is not a number");
            }
        }
        check(nl_system_builtin(system.c_str(), p.get(), &s));
        return System(s);
    }
};

void add_common(CLI::App* cmd, Common& c) {
    cmd->add_option("--system", c.system, "builtin system (calogero-moser|cm, landau, sw1..sw4)");
    cmd->add_option("--file", c.file, "JSON system definition");
    cmd->add_option("--params", c.params, "k=v,... (gauge=EXPR and variant=A1|A1p are text)");
}

void emit(const std::string& text, const std::string& path) {
    if (path.empty()) {
        std::cout << text << (text.empty() || text.back() != '\n' ? "\n" : "");
    } else {
        check(nl_write_file(path.c_str(), text.c_str()));
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Numerical checks for Nambu brackets and multi-Hamiltonian tensors"};
    app.require_subcommand(1);

    Common common;
    std::uint64_t seed = 42;
    std::size_t samples = 100;
    std::string tol, point, x0, output;
    std::optional<std::size_t> k;
    double t_final = 10.0, dt = 1e-3;
    bool oracle = false;

    auto* verify = app.add_subcommand("verify", "run the identity suite and write a JSON report");
    add_common(verify, common);
    verify->add_option("--seed", seed, "sampling seed")->envname("NAMBU_LAB_SEED");
    verify->add_option("--samples", samples, "sample points");
    verify->add_option("--tol", tol, "CHECK=VALUE,... tolerance overrides");
    verify->add_option("--output", output, "report path (stdout if omitted)");

    auto* tensor = app.add_subcommand("tensor", "print Lambda_(k) at a point as JSON");
    add_common(tensor, common);
    tensor->add_option("--k", k, "tensor index 0..2n-2")->required();
    tensor->add_option("--point", point, "comma-separated coordinates")->required();
    tensor->add_flag("--oracle", oracle, "also print the epsilon-sum tensor (n <= 3)");
    tensor->add_option("--output", output, "JSON path (stdout if omitted)");

    auto* evolve = app.add_subcommand("evolve", "RK4 trajectory to CSV plus a drift sidecar");
    add_common(evolve, common);
    evolve->add_option("--k", k, "use Lambda_(k) grad H_k instead of the canonical flow");
    evolve->add_option("--x0", x0, "initial point")->required();
    evolve->add_option("--t-final", t_final, "end time");
    evolve->add_option("--dt", dt, "step");
    evolve->add_option("--output", output, "CSV path")->required();

    app.add_subcommand("list", "builtin system names");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? ok : config;
    }

    try {
        if (app.got_subcommand("list")) {
            char* names = nullptr;
            check(nl_builtin_names(&names));
            std::cout << Text(names).get() << "\n";
            return ok;
        }
        System sys = common.open();
        const std::size_t dim = 2 * nl_system_dof(sys.get());

        if (verify->parsed()) {
            std::vector<std::string> ids;
            std::vector<double> values;
            for (const auto& item : split_items(tol)) {
                if (item.empty()) continue;
                auto [id, v] = key_value(item, "--tol", true);
                auto x = real(v);
                if (!x) throw Usage("--tol: value of '" + id + "' is not a number");
                ids.push_back(id);
                values.push_back(*x);
            }
            std::vector<const char*> cids;
            for (const auto& s : ids) cids.push_back(s.c_str());
            char* report = nullptr;
            int failed = 0;
            check(nl_verify(sys.get(), seed, samples, cids.data(), values.data(), ids.size(), &report, &failed));
            Text owned(report);
            emit(report, output);
            if (!output.empty()) std::cerr << (failed ? "FAIL" : "PASS") << ": report written to " << output << "\n";
            return failed ? check_failed : ok;
        }

        if (tensor->parsed()) {
            const auto x = reals(point, "--point");
            char* out = nullptr;
            const nl_status s = nl_tensor_json(sys.get(), *k, x.data(), x.size(), oracle ? 1 : 0, &out);
            if (s == NL_SINGULAR) {
                std::cerr << "SKIPPED-SINGULAR: " << nl_last_error() << "\n";
                return check_failed;
            }
            check(s);
            Text owned(out);
            emit(out, output);
            return ok;
        }

        // evolve
        const auto x = reals(x0, "--x0");
        if (x.size() != dim) throw Usage("--x0 needs " + std::to_string(dim) + " values");
        nl_trajectory* raw = nullptr;
        check(nl_integrate(sys.get(), k ? static_cast<int>(*k) : -1, x.data(), x.size(), t_final, dt, &raw));
        std::unique_ptr<nl_trajectory, Free> traj(raw);
        char* csv = nullptr;
        char* drift = nullptr;
        check(nl_trajectory_csv(traj.get(), &csv));
        Text c(csv);
        check(nl_trajectory_drift_json(traj.get(), &drift));
        Text d(drift);
        emit(csv, output);
        emit(drift, output + ".drift.json");
        if (nl_trajectory_status(traj.get()) != NL_FLOW_COMPLETED) {
            std::cerr << "stopped: " << nl_trajectory_message(traj.get()) << "\n";
            return domain_exit;
        }
        return ok;
    } catch (const Usage& e) {
        std::cerr << "error: " << e.what() << "\n";
        return config;
    } catch (const Failure& f) {
        std::cerr << "error: " << f.message << "\n";
        return exit_for(f.status);
    }
}
