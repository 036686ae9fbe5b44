#include "nambu/systems.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include "nambu/error.hpp"

namespace nambu {

namespace {

// Shared text fragments.
const std::string kT = "(p1^2 + p2^2)/(2*m)";
const std::string kR = "sqrt(q1^2 + q2^2)";
const std::string kL = "(p2*q1 - p1*q2)";

std::string sub(std::string text, const std::string& key, const std::string& value) {
    for (std::size_t pos = 0; (pos = text.find(key, pos)) != std::string::npos; pos += value.size())
        text.replace(pos, key.size(), value);
    return text;
}

// Substitutes the {T}, {r}, {L} placeholders.
std::string expand(const std::string& text) { return sub(sub(sub(text, "{T}", kT), "{r}", kR), "{L}", kL); }

RelationDefinition eq(std::string a, std::string b, std::string rhs, double tol = 1e-8) {
    return {{std::move(a), std::move(b)}, std::move(rhs), RelationKind::eq, tol, false, false};
}

RelationDefinition sq(std::string a, std::string b, std::string rhs, bool strict) {
    return {{std::move(a), std::move(b)}, std::move(rhs), RelationKind::sq, 1e-8, strict, false};
}

std::vector<Interval> box(std::size_t dim, double lo = -2.0, double hi = 2.0) { return std::vector<Interval>(dim, {lo, hi}); }

double require(const ParameterMap& p, const std::string& name) {
    auto it = p.find(name);
    if (it == p.end()) throw ConfigError("missing parameter '" + name + "'");
    return it->second;
}

void check_parameters(const std::string& system, const ParameterMap& given, const std::vector<std::string>& required) {
    for (const auto& r : required) require(given, r);
    for (const auto& [k, v] : given)
        if (std::find(required.begin(), required.end(), k) == required.end())
            throw ConfigError("system '" + system + "' has no parameter '" + k + "'");
}

SystemDefinition calogero_moser(const ParameterMap& params, const BuiltinOptions& opt) {
    check_parameters("calogero-moser", params, {"m", "g"});
    if (opt.variant != "A1" && opt.variant != "A1p")
        throw ConfigError("calogero-moser variant must be A1 or A1p, got '" + opt.variant + "'");
    const std::string h = "((p1^2 + p2^2)/(2*m) + g^2/(2*(q1 - q2)^2))";
    const std::string a1 = "(p1 + p2)/m";
    const std::string a1p = "(p1 - p2)^2/(2*m^2) + g^2/(m*(q1 - q2)^2)";

    SystemDefinition d;
    d.name = "calogero-moser";
    d.n = 2;
    d.parameters = params;
    d.hamiltonian = h;
    d.involutive = {"2*(q1 + q2)*" + h + " - (q1*p1 + q2*p2)*(p1 + p2)/m"};
    const bool primary = opt.variant == "A1";
    d.additional = {primary ? a1 : a1p};
    d.constant_names = {"H", "H1", primary ? "A1" : "A1p"};
    d.derived.push_back({primary ? "A1p" : "A1", primary ? a1p : a1, std::nullopt});
    d.derived.push_back({"B11p", "", std::array<std::string, 2>{"H1", "A1p"}});
    d.sample_box = box(4);
    d.exclusions = {"q1 - q2"};
    d.relations = {
        eq("H", "A1", "0"),
        eq("H", "A1p", "0"),
        eq("A1", "A1p", "0"),
        eq("H1", "A1", "2*A1p"),
        eq("H1", "A1p", "-2*A1*A1p"),
        eq("H1", "A1", "-A1^2 + 4/m*H"),
        {{"A1p"}, "(4*H - m*A1^2)/(2*m)", RelationKind::value, 1e-10, false, false},
        sq("H1", "A1p", "-8*A1p^3 + 16/m*A1p^2*H", true),
        eq("H1", "B11p", "-12*A1p^2 + 16/m*A1p*H"),
        eq("A1p", "B11p", "0"),
    };
    return d;
}

SystemDefinition landau(const ParameterMap& params, const BuiltinOptions& opt) {
    check_parameters("landau", params, {"m", "q", "c", "B"});
    ParameterMap p = params;
    const double m = require(p, "m"), q = require(p, "q"), c = require(p, "c"), b = require(p, "B");
    if (m == 0.0 || c == 0.0 || q == 0.0 || b == 0.0) throw ConfigError("landau: m, q, c and B must be nonzero");
    p["w"] = q * b / (m * c);

    const auto coords = canonical_coordinates(2);
    std::vector<std::string> names;
    for (const auto& [k, v] : p) names.push_back(k);
    const Expr chi = parse(opt.gauge, coords, names);
    const std::string a1 = "(-B*q2/2 + (" + to_string(derivative(chi, 0)) + "))";
    const std::string a2 = "(B*q1/2 + (" + to_string(derivative(chi, 1)) + "))";
    const std::string v1 = "((p1 - q/c*" + a1 + ")/m)";
    const std::string v2 = "((p2 - q/c*" + a2 + ")/m)";

    SystemDefinition d;
    d.name = "landau";
    d.n = 2;
    d.parameters = p;
    d.hamiltonian = "m*(" + v1 + "^2 + " + v2 + "^2)/2";
    d.involutive = {"m*(" + v2 + " + w*q1)"};
    d.additional = {"-m*(" + v1 + " - w*q2)"};
    d.gauge = opt.gauge;
    d.derived = {{"v1", v1, std::nullopt}, {"v2", v2, std::nullopt}};
    d.sample_box = box(4);
    RelationDefinition central = eq("H1", "A1", "-m*w", 1e-12);
    central.absolute = true;
    d.relations = {
        central,
        eq("v1", "H1", "0"),
        eq("v2", "H1", "0"),
        eq("v1", "A1", "0"),
        eq("v2", "A1", "0"),
        eq("v1", "v2", "q*B/(m^2*c)"),
    };
    return d;
}

SystemDefinition smorodinsky_winternitz(int j, const ParameterMap& params) {
    static const char* const names[4][4] = {{"m", "k", "alpha1", "beta1"},
                                            {"m", "omega", "alpha2", "beta2"},
                                            {"m", "kappa", "alpha3", "beta3"},
                                            {"m", "sigma", "alpha4", "beta4"}};
    const auto& pn = names[j - 1];
    const std::string sys = "sw" + std::to_string(j);
    check_parameters(sys, params, {pn[0], pn[1], pn[2], pn[3]});
    ParameterMap p = params;
    const double alpha = p.at(pn[2]), beta = p.at(pn[3]);
    if (p.at("m") == 0.0) throw ConfigError(sys + ": m must be nonzero");
    p["gp"] = alpha + beta;
    p["gm"] = alpha - beta;

    SystemDefinition d;
    d.name = sys;
    d.n = 2;
    d.parameters = p;
    d.sample_box = box(4);
    std::string h, h1, a1, b11, h1b, a1b, b2;
    switch (j) {
        case 1:
            h = "{T} + k*(q1^2 + q2^2)/2 + (alpha1/q1^2 + beta1/q2^2)/2";
            h1 = "p1^2/m + k*q1^2 + alpha1/q1^2";
            a1 = "{L}^2/m + (q1^2 + q2^2)*(alpha1/q1^2 + beta1/q2^2)";
            b11 = "-4/m*({L}*(p1*p2/m + k*q1*q2) - alpha1*q2*p2/q1^2 + beta1*q1*p1/q2^2)";
            h1b = "-8/m*(H1*(H1 - 2*H) + 2*k*(A1 - gp))";
            a1b = "16/m*(H1*A1 - H*A1 - gm*H)";
            b2 = "-16/m*(A1*(H1^2 - 2*H1*H + k*A1 - 2*gp*k) + 4*alpha1*H^2) + 16/m*gm*(2*H1*H - gm*k)";
            d.exclusions = {"q1", "q2"};
            break;
        case 2:
            h = "{T} + omega*(4*q1^2 + q2^2) + alpha2*q1 + beta2/q2^2";
            h1 = "p1^2/(2*m) + 4*omega*q1^2 + alpha2*q1";
            a1 = "2/m*{L}*p2 - q2^2*(4*omega*q1 + alpha2) + 4*beta2*q1/q2^2";
            b11 = "-2/m*q2*p2*(8*omega*q1 + alpha2) - 2*p1/m*(p2^2/m - 2*omega*q2^2 + 2*beta2/q2^2)";
            h1b = "4/m*(alpha2*H1 - 2*omega*A1 - alpha2*H)";
            a1b = "-16/m*(3*H1^2 - 4*H*H1 + H^2 + alpha2/4*A1 - 4*omega*beta2)";
            b2 = "8/m*(4*H1*(H1 - H)^2 + alpha2*A1*(H1 - H) - omega*A1^2 - beta2*(16*omega*H1 + alpha2^2))";
            d.exclusions = {"q2"};
            break;
        case 3:
            h = "{T} + (kappa + alpha3/({r} + q1) + beta3/({r} - q1))/(2*{r})";
            h1 = "{L}^2/m + {r}*(alpha3/({r} + q1) + beta3/({r} - q1))";
            // Sign-corrected second and third terms; see the registry notes in the README.
            a1 = "{L}/m*p2 - (alpha3*({r} - q1)/({r} + q1) - beta3*({r} + q1)/({r} - q1) - kappa*q1)/(2*{r})";
            b11 = "-2*p1*{L}^2/m^2 + 2*q2*{L}/(m*{r})*(kappa/2 + alpha3/({r} + q1) + beta3/({r} - q1))"
                  " + q2^2/(m*{r})*(q1*p1 + q2*p2)*(alpha3/({r} + q1)^2 - beta3/({r} - q1)^2)";
            h1b = "-1/m*(4*H1*A1 - kappa*gm)";
            a1b = "2/m*(A1^2 - 2*H*(2*H1 - gp) - kappa^2/4)";
            b2 = "-1/m*(H1*(4*A1^2 - 8*H1*H + 8*gp*H - kappa^2) - 2*gm*(kappa*A1 + gm*H) + kappa^2*gp)";
            d.exclusions = {"{r} + q1", "{r} - q1"};
            break;
        case 4:
            h = "{T} + (sigma + alpha4*sqrt({r} + q1) + beta4*sqrt({r} - q1))/(2*{r})";
            // H1: sigma*q1 (not q2) and an overall sign, otherwise {H,H1} != 0
            h1 = "-((sigma*q1 - alpha4*({r} - q1)*sqrt({r} + q1) + beta4*({r} + q1)*sqrt({r} - q1))/(2*{r}) + {L}/m*p2)";
            a1 = "-q1/(2*{r})*(alpha4*sqrt({r} - q1) - beta4*sqrt({r} + q1)) + {L}/m*p1 - sigma*q2/(2*{r})";
            h1b = "2/m*(H*A1 - alpha4*beta4/4)";
            a1b = "-2/m*(H1*H - gp*gm/8)";
            b2 = "1/m*(H1*(2*H*H1 - gp*gm/2) + A1*(2*H*A1 - alpha4*beta4) - sigma/2*(H + (alpha4^2 + beta4^2)/2))";
            // A1 uses sqrt(r+q1)*sqrt(r-q1) = q2: upper half-plane only
            d.sample_box[1] = {0.0, 2.0};
            d.exclusions = {"{r} + q1", "{r} - q1", "q2"};
            break;
        default: throw ConfigError("no such Smorodinsky-Winternitz system");
    }
    d.hamiltonian = expand(h);
    d.involutive = {expand(h1)};
    d.additional = {expand(a1)};
    for (auto& e : d.exclusions) e = expand(e);
    if (j == 4)
        d.derived = {{"B11", "", std::array<std::string, 2>{"H1", "A1"}}};
    else
        d.derived = {{"B11", expand(b11), std::nullopt}};
    if (j != 4) d.relations.push_back(eq("H1", "A1", "B11"));
    d.relations.push_back(eq("B11", "H", "0"));
    d.relations.push_back(eq("H1", "B11", h1b));
    d.relations.push_back(eq("A1", "B11", a1b));
    d.relations.push_back(sq("H1", "A1", b2, false));
    return d;
}

std::string point_text(std::span<const double> x) { return format_point(x); }

double bracket_magnitude(std::span<const double> df, std::span<const double> dg) {
    const std::size_t n = df.size() / 2;
    double s = 0.0;
    for (std::size_t j = 0; j < n; ++j) s += std::abs(df[j] * dg[n + j]) + std::abs(df[n + j] * dg[j]);
    return s;
}

std::size_t pseudo_index(const SystemSpec& sys, const std::string& name) {
    const auto names = sys.pseudo_coordinates();
    auto it = std::find(names.begin(), names.end(), name);
    if (it == names.end()) throw UnknownIdentifier(name);
    return static_cast<std::size_t>(it - names.begin());
}

}  // namespace

std::string format_point(std::span<const double> x) {
    std::ostringstream os;
    os.precision(17);
    os << '(';
    for (std::size_t i = 0; i < x.size(); ++i) os << (i ? ", " : "") << x[i];
    os << ')';
    return os.str();
}

std::vector<std::string> builtin_names() { return {"calogero-moser", "landau", "sw1", "sw2", "sw3", "sw4"}; }

std::string canonical_builtin_name(std::string_view name) {
    if (name == "cm") return "calogero-moser";
    for (const auto& n : builtin_names())
        if (n == name) return n;
    throw ConfigError("unknown system '" + std::string(name) + "'");
}

ParameterMap builtin_defaults(std::string_view name) {
    const std::string n = canonical_builtin_name(name);
    if (n == "calogero-moser") return {{"m", 1.0}, {"g", 1.0}};
    if (n == "landau") return {{"m", 1.0}, {"q", 1.0}, {"c", 1.0}, {"B", 1.0}};
    if (n == "sw1") return {{"m", 1.0}, {"k", 0.8}, {"alpha1", 0.5}, {"beta1", 0.3}};
    if (n == "sw2") return {{"m", 1.0}, {"omega", 0.6}, {"alpha2", 0.4}, {"beta2", 0.7}};
    if (n == "sw3") return {{"m", 1.0}, {"kappa", 1.1}, {"alpha3", 0.6}, {"beta3", 0.2}};
    return {{"m", 1.0}, {"sigma", 0.9}, {"alpha4", 0.5}, {"beta4", 0.8}};
}

SystemDefinition builtin_definition(std::string_view name, const ParameterMap& params, const BuiltinOptions& opt) {
    const std::string n = canonical_builtin_name(name);
    if (n == "calogero-moser") return calogero_moser(params, opt);
    if (n == "landau") return landau(params, opt);
    return smorodinsky_winternitz(n.back() - '0', params);
}

SystemSpec builtin(std::string_view name, const ParameterMap& params, const BuiltinOptions& opt) {
    return SystemSpec(builtin_definition(name, params, opt));
}

// -- JSON ----------------------------------------------------------------------

SystemDefinition definition_from_json(const nlohmann::json& j) {
    using nlohmann::json;
    try {
        if (!j.is_object()) throw ConfigError("system definition must be a JSON object");
        for (const char* key : {"name", "n", "hamiltonian", "involutive", "additional"})
            if (!j.contains(key)) throw ConfigError(std::string("system definition lacks '") + key + "'");
        SystemDefinition d;
        d.name = j.at("name").get<std::string>();
        const auto n = j.at("n").get<long long>();
        if (n < 1) throw ConfigError("n must be a positive integer");
        d.n = static_cast<std::size_t>(n);
        if (j.contains("coordinates")) d.coordinates = j.at("coordinates").get<std::vector<std::string>>();
        if (j.contains("parameters")) d.parameters = j.at("parameters").get<ParameterMap>();
        d.hamiltonian = j.at("hamiltonian").get<std::string>();
        d.involutive = j.at("involutive").get<std::vector<std::string>>();
        d.additional = j.at("additional").get<std::vector<std::string>>();
        if (j.contains("constant_names")) d.constant_names = j.at("constant_names").get<std::vector<std::string>>();
        if (j.contains("sample_box")) {
            for (const auto& iv : j.at("sample_box")) {
                const auto v = iv.get<std::vector<double>>();
                if (v.size() != 2) throw ConfigError("sample_box entries must be [lo, hi] pairs");
                d.sample_box.push_back({v[0], v[1]});
            }
        }
        if (j.contains("exclusions")) d.exclusions = j.at("exclusions").get<std::vector<std::string>>();
        if (j.contains("exclusion_margin")) d.exclusion_margin = j.at("exclusion_margin").get<double>();
        if (j.contains("gauge")) d.gauge = j.at("gauge").get<std::string>();
        if (j.contains("derived")) {
            for (const auto& e : j.at("derived")) {
                DerivedDefinition dd;
                dd.name = e.at("name").get<std::string>();
                if (e.contains("bracket")) {
                    const auto b = e.at("bracket").get<std::vector<std::string>>();
                    if (b.size() != 2) throw ConfigError("derived bracket must name two constants");
                    dd.bracket = std::array<std::string, 2>{b[0], b[1]};
                } else {
                    dd.expression = e.at("expression").get<std::string>();
                }
                d.derived.push_back(std::move(dd));
            }
        }
        if (j.contains("relations")) {
            for (const auto& e : j.at("relations")) {
                RelationDefinition r;
                r.lhs = e.at("lhs").get<std::vector<std::string>>();
                r.rhs = e.at("rhs").get<std::string>();
                const std::string kind = e.value("kind", std::string("eq"));
                if (kind == "eq")
                    r.kind = RelationKind::eq;
                else if (kind == "sq")
                    r.kind = RelationKind::sq;
                else if (kind == "value")
                    r.kind = RelationKind::value;
                else
                    throw ConfigError("relation kind must be eq, sq or value, got '" + kind + "'");
                r.tolerance = e.value("tolerance", 1e-8);
                r.strict = e.value("strict", false);
                r.absolute = e.value("absolute", false);
                d.relations.push_back(std::move(r));
            }
        }
        return d;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("system definition schema: ") + e.what());
    }
}

nlohmann::json definition_to_json(const SystemDefinition& d) {
    nlohmann::json j{{"name", d.name},
                     {"n", d.n},
                     {"parameters", d.parameters},
                     {"hamiltonian", d.hamiltonian},
                     {"involutive", d.involutive},
                     {"additional", d.additional}};
    if (!d.coordinates.empty()) j["coordinates"] = d.coordinates;
    if (!d.constant_names.empty()) j["constant_names"] = d.constant_names;
    if (!d.sample_box.empty()) {
        auto& b = j["sample_box"] = nlohmann::json::array();
        for (const auto& iv : d.sample_box) b.push_back({iv.lo, iv.hi});
    }
    if (!d.exclusions.empty()) j["exclusions"] = d.exclusions;
    j["exclusion_margin"] = d.exclusion_margin;
    if (d.gauge) j["gauge"] = *d.gauge;
    if (!d.derived.empty()) {
        auto& arr = j["derived"] = nlohmann::json::array();
        for (const auto& e : d.derived) {
            nlohmann::json o{{"name", e.name}};
            if (e.bracket)
                o["bracket"] = {(*e.bracket)[0], (*e.bracket)[1]};
            else
                o["expression"] = e.expression;
            arr.push_back(std::move(o));
        }
    }
    if (!d.relations.empty()) {
        auto& arr = j["relations"] = nlohmann::json::array();
        for (const auto& r : d.relations) {
            const char* kind = r.kind == RelationKind::eq ? "eq" : r.kind == RelationKind::sq ? "sq" : "value";
            arr.push_back({{"lhs", r.lhs},
                           {"rhs", r.rhs},
                           {"kind", kind},
                           {"tolerance", r.tolerance},
                           {"strict", r.strict},
                           {"absolute", r.absolute}});
        }
    }
    return j;
}

SystemSpec load_text(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(std::string("system definition is not valid JSON: ") + e.what());
    }
    SystemSpec sys(definition_from_json(j));
    for (const auto& x : sample_points(sys, 10, 42)) {
        std::string which;
        const double r = defining_relations_residual(sys, x, &which);
        if (!(r <= 1e-9))
            throw RelationViolation("system '" + sys.name() + "': " + which + " does not vanish (relative residual " +
                                    std::to_string(r) + ") at x = " + point_text(x));
    }
    return sys;
}

SystemSpec load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot read system file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return load_text(ss.str());
}

// -- sampling ---------------------------------------------------------------

double unit_uniform(std::uint64_t bits) noexcept { return static_cast<double>(bits >> 11) * 0x1.0p-53; }

std::vector<PhasePoint> sample_points(const SystemSpec& sys, std::size_t count, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<PhasePoint> out;
    const auto& boxv = sys.sample_box();
    const std::size_t limit = 1000 * count + 1000;
    for (std::size_t attempt = 0; out.size() < count; ++attempt) {
        if (attempt >= limit)
            throw ConfigError("system '" + sys.name() + "': sample box leaves too few admissible points");
        std::vector<double> x(boxv.size());
        for (std::size_t i = 0; i < x.size(); ++i) x[i] = boxv[i].lo + (boxv[i].hi - boxv[i].lo) * unit_uniform(rng());
        if (!sys.admissible(x)) continue;
        try {
            for (const auto& c : sys.constants()) (void)c.jet(x, 2);
            for (const auto& d : sys.derived())
                if (d.field) (void)d.field->jet(x, 2);
        } catch (const DomainError&) {
            continue;
        }
        out.emplace_back(std::move(x));
    }
    return out;
}

// -- algebra ----------------------------------------------------------------

std::vector<Jet> pseudo_jets(const SystemSpec& sys, std::span<const double> x) {
    std::vector<Jet> out;
    std::map<std::string, Jet> second;  // order-2 jets of the fields, for derived brackets
    auto order2 = [&](const std::string& name) -> const Jet& {
        auto it = second.find(name);
        if (it != second.end()) return it->second;
        const auto& names = sys.constant_names();
        auto c = std::find(names.begin(), names.end(), name);
        if (c != names.end()) return second[name] = sys.constant(static_cast<std::size_t>(c - names.begin())).jet(x, 2);
        for (const auto& d : sys.derived())
            if (d.name == name && d.field) return second[name] = d.field->jet(x, 2);
        throw UnknownIdentifier(name);
    };
    for (const auto& c : sys.constants()) out.push_back(c.jet(x, 1));
    for (const auto& d : sys.derived()) {
        if (d.field)
            out.push_back(d.field->jet(x, 1));
        else
            out.push_back(poisson_bracket(order2((*d.bracket)[0]), order2((*d.bracket)[1])));
    }
    return out;
}

double defining_relations_residual(const SystemSpec& sys, const PhasePoint& x, std::string* which) {
    const std::size_t n = sys.dof();
    std::vector<std::vector<double>> g;
    for (const auto& c : sys.constants()) g.push_back(c.eval_grad(x).gradient);
    const auto& names = sys.constant_names();
    double worst = 0.0;
    auto consider = [&](std::size_t a, std::size_t b) {
        const double v = poisson_bracket(g[a], g[b]);
        const double r = std::abs(v) / (bracket_magnitude(g[a], g[b]) + 1.0);
        if (!(r <= worst)) {
            worst = std::isnan(r) ? INFINITY : r;
            if (which) *which = "{" + names[a] + "," + names[b] + "}";
        }
    };
    for (std::size_t i = 1; i < 2 * n - 1; ++i) consider(0, i);  // {H, H_i}, {H, A_i}
    for (std::size_t i = 1; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) consider(i, j);
    return worst;
}

Residual relation_residual(const SystemSpec& sys, const AlgebraRelation& r, const PhasePoint& x) {
    const auto jets = pseudo_jets(sys, x);
    std::vector<double> values;
    for (const auto& j : jets) values.push_back(j.v);
    const double rhs = r.rhs.eval(values);
    const auto& def = r.definition;
    double lhs = 0.0;
    if (def.kind == RelationKind::value) {
        lhs = values[pseudo_index(sys, def.lhs[0])];
    } else {
        const Jet& a = jets[pseudo_index(sys, def.lhs[0])];
        const Jet& b = jets[pseudo_index(sys, def.lhs[1])];
        std::vector<double> ga = a.order >= 1 ? a.g : std::vector<double>(sys.dimension(), 0.0);
        std::vector<double> gb = b.order >= 1 ? b.g : std::vector<double>(sys.dimension(), 0.0);
        lhs = poisson_bracket(ga, gb);
        if (def.kind == RelationKind::sq) lhs *= lhs;
    }
    return {std::abs(lhs - rhs), std::abs(lhs) + std::abs(rhs) + 1.0};
}

std::vector<CheckRecord> algebra_records(const SystemSpec& sys, const std::vector<PhasePoint>& points) {
    std::vector<CheckRecord> out;
    for (const auto& r : sys.relations()) {
        CheckRecord rec;
        rec.id = "relation:" + r.label;
        rec.reference = r.label;
        rec.tolerance = r.definition.tolerance;
        rec.absolute = r.definition.absolute;
        rec.suspect_ok = r.definition.kind == RelationKind::sq && !r.definition.strict;
        for (const auto& x : points) {
            try {
                const Residual res = relation_residual(sys, r, x);
                rec.add(res.absolute, res.relative());
            } catch (const DomainError& e) {
                throw DomainError(std::string(e.what()) + " while checking " + r.label + " at x = " + point_text(x));
            }
        }
        rec.finish();
        out.push_back(std::move(rec));
    }
    return out;
}

VerificationReport verify_algebra(const SystemSpec& sys, const std::vector<PhasePoint>& points) {
    VerificationReport rep;
    rep.system = sys.name();
    rep.parameters = sys.parameters();
    rep.samples = points.size();
    rep.records = algebra_records(sys, points);
    return rep;
}

Residual structure_relation_residual(const SystemSpec& sys, const ScalarField& r, std::string_view x_expr,
                                     const PhasePoint& x) {
    const ScalarField xf = ScalarField::compile(x_expr, sys.pseudo_coordinates(), sys.parameters());
    const auto jets = pseudo_jets(sys, x);
    const auto dr = r.eval_grad(x).gradient;

    // Direct route: X(c(x)) differentiated through the composition.
    const Jet composed = xf.compose(jets);
    const double direct = composed.order >= 1 ? poisson_bracket(dr, composed.g) : 0.0;

    // Expansion: sum_i {R, c_i} dX/dc_i.
    std::vector<double> values;
    for (const auto& j : jets) values.push_back(j.v);
    const auto dx = xf.eval_grad(values).gradient;
    double expansion = 0.0, mag = 0.0;
    for (std::size_t i = 0; i < jets.size(); ++i) {
        if (jets[i].order == 0 || dx[i] == 0.0) continue;
        const double t = poisson_bracket(dr, jets[i].g) * dx[i];
        expansion += t;
        mag += std::abs(t);
    }
    return {std::abs(direct - expansion), std::abs(direct) + mag + 1.0};
}

ScalarField cm_trivializing_constant(const ParameterMap& params) {
    check_parameters("calogero-moser", params, {"m", "g"});
    const std::string h = "(2*sqrt(((p1^2 + p2^2)/(2*m) + g^2/(2*(q1 - q2)^2))/m))";
    const std::string a1 = "((p1 + p2)/m)";
    return ScalarField::compile("1/(2*" + h + ")*ln((" + h + " - " + a1 + ")/(" + h + " + " + a1 + "))",
                                canonical_coordinates(2), params);
}

}  // namespace nambu
