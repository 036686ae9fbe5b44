#include "nambu/system.hpp"

#include <cmath>
#include <set>

#include "nambu/error.hpp"

namespace nambu {

PhasePoint::PhasePoint(std::vector<double> x) : x_(std::move(x)) {
    if (x_.empty() || x_.size() % 2 != 0)
        throw DimensionMismatch("phase point must have even positive length, got " + std::to_string(x_.size()));
}

namespace {

std::vector<std::string> default_constant_names(std::size_t n) {
    std::vector<std::string> out{"H"};
    for (std::size_t i = 1; i < n; ++i) out.push_back("H" + std::to_string(i));
    for (std::size_t i = 1; i < n; ++i) out.push_back("A" + std::to_string(i));
    return out;
}

void require_unique(const std::vector<std::string>& names, const std::string& what) {
    std::set<std::string> seen;
    for (const auto& s : names)
        if (!seen.insert(s).second) throw ConfigError("duplicate " + what + " '" + s + "'");
}

bool uses_momenta(const Expr& e, std::size_t n) {
    switch (e.kind()) {
        case NodeKind::variable: return e.index() >= n;
        case NodeKind::number:
        case NodeKind::parameter: return false;
        case NodeKind::negate:
        case NodeKind::call: return uses_momenta(e.operand(), n);
        default: return uses_momenta(e.lhs(), n) || uses_momenta(e.rhs(), n);
    }
}

}  // namespace

std::string relation_label(const RelationDefinition& r) {
    std::string lhs;
    if (r.lhs.size() == 2)
        lhs = "{" + r.lhs[0] + "," + r.lhs[1] + "}";
    else if (r.lhs.size() == 1)
        lhs = r.lhs[0];
    if (r.kind == RelationKind::sq) lhs += "^2";
    return lhs + " = " + r.rhs;
}

SystemSpec::SystemSpec(SystemDefinition def) : def_(std::move(def)) {
    const std::size_t n = def_.n;
    if (n == 0) throw ConfigError("system '" + def_.name + "': n must be positive");

    coordinates_ = def_.coordinates.empty() ? canonical_coordinates(n) : def_.coordinates;
    if (coordinates_.size() != 2 * n)
        throw ConfigError("system '" + def_.name + "': expected " + std::to_string(2 * n) + " coordinates");
    require_unique(coordinates_, "coordinate");
    for (const auto& [p, v] : def_.parameters) {
        for (const auto& c : coordinates_)
            if (p == c) throw ConfigError("parameter '" + p + "' shadows a coordinate");
        if (!std::isfinite(v)) throw ConfigError("parameter '" + p + "' is not finite");
    }

    if (def_.involutive.size() != n - 1 || def_.additional.size() != n - 1)
        throw ConfigError("system '" + def_.name + "': need " + std::to_string(n - 1) +
                          " involutive and additional constants each (2n-1 in total)");

    auto compile = [&](const std::string& text) { return ScalarField::compile(text, coordinates_, def_.parameters); };
    constants_.push_back(compile(def_.hamiltonian));
    for (const auto& s : def_.involutive) constants_.push_back(compile(s));
    for (const auto& s : def_.additional) constants_.push_back(compile(s));

    constant_names_ = def_.constant_names.empty() ? default_constant_names(n) : def_.constant_names;
    if (constant_names_.size() != 2 * n - 1) throw ConfigError("constant_names must list 2n-1 names");

    if (def_.sample_box.empty()) def_.sample_box.assign(2 * n, Interval{-2.0, 2.0});
    if (def_.sample_box.size() != 2 * n) throw ConfigError("sample_box must have one interval per coordinate");
    for (const auto& iv : def_.sample_box)
        if (!(iv.lo < iv.hi)) throw ConfigError("sample_box interval with lo >= hi");
    if (!(def_.exclusion_margin >= 0.0)) throw ConfigError("exclusion margin must be non-negative");

    for (const auto& s : def_.exclusions) exclusions_.push_back(compile(s));
    if (def_.gauge) {
        gauge_ = compile(*def_.gauge);
        if (uses_momenta(gauge_->expr(), n)) throw ConfigError("gauge function may depend on positions only");
    }

    // Derived constants: expression-derived are fields, bracket-derived take
    // two names that must already be fields.
    std::set<std::string> fields(constant_names_.begin(), constant_names_.end());
    std::vector<std::string> all = constant_names_;
    for (const auto& d : def_.derived) {
        DerivedConstant dc{d.name, std::nullopt, std::nullopt};
        if (d.bracket) {
            for (const auto& op : *d.bracket)
                if (!fields.count(op))
                    throw ConfigError("derived constant '" + d.name + "': bracket operand '" + op +
                                      "' is not a constant or expression-derived constant");
            dc.bracket = d.bracket;
        } else {
            if (d.expression.empty()) throw ConfigError("derived constant '" + d.name + "' has no definition");
            dc.field = compile(d.expression);
            fields.insert(d.name);
        }
        all.push_back(d.name);
        derived_.push_back(std::move(dc));
    }
    require_unique(all, "constant name");
    for (const auto& name : all)
        if (def_.parameters.count(name)) throw ConfigError("constant name '" + name + "' shadows a parameter");

    std::set<std::string> known(all.begin(), all.end());
    for (const auto& r : def_.relations) {
        if (r.kind == RelationKind::value ? r.lhs.size() != 1 : r.lhs.size() != 2)
            throw ConfigError("relation '" + relation_label(r) + "': lhs must name two constants (one for value relations)");
        for (const auto& name : r.lhs)
            if (!known.count(name)) throw UnknownIdentifier(name);
        if (!(r.tolerance > 0.0)) throw ConfigError("relation tolerance must be positive");
        relations_.push_back({r, ScalarField::compile(r.rhs, all, def_.parameters), relation_label(r)});
    }
}

std::vector<std::string> SystemSpec::pseudo_coordinates() const {
    std::vector<std::string> out = constant_names_;
    for (const auto& d : derived_) out.push_back(d.name);
    return out;
}

bool SystemSpec::admissible(std::span<const double> x) const {
    for (const auto& e : exclusions_) {
        double v = 0.0;
        try {
            v = e.eval(x);
        } catch (const DomainError&) {
            return false;
        }
        if (!(std::abs(v) >= def_.exclusion_margin)) return false;
    }
    return true;
}

}  // namespace nambu
