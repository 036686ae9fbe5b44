#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nambu/field.hpp"

namespace nambu {

/// A point of the 2n-dimensional phase space, ordered (q^1..q^n, p_1..p_n).
class PhasePoint {
public:
    PhasePoint() = default;
    explicit PhasePoint(std::vector<double> x);

    std::size_t dof() const noexcept { return x_.size() / 2; }
    std::size_t size() const noexcept { return x_.size(); }
    double operator[](std::size_t i) const { return x_[i]; }
    double q(std::size_t i) const { return x_[i]; }
    double p(std::size_t i) const { return x_[dof() + i]; }
    std::span<const double> coords() const noexcept { return x_; }
    operator std::span<const double>() const noexcept { return x_; }  // NOLINT
    const std::vector<double>& vector() const noexcept { return x_; }

private:
    std::vector<double> x_;
};

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
};

enum class RelationKind {
    eq,     // {a, b} = rhs
    sq,     // {a, b}^2 = rhs
    value,  // a = rhs (functional dependence between constants)
};

/// Textual relation as declared in a system definition.
struct RelationDefinition {
    std::vector<std::string> lhs;  // two names for a bracket, one for a value
    std::string rhs;
    RelationKind kind = RelationKind::eq;
    double tolerance = 1e-8;
    // Squared identities normally report ERRATUM-SUSPECT rather than FAIL;
    // strict ones fail like any other relation.
    bool strict = false;
    bool absolute = false;  // judge the absolute rather than the relative residual
};

/// A named constant that is not one of the 2n-1 generators: either an
/// explicit expression in the coordinates or the bracket of two named
/// constants (e.g. B11 = {H1, A1}).
struct DerivedDefinition {
    std::string name;
    std::string expression;                            // set for expression-derived
    std::optional<std::array<std::string, 2>> bracket; // set for bracket-derived
};

/// String-level description of a system; mirrors the JSON file schema.
struct SystemDefinition {
    std::string name;
    std::size_t n = 0;
    std::vector<std::string> coordinates;  // empty: q1..qn, p1..pn
    ParameterMap parameters;
    std::string hamiltonian;
    std::vector<std::string> involutive;
    std::vector<std::string> additional;
    std::vector<std::string> constant_names;  // empty: H, H1.., A1..
    std::vector<Interval> sample_box;
    std::vector<std::string> exclusions;
    double exclusion_margin = 0.2;
    std::optional<std::string> gauge;
    std::vector<DerivedDefinition> derived;
    std::vector<RelationDefinition> relations;
};

struct AlgebraRelation {
    RelationDefinition definition;
    ScalarField rhs;  // compiled over the constant names as pseudo-coordinates
    std::string label;
};

struct DerivedConstant {
    std::string name;
    std::optional<ScalarField> field;
    std::optional<std::array<std::string, 2>> bracket;
};

/// A maximally superintegrable system: H, H_1..H_{n-1}, A_1..A_{n-1}.
/// Immutable after construction.
class SystemSpec {
public:
    /// Compiles every expression; throws ParseError / UnknownIdentifier /
    /// ConfigError on malformed definitions.
    explicit SystemSpec(SystemDefinition def);

    const std::string& name() const noexcept { return def_.name; }
    std::size_t dof() const noexcept { return def_.n; }
    std::size_t dimension() const noexcept { return 2 * def_.n; }
    const std::vector<std::string>& coordinates() const noexcept { return coordinates_; }
    const ParameterMap& parameters() const noexcept { return def_.parameters; }
    const SystemDefinition& definition() const noexcept { return def_; }

    /// H_k in the relabelled order H_0 = H, H_i (i < n), H_{n-1+i} = A_i.
    const std::vector<ScalarField>& constants() const noexcept { return constants_; }
    const ScalarField& constant(std::size_t k) const { return constants_.at(k); }
    const std::vector<std::string>& constant_names() const noexcept { return constant_names_; }
    const ScalarField& hamiltonian() const { return constants_.front(); }
    const ScalarField& involutive(std::size_t i) const { return constants_.at(1 + i); }  // H_{i+1}
    const ScalarField& additional(std::size_t i) const { return constants_.at(def_.n + i); }  // A_{i+1}

    const std::vector<Interval>& sample_box() const noexcept { return def_.sample_box; }
    const std::vector<ScalarField>& exclusions() const noexcept { return exclusions_; }
    double exclusion_margin() const noexcept { return def_.exclusion_margin; }
    const std::optional<ScalarField>& gauge() const noexcept { return gauge_; }
    const std::vector<DerivedConstant>& derived() const noexcept { return derived_; }
    const std::vector<AlgebraRelation>& relations() const noexcept { return relations_; }

    /// Names usable in relation right-hand sides: constants, then derived.
    std::vector<std::string> pseudo_coordinates() const;

    /// True when x satisfies every exclusion margin.
    bool admissible(std::span<const double> x) const;

private:
    SystemDefinition def_;
    std::vector<std::string> coordinates_;
    std::vector<std::string> constant_names_;
    std::vector<ScalarField> constants_;
    std::vector<ScalarField> exclusions_;
    std::optional<ScalarField> gauge_;
    std::vector<DerivedConstant> derived_;
    std::vector<AlgebraRelation> relations_;
};

std::string relation_label(const RelationDefinition& r);

}  // namespace nambu
