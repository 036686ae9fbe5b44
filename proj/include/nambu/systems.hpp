#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "nambu/brackets.hpp"
#include "nambu/report.hpp"
#include "nambu/system.hpp"

namespace nambu {

// -- registry ----------------------------------------------------------------

struct BuiltinOptions {
    std::string gauge = "0";     // landau: chi(q1, q2)
    std::string variant = "A1";  // calogero-moser: third constant A1 or A1p
};

/// calogero-moser (alias cm), landau, sw1, sw2, sw3, sw4.
std::vector<std::string> builtin_names();
/// Canonical name for a builtin or alias; ConfigError when unknown.
std::string canonical_builtin_name(std::string_view name);
/// Parameter values used by the CLI when none are given.
ParameterMap builtin_defaults(std::string_view name);
/// Every required parameter must be present; unknown ones are rejected.
SystemDefinition builtin_definition(std::string_view name, const ParameterMap& params, const BuiltinOptions& opt = {});
SystemSpec builtin(std::string_view name, const ParameterMap& params, const BuiltinOptions& opt = {});

// -- files -------------------------------------------------------------------

SystemDefinition definition_from_json(const nlohmann::json& j);
nlohmann::json definition_to_json(const SystemDefinition& def);

/// Parses, compiles and spot-checks the defining relations at 10 points.
/// RelationViolation names the bracket and the point.
SystemSpec load(const std::string& path);
SystemSpec load_text(const std::string& json_text);

// -- sampling ----------------------------------------------------------------

/// Uniform points in the sample box that clear every exclusion margin and at
/// which all constants evaluate. Sequential, so a seed fixes the sequence.
std::vector<PhasePoint> sample_points(const SystemSpec& sys, std::size_t count, std::uint64_t seed);

/// Uniform double in [0, 1) from 53 random bits.
double unit_uniform(std::uint64_t bits) noexcept;

// -- algebra -----------------------------------------------------------------

/// Values and first-order jets of the pseudo-coordinates (constants, then derived) at x.
std::vector<Jet> pseudo_jets(const SystemSpec& sys, std::span<const double> x);

/// Largest relative residual of the vanishing brackets {H,H_i}, {H_i,H_j}, {H,A_i}
/// at x; `which` receives the offending bracket.
double defining_relations_residual(const SystemSpec& sys, const PhasePoint& x, std::string* which = nullptr);

/// Residual of one algebra relation at x.
Residual relation_residual(const SystemSpec& sys, const AlgebraRelation& r, const PhasePoint& x);

VerificationReport verify_algebra(const SystemSpec& sys, const std::vector<PhasePoint>& points);
/// The per-relation records alone.
std::vector<CheckRecord> algebra_records(const SystemSpec& sys, const std::vector<PhasePoint>& points);

/// {R, X} against sum_i {R, c_i} dX/dc_i, where X is an expression in the
/// pseudo-coordinates c_i.
Residual structure_relation_residual(const SystemSpec& sys, const ScalarField& r, std::string_view x_expr,
                                     const PhasePoint& x);

/// A'' = (1/2h) ln((h - A1)/(h + A1)), h = 2 sqrt(H/m), for calogero-moser.
ScalarField cm_trivializing_constant(const ParameterMap& params);

/// Point text for diagnostics: "(x1, x2, ...)".
std::string format_point(std::span<const double> x);

}  // namespace nambu
