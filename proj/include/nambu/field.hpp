#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "nambu/ad.hpp"
#include "nambu/expr.hpp"

namespace nambu {

using ParameterMap = std::map<std::string, double>;

/// An expression bound to an ordered coordinate frame and parameter values.
/// Immutable; safe to evaluate from several threads at once.
class ScalarField {
public:
    /// Parses `text` with identifiers resolved against `coords` and the keys
    /// of `params`.
    static ScalarField compile(std::string_view text, std::vector<std::string> coords, const ParameterMap& params);

    /// `expr` must have been parsed against `coords` and `param_names`.
    ScalarField(Expr expr, std::vector<std::string> coords, std::vector<std::string> param_names,
                std::vector<double> param_values);

    std::size_t dimension() const noexcept { return coords_.size(); }
    const std::vector<std::string>& coordinates() const noexcept { return coords_; }
    const Expr& expr() const noexcept { return expr_; }
    std::string text() const { return to_string(expr_); }
    const std::vector<std::string>& parameter_names() const noexcept { return param_names_; }
    const std::vector<double>& parameter_values() const noexcept { return param_values_; }

    double eval(std::span<const double> x) const;
    ADScalar eval_grad(std::span<const double> x) const;
    ADScalar eval_hess(std::span<const double> x) const;

    /// Raw jet of the given order (0, 1 or 2).
    Jet jet(std::span<const double> x, int order) const;

    /// The field evaluated on jets: coordinate i is replaced by inputs[i].
    Jet compose(std::span<const Jet> inputs) const;

private:
    void check_point(std::span<const double> x) const;

    Expr expr_;
    std::vector<std::string> coords_;
    std::vector<std::string> param_names_;
    std::vector<double> param_values_;
};

/// Default phase-space coordinate names q1..qn, p1..pn.
std::vector<std::string> canonical_coordinates(std::size_t n);

}  // namespace nambu
