#include "nambu/field.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "nambu/error.hpp"

namespace nambu {

namespace {

[[noreturn]] void domain_fail(const std::string& what, const Expr& at) {
    throw DomainError(what + " in '" + to_string(at) + "'");
}

bool is_integer(double c) { return std::isfinite(c) && std::floor(c) == c; }

struct Evaluator {
    std::span<const double> x;
    std::span<const double> params;
    int order;
    std::span<const Jet> inputs = {};  // when set, variables read these jets instead of x

    Jet operator()(const Expr& e) const {
        switch (e.kind()) {
            case NodeKind::number: return Jet(e.value());
            case NodeKind::parameter: return Jet(params[e.index()]);
            case NodeKind::variable:
                if (!inputs.empty()) return inputs[e.index()];
                if (order == 0) return Jet(x[e.index()]);
                return Jet::variable(x[e.index()], e.index(), x.size(), order);
            case NodeKind::negate: return -(*this)(e.operand());
            case NodeKind::add: return (*this)(e.lhs()) + (*this)(e.rhs());
            case NodeKind::subtract: return (*this)(e.lhs()) - (*this)(e.rhs());
            case NodeKind::multiply: return (*this)(e.lhs()) * (*this)(e.rhs());
            case NodeKind::divide: {
                Jet num = (*this)(e.lhs());
                Jet den = (*this)(e.rhs());
                if (den.v == 0.0) domain_fail("division by zero", e);
                return num / den;
            }
            case NodeKind::power: return power(e);
            case NodeKind::call: return call(e);
        }
        throw std::logic_error("unhandled expression node");
    }

    Jet power(const Expr& e) const {
        Jet base = (*this)(e.lhs());
        Jet expo = (*this)(e.rhs());
        const double u = base.v;
        if (expo.order == 0) {
            const double c = expo.v;
            if (!is_integer(c) && u < 0.0) domain_fail("non-integer power of a negative base", e);
            if (u == 0.0 && c < 0.0) domain_fail("division by zero", e);
            if (base.order == 0) return Jet(std::pow(u, c));
            // Derivative coefficients vanish identically for c in {0, 1};
            // avoid evaluating 0^(negative) for them.
            const double f1 = c == 0.0 ? 0.0 : c * std::pow(u, c - 1.0);
            const double f2 = (c == 0.0 || c == 1.0) ? 0.0 : c * (c - 1.0) * std::pow(u, c - 2.0);
            if (!std::isfinite(f1) || (order >= 2 && !std::isfinite(f2)))
                domain_fail("singular derivative of power at zero", e);
            return chain(base, std::pow(u, c), f1, f2);
        }
        if (u <= 0.0) domain_fail("variable exponent requires a positive base", e);
        const double l = std::log(u);
        return chain(expo * chain(base, l, 1.0 / u, -1.0 / (u * u)), std::pow(u, expo.v), std::pow(u, expo.v),
                     std::pow(u, expo.v));
    }

    Jet call(const Expr& e) const {
        Jet a = (*this)(e.operand());
        const double u = a.v;
        switch (e.function()) {
            case Function::sqrt: {
                if (u < 0.0) domain_fail("sqrt of a negative value", e);
                const double s = std::sqrt(u);
                if (a.order == 0) return Jet(s);
                if (u == 0.0) domain_fail("singular derivative of sqrt at zero", e);
                return chain(a, s, 0.5 / s, -0.25 / (s * u));
            }
            case Function::ln:
                if (u <= 0.0) domain_fail("ln of a non-positive value", e);
                return chain(a, std::log(u), 1.0 / u, -1.0 / (u * u));
            case Function::exp: {
                const double v = std::exp(u);
                return chain(a, v, v, v);
            }
            case Function::sin: return chain(a, std::sin(u), std::cos(u), -std::sin(u));
            case Function::cos: return chain(a, std::cos(u), -std::sin(u), -std::cos(u));
        }
        throw std::logic_error("unhandled function");
    }
};

}  // namespace

ScalarField ScalarField::compile(std::string_view text, std::vector<std::string> coords, const ParameterMap& params) {
    std::vector<std::string> names;
    std::vector<double> values;
    for (const auto& [k, v] : params) {
        names.push_back(k);
        values.push_back(v);
    }
    Expr e = parse(text, coords, names);
    return ScalarField(std::move(e), std::move(coords), std::move(names), std::move(values));
}

ScalarField::ScalarField(Expr expr, std::vector<std::string> coords, std::vector<std::string> param_names,
                         std::vector<double> param_values)
    : expr_(std::move(expr)),
      coords_(std::move(coords)),
      param_names_(std::move(param_names)),
      param_values_(std::move(param_values)) {
    if (param_names_.size() != param_values_.size())
        throw std::invalid_argument("ScalarField: parameter names and values differ in length");
    std::function<void(const Expr&)> check = [&](const Expr& e) {
        switch (e.kind()) {
            case NodeKind::variable:
                if (e.index() >= coords_.size() || coords_[e.index()] != e.name()) throw UnknownIdentifier(e.name());
                break;
            case NodeKind::parameter:
                if (e.index() >= param_names_.size() || param_names_[e.index()] != e.name())
                    throw UnknownIdentifier(e.name());
                break;
            case NodeKind::number: break;
            case NodeKind::negate:
            case NodeKind::call: check(e.operand()); break;
            default:
                check(e.lhs());
                check(e.rhs());
        }
    };
    check(expr_);
}

void ScalarField::check_point(std::span<const double> x) const {
    if (x.size() != coords_.size())
        throw DimensionMismatch("field of dimension " + std::to_string(coords_.size()) + " evaluated at a point of length " +
                                std::to_string(x.size()));
}

Jet ScalarField::jet(std::span<const double> x, int order) const {
    check_point(x);
    return Evaluator{x, param_values_, order}(expr_);
}

Jet ScalarField::compose(std::span<const Jet> inputs) const {
    if (inputs.size() != coords_.size())
        throw DimensionMismatch("field of dimension " + std::to_string(coords_.size()) + " composed with " +
                                std::to_string(inputs.size()) + " inputs");
    int order = 0;
    for (const auto& j : inputs) order = std::max(order, j.order);
    return Evaluator{{}, param_values_, order, inputs}(expr_);
}

double ScalarField::eval(std::span<const double> x) const { return jet(x, 0).v; }

ADScalar ScalarField::eval_grad(std::span<const double> x) const { return to_ad_scalar(jet(x, 1), dimension(), 1); }

ADScalar ScalarField::eval_hess(std::span<const double> x) const { return to_ad_scalar(jet(x, 2), dimension(), 2); }

std::vector<std::string> canonical_coordinates(std::size_t n) {
    std::vector<std::string> out;
    for (std::size_t i = 1; i <= n; ++i) out.push_back("q" + std::to_string(i));
    for (std::size_t i = 1; i <= n; ++i) out.push_back("p" + std::to_string(i));
    return out;
}

}  // namespace nambu
