#pragma once

// Scalar expression trees over phase coordinates and named parameters.
//
// Grammar (whitespace insignificant):
//   expr   := term (("+"|"-") term)*
//   term   := factor (("*"|"/") factor)*
//   factor := "-" factor | power
//   power  := atom ("^" factor)?
//   atom   := NUMBER | IDENT | IDENT "(" expr ("," expr)* ")" | "(" expr ")"
//
// so ^ binds tighter than unary minus, which binds tighter than * and /;
// ^ is right-associative ("a^b^c" is a^(b^c), "-x^2" is -(x^2)).

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace nambu {

enum class NodeKind {
    number,
    variable,
    parameter,
    negate,
    add,
    subtract,
    multiply,
    divide,
    power,
    call,
};

enum class Function { sqrt, ln, exp, sin, cos };

std::string_view function_name(Function f) noexcept;

/// Immutable expression node handle. Copies share structure.
class Expr {
public:
    static Expr number(double value);
    /// Reference to coordinate `index` of the frame the expression was parsed in.
    static Expr variable(std::size_t index, std::string name);
    static Expr parameter(std::size_t index, std::string name);
    static Expr negate(Expr operand);
    static Expr binary(NodeKind op, Expr lhs, Expr rhs);
    static Expr call(Function f, Expr argument);

    NodeKind kind() const noexcept;
    double value() const;                // number
    std::size_t index() const;           // variable, parameter
    const std::string& name() const;     // variable, parameter
    Function function() const;           // call
    const Expr& operand() const;         // negate, call
    const Expr& lhs() const;             // binary
    const Expr& rhs() const;             // binary

    bool is_binary() const noexcept;

    /// Structural identity (same shape, same literals bitwise, same references).
    friend bool operator==(const Expr& a, const Expr& b);

private:
    struct Node;
    explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
    std::shared_ptr<const Node> node_;
};

/// Parses `text`. Identifiers resolve first to `coords`, then to `params`;
/// an identifier followed by "(" names one of sqrt, ln, exp, sin, cos.
/// Throws ParseError (with byte offset) or UnknownIdentifier.
Expr parse(std::string_view text,
           std::span<const std::string> coords,
           std::span<const std::string> params);

/// Minimal-parenthesis rendering; parse(to_string(e)) == e.
std::string to_string(const Expr& e);

/// True when the expression references at least one coordinate.
bool depends_on_coordinates(const Expr& e);

/// Symbolic partial derivative with respect to coordinate `index`, with
/// light constant folding. Only used to build gauge-shifted potentials.
Expr derivative(const Expr& e, std::size_t index);

}  // namespace nambu
