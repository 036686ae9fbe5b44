#include "nambu/expr.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstring>
#include <optional>
#include <set>

#include "nambu/error.hpp"

namespace nambu {

struct Expr::Node {
    NodeKind kind;
    double value = 0.0;
    std::size_t index = 0;
    std::string name;
    Function function = Function::sqrt;
    std::vector<Expr> children;
};

std::string_view function_name(Function f) noexcept {
    switch (f) {
        case Function::sqrt: return "sqrt";
        case Function::ln: return "ln";
        case Function::exp: return "exp";
        case Function::sin: return "sin";
        case Function::cos: return "cos";
    }
    return "?";
}

Expr Expr::number(double value) {
    auto n = std::make_shared<Node>();
    n->kind = NodeKind::number;
    n->value = value;
    return Expr(std::move(n));
}

Expr Expr::variable(std::size_t index, std::string name) {
    auto n = std::make_shared<Node>();
    n->kind = NodeKind::variable;
    n->index = index;
    n->name = std::move(name);
    return Expr(std::move(n));
}

Expr Expr::parameter(std::size_t index, std::string name) {
    auto n = std::make_shared<Node>();
    n->kind = NodeKind::parameter;
    n->index = index;
    n->name = std::move(name);
    return Expr(std::move(n));
}

Expr Expr::negate(Expr operand) {
    auto n = std::make_shared<Node>();
    n->kind = NodeKind::negate;
    n->children.push_back(std::move(operand));
    return Expr(std::move(n));
}

Expr Expr::binary(NodeKind op, Expr lhs, Expr rhs) {
    auto n = std::make_shared<Node>();
    n->kind = op;
    n->children.push_back(std::move(lhs));
    n->children.push_back(std::move(rhs));
    Expr e(std::move(n));
    if (!e.is_binary()) throw std::invalid_argument("Expr::binary: not a binary operator");
    return e;
}

Expr Expr::call(Function f, Expr argument) {
    auto n = std::make_shared<Node>();
    n->kind = NodeKind::call;
    n->function = f;
    n->children.push_back(std::move(argument));
    return Expr(std::move(n));
}

NodeKind Expr::kind() const noexcept { return node_->kind; }
double Expr::value() const { return node_->value; }
std::size_t Expr::index() const { return node_->index; }
const std::string& Expr::name() const { return node_->name; }
Function Expr::function() const { return node_->function; }

const Expr& Expr::operand() const { return node_->children.at(0); }
const Expr& Expr::lhs() const { return node_->children.at(0); }
const Expr& Expr::rhs() const { return node_->children.at(1); }

bool Expr::is_binary() const noexcept {
    switch (node_->kind) {
        case NodeKind::add:
        case NodeKind::subtract:
        case NodeKind::multiply:
        case NodeKind::divide:
        case NodeKind::power: return true;
        default: return false;
    }
}

bool operator==(const Expr& a, const Expr& b) {
    if (a.node_ == b.node_) return true;
    if (a.kind() != b.kind()) return false;
    switch (a.kind()) {
        case NodeKind::number:
            return std::memcmp(&a.node_->value, &b.node_->value, sizeof(double)) == 0;
        case NodeKind::variable:
        case NodeKind::parameter:
            return a.index() == b.index() && a.name() == b.name();
        case NodeKind::negate: return a.operand() == b.operand();
        case NodeKind::call: return a.function() == b.function() && a.operand() == b.operand();
        default: return a.lhs() == b.lhs() && a.rhs() == b.rhs();
    }
}

// ---------------------------------------------------------------------------
// Parser

namespace {

std::optional<Function> lookup_function(std::string_view name) {
    for (Function f : {Function::sqrt, Function::ln, Function::exp, Function::sin, Function::cos})
        if (function_name(f) == name) return f;
    return std::nullopt;
}

class Parser {
public:
    Parser(std::string_view text, std::span<const std::string> coords, std::span<const std::string> params)
        : text_(text), coords_(coords), params_(params) {}

    Expr parse_all() {
        Expr e = expr();
        skip_ws();
        if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
        return e;
    }

private:
    [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, pos_); }

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool accept(char c) {
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c) {
        if (!accept(c)) {
            if (pos_ >= text_.size()) fail(std::string("expected '") + c + "' but input ended");
            fail(std::string("expected '") + c + "'");
        }
    }

    Expr expr() {
        Expr lhs = term();
        for (;;) {
            if (accept('+')) lhs = Expr::binary(NodeKind::add, lhs, term());
            else if (accept('-')) lhs = Expr::binary(NodeKind::subtract, lhs, term());
            else return lhs;
        }
    }

    Expr term() {
        Expr lhs = factor();
        for (;;) {
            if (accept('*')) lhs = Expr::binary(NodeKind::multiply, lhs, factor());
            else if (accept('/')) lhs = Expr::binary(NodeKind::divide, lhs, factor());
            else return lhs;
        }
    }

    Expr factor() {
        if (accept('-')) return Expr::negate(factor());
        return power();
    }

    Expr power() {
        Expr base = atom();
        if (accept('^')) return Expr::binary(NodeKind::power, base, factor());
        return base;
    }

    Expr atom() {
        skip_ws();
        if (pos_ >= text_.size()) fail("unexpected end of input");
        const char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            Expr inner = expr();
            expect(')');
            return inner;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
        if (std::isalpha(static_cast<unsigned char>(c))) return identifier();
        fail("unexpected '" + std::string(1, c) + "'");
    }

    Expr number() {
        const std::size_t start = pos_;
        auto digits = [&] {
            std::size_t n = 0;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_, ++n;
            return n;
        };
        std::size_t mantissa = digits();
        if (pos_ < text_.size() && text_[pos_] == '.') {
            ++pos_;
            mantissa += digits();
        }
        if (mantissa == 0) {
            pos_ = start;
            fail("malformed number");
        }
        if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
            const std::size_t mark = pos_;
            ++pos_;
            if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
            if (digits() == 0) {
                pos_ = mark;
                fail("malformed exponent");
            }
        }
        double value = 0.0;
        const auto [end, ec] = std::from_chars(text_.data() + start, text_.data() + pos_, value);
        if (ec != std::errc() || end != text_.data() + pos_ || !std::isfinite(value)) {
            pos_ = start;
            fail("number out of range");
        }
        return Expr::number(value);
    }

    Expr identifier() {
        const std::size_t start = pos_;
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
            ++pos_;
        const std::string name(text_.substr(start, pos_ - start));

        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == '(') {
            const auto f = lookup_function(name);
            if (!f) {
                pos_ = start;
                fail("unknown function '" + name + "'");
            }
            ++pos_;
            std::vector<Expr> args{expr()};
            while (accept(',')) args.push_back(expr());
            expect(')');
            if (args.size() != 1) {
                pos_ = start;
                fail("function '" + name + "' expects 1 argument, got " + std::to_string(args.size()));
            }
            return Expr::call(*f, args.front());
        }
        for (std::size_t i = 0; i < coords_.size(); ++i)
            if (coords_[i] == name) return Expr::variable(i, name);
        for (std::size_t i = 0; i < params_.size(); ++i)
            if (params_[i] == name) return Expr::parameter(i, name);
        throw UnknownIdentifier(name);
    }

    std::string_view text_;
    std::span<const std::string> coords_;
    std::span<const std::string> params_;
    std::size_t pos_ = 0;
};

}  // namespace

Expr parse(std::string_view text, std::span<const std::string> coords, std::span<const std::string> params) {
    std::set<std::string_view> seen(coords.begin(), coords.end());
    for (const auto& p : params)
        if (seen.count(p)) throw ConfigError("name '" + p + "' is both a coordinate and a parameter");
    return Parser(text, coords, params).parse_all();
}

// ---------------------------------------------------------------------------
// Printer

namespace {

// Binding strength of each production: 1 expr, 2 term, 3 factor, 4 power, 5 atom.
int precedence(const Expr& e) {
    switch (e.kind()) {
        case NodeKind::add:
        case NodeKind::subtract: return 1;
        case NodeKind::multiply:
        case NodeKind::divide: return 2;
        case NodeKind::negate: return 3;
        case NodeKind::power: return 4;
        default: return 5;
    }
}

void print(const Expr& e, int required, std::string& out) {
    const bool wrap = precedence(e) < required;
    if (wrap) out += '(';
    switch (e.kind()) {
        case NodeKind::number: {
            char buf[64];
            const auto res = std::to_chars(buf, buf + sizeof buf, e.value());
            out.append(buf, res.ptr);
            break;
        }
        case NodeKind::variable:
        case NodeKind::parameter: out += e.name(); break;
        case NodeKind::negate:
            out += '-';
            print(e.operand(), 3, out);
            break;
        case NodeKind::call:
            out += function_name(e.function());
            out += '(';
            print(e.operand(), 1, out);
            out += ')';
            break;
        case NodeKind::add:
        case NodeKind::subtract:
            print(e.lhs(), 1, out);
            out += e.kind() == NodeKind::add ? " + " : " - ";
            print(e.rhs(), 2, out);
            break;
        case NodeKind::multiply:
        case NodeKind::divide:
            print(e.lhs(), 2, out);
            out += e.kind() == NodeKind::multiply ? "*" : "/";
            print(e.rhs(), 3, out);
            break;
        case NodeKind::power:
            print(e.lhs(), 5, out);
            out += '^';
            print(e.rhs(), 3, out);
            break;
    }
    if (wrap) out += ')';
}

}  // namespace

std::string to_string(const Expr& e) {
    std::string out;
    print(e, 1, out);
    return out;
}

bool depends_on_coordinates(const Expr& e) {
    switch (e.kind()) {
        case NodeKind::variable: return true;
        case NodeKind::number:
        case NodeKind::parameter: return false;
        case NodeKind::negate:
        case NodeKind::call: return depends_on_coordinates(e.operand());
        default: return depends_on_coordinates(e.lhs()) || depends_on_coordinates(e.rhs());
    }
}

// ---------------------------------------------------------------------------
// Symbolic derivative

namespace {

bool is_number(const Expr& e, double v) { return e.kind() == NodeKind::number && e.value() == v; }

Expr add(Expr a, Expr b) {
    if (is_number(a, 0.0)) return b;
    if (is_number(b, 0.0)) return a;
    return Expr::binary(NodeKind::add, std::move(a), std::move(b));
}

Expr sub(Expr a, Expr b) {
    if (is_number(b, 0.0)) return a;
    if (is_number(a, 0.0)) return Expr::negate(std::move(b));
    return Expr::binary(NodeKind::subtract, std::move(a), std::move(b));
}

Expr mul(Expr a, Expr b) {
    if (is_number(a, 0.0) || is_number(b, 0.0)) return Expr::number(0.0);
    if (is_number(a, 1.0)) return b;
    if (is_number(b, 1.0)) return a;
    return Expr::binary(NodeKind::multiply, std::move(a), std::move(b));
}

Expr div(Expr a, Expr b) {
    if (is_number(a, 0.0)) return Expr::number(0.0);
    if (is_number(b, 1.0)) return a;
    return Expr::binary(NodeKind::divide, std::move(a), std::move(b));
}

Expr neg(Expr a) {
    if (is_number(a, 0.0)) return a;
    return Expr::negate(std::move(a));
}

}  // namespace

Expr derivative(const Expr& e, std::size_t index) {
    switch (e.kind()) {
        case NodeKind::number:
        case NodeKind::parameter: return Expr::number(0.0);
        case NodeKind::variable: return Expr::number(e.index() == index ? 1.0 : 0.0);
        case NodeKind::negate: return neg(derivative(e.operand(), index));
        case NodeKind::add: return add(derivative(e.lhs(), index), derivative(e.rhs(), index));
        case NodeKind::subtract: return sub(derivative(e.lhs(), index), derivative(e.rhs(), index));
        case NodeKind::multiply:
            return add(mul(derivative(e.lhs(), index), e.rhs()), mul(e.lhs(), derivative(e.rhs(), index)));
        case NodeKind::divide: {
            // (u/v)' = u'/v - u v'/v^2
            const Expr& u = e.lhs();
            const Expr& v = e.rhs();
            return sub(div(derivative(u, index), v),
                       div(mul(u, derivative(v, index)),
                           Expr::binary(NodeKind::power, v, Expr::number(2.0))));
        }
        case NodeKind::power: {
            const Expr& u = e.lhs();
            const Expr& w = e.rhs();
            Expr du = derivative(u, index);
            if (!depends_on_coordinates(w)) {
                // w u^(w-1) u'
                Expr reduced = w.kind() == NodeKind::number
                                   ? Expr::number(w.value() - 1.0)
                                   : Expr::binary(NodeKind::subtract, w, Expr::number(1.0));
                return mul(mul(w, Expr::binary(NodeKind::power, u, reduced)), du);
            }
            // u^w (w' ln u + w u'/u)
            return mul(e, add(mul(derivative(w, index), Expr::call(Function::ln, u)), div(mul(w, du), u)));
        }
        case NodeKind::call: {
            const Expr& u = e.operand();
            Expr du = derivative(u, index);
            switch (e.function()) {
                case Function::sqrt: return div(du, mul(Expr::number(2.0), e));
                case Function::ln: return div(du, u);
                case Function::exp: return mul(e, du);
                case Function::sin: return mul(Expr::call(Function::cos, u), du);
                case Function::cos: return neg(mul(Expr::call(Function::sin, u), du));
            }
        }
    }
    throw std::logic_error("derivative: unhandled node");
}

}  // namespace nambu
