#ifndef STURM_EXPR_HPP
#define STURM_EXPR_HPP

// Formula parser for potentials V(x) with second-order forward-mode
// differentiation.
//
// Grammar:
//   expr   := term (('+' | '-') term)*
//   term   := factor (('*' | '/') factor)*
//   factor := unary ('^' factor)?
//   unary  := '-' unary | atom
//   atom   := number | 'x' | 'pi' | 'e' | ident '(' expr ')' | '(' expr ')'
//
// '^' is right-associative and unary minus binds tighter than the base of
// '^', so "-x^2" is (-x)^2. Built-in functions: sqrt exp log sin cos.

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <memory>
#include <numbers>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sturm/error.hpp"

namespace sturm {

/// Value, first and second derivative with respect to x.
struct Jet2 {
    double v = 0.0;
    double d1 = 0.0;
    double d2 = 0.0;

    friend bool operator==(const Jet2&, const Jet2&) = default;
};

enum class NodeKind : std::uint8_t {
    Constant,
    Variable,
    Pi,
    E,
    Neg,
    Sqrt,
    Exp,
    Log,
    Sin,
    Cos,
    Add,
    Sub,
    Mul,
    Div,
    Pow,
};

constexpr int arity(NodeKind k) noexcept {
    switch (k) {
    case NodeKind::Constant:
    case NodeKind::Variable:
    case NodeKind::Pi:
    case NodeKind::E:
        return 0;
    case NodeKind::Neg:
    case NodeKind::Sqrt:
    case NodeKind::Exp:
    case NodeKind::Log:
    case NodeKind::Sin:
    case NodeKind::Cos:
        return 1;
    default:
        return 2;
    }
}

/// One node of the flattened tree. Children always precede their parent.
struct ExprNode {
    NodeKind kind = NodeKind::Constant;
    double value = 0.0;
    std::int32_t lhs = -1;
    std::int32_t rhs = -1;

    friend bool operator==(const ExprNode& a, const ExprNode& b) noexcept {
        // bitwise comparison of the constant keeps -0.0 and 0.0 distinct
        return a.kind == b.kind && a.lhs == b.lhs && a.rhs == b.rhs &&
               std::signbit(a.value) == std::signbit(b.value) && a.value == b.value;
    }
};

namespace detail {

inline const char* function_name(NodeKind k) {
    switch (k) {
    case NodeKind::Sqrt: return "sqrt";
    case NodeKind::Exp: return "exp";
    case NodeKind::Log: return "log";
    case NodeKind::Sin: return "sin";
    case NodeKind::Cos: return "cos";
    default: return nullptr;
    }
}

inline const char* operator_symbol(NodeKind k) {
    switch (k) {
    case NodeKind::Add: return "+";
    case NodeKind::Sub: return "-";
    case NodeKind::Mul: return "*";
    case NodeKind::Div: return "/";
    case NodeKind::Pow: return "^";
    default: return nullptr;
    }
}

inline std::string format_number(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// chain rule for f(g) given f', f'' evaluated at g.v; zero derivatives of g
// short-circuit so infinite f' at a boundary point does not poison constants
inline Jet2 chain(double f0, double f1, double f2, const Jet2& g) {
    Jet2 r{f0, 0.0, 0.0};
    if (g.d1 != 0.0) {
        r.d1 = f1 * g.d1;
        r.d2 = f2 * g.d1 * g.d1;
    }
    if (g.d2 != 0.0)
        r.d2 += f1 * g.d2;
    return r;
}

} // namespace detail

/// Immutable parsed formula. Copies share the node storage.
class Expr {
public:
    Expr() : Expr(constant(0.0)) {}

    static Expr constant(double v) { return leaf(NodeKind::Constant, v); }
    static Expr variable() { return leaf(NodeKind::Variable, 0.0); }
    static Expr pi() { return leaf(NodeKind::Pi, 0.0); }
    static Expr e() { return leaf(NodeKind::E, 0.0); }

    static Expr unary(NodeKind k, const Expr& operand) {
        if (arity(k) != 1)
            throw std::invalid_argument("Expr::unary: node kind is not unary");
        std::vector<ExprNode> nodes = *operand.nodes_;
        nodes.push_back({k, 0.0, static_cast<std::int32_t>(nodes.size() - 1), -1});
        return Expr(std::move(nodes));
    }

    static Expr binary(NodeKind k, const Expr& lhs, const Expr& rhs) {
        if (arity(k) != 2)
            throw std::invalid_argument("Expr::binary: node kind is not binary");
        std::vector<ExprNode> nodes = *lhs.nodes_;
        const auto lroot = static_cast<std::int32_t>(nodes.size() - 1);
        const auto shift = static_cast<std::int32_t>(nodes.size());
        for (ExprNode n : *rhs.nodes_) {
            if (n.lhs >= 0) n.lhs += shift;
            if (n.rhs >= 0) n.rhs += shift;
            nodes.push_back(n);
        }
        nodes.push_back({k, 0.0, lroot, static_cast<std::int32_t>(nodes.size() - 1)});
        return Expr(std::move(nodes));
    }

    std::span<const ExprNode> nodes() const noexcept { return *nodes_; }
    std::size_t root() const noexcept { return nodes_->size() - 1; }

    bool depends_on_x() const noexcept {
        for (const auto& n : *nodes_)
            if (n.kind == NodeKind::Variable) return true;
        return false;
    }

    /// Height of the tree; a single leaf has depth 1.
    int depth() const {
        std::vector<int> d(nodes_->size(), 1);
        for (std::size_t i = 0; i < d.size(); ++i) {
            const auto& n = (*nodes_)[i];
            if (n.lhs >= 0) d[i] = std::max(d[i], d[n.lhs] + 1);
            if (n.rhs >= 0) d[i] = std::max(d[i], d[n.rhs] + 1);
        }
        return d.back();
    }

    /// Fully parenthesised text that parses back to the same tree.
    std::string to_string() const { return to_string(root()); }

    std::string to_string(std::size_t index) const {
        const ExprNode& n = (*nodes_)[index];
        switch (n.kind) {
        case NodeKind::Constant: return detail::format_number(n.value);
        case NodeKind::Variable: return "x";
        case NodeKind::Pi: return "pi";
        case NodeKind::E: return "e";
        case NodeKind::Neg: return "(-" + to_string(n.lhs) + ")";
        default: break;
        }
        if (const char* f = detail::function_name(n.kind))
            return std::string(f) + "(" + to_string(n.lhs) + ")";
        return "(" + to_string(n.lhs) + detail::operator_symbol(n.kind) + to_string(n.rhs) + ")";
    }

    /// V(x) only.
    double value(double x) const {
        thread_local std::vector<double> buf;
        const auto& nodes = *nodes_;
        buf.resize(nodes.size());
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            const ExprNode& n = nodes[i];
            const double l = n.lhs >= 0 ? buf[n.lhs] : 0.0;
            const double r = n.rhs >= 0 ? buf[n.rhs] : 0.0;
            double v = 0.0;
            switch (n.kind) {
            case NodeKind::Constant: v = n.value; break;
            case NodeKind::Variable: v = x; break;
            case NodeKind::Pi: v = std::numbers::pi; break;
            case NodeKind::E: v = std::numbers::e; break;
            case NodeKind::Neg: v = -l; break;
            case NodeKind::Sqrt:
                if (l < 0.0) domain_error(i, x, "sqrt of negative");
                v = std::sqrt(l);
                break;
            case NodeKind::Exp: v = std::exp(l); break;
            case NodeKind::Log:
                if (l <= 0.0) domain_error(i, x, "log of non-positive");
                v = std::log(l);
                break;
            case NodeKind::Sin: v = std::sin(l); break;
            case NodeKind::Cos: v = std::cos(l); break;
            case NodeKind::Add: v = l + r; break;
            case NodeKind::Sub: v = l - r; break;
            case NodeKind::Mul: v = l * r; break;
            case NodeKind::Div:
                if (r == 0.0) domain_error(i, x, "division by zero");
                v = l / r;
                break;
            case NodeKind::Pow:
                check_pow(i, x, l, r);
                v = std::pow(l, r);
                break;
            }
            if (!std::isfinite(v)) domain_error(i, x, "non-finite result");
            buf[i] = v;
        }
        return buf.back();
    }

    /// (V, V', V'') at x, propagated exactly through every node from the seed (x, 1, 0).
    Jet2 jet(double x) const {
        thread_local std::vector<Jet2> buf;
        const auto& nodes = *nodes_;
        buf.resize(nodes.size());
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            const ExprNode& n = nodes[i];
            const Jet2 l = n.lhs >= 0 ? buf[n.lhs] : Jet2{};
            const Jet2 r = n.rhs >= 0 ? buf[n.rhs] : Jet2{};
            Jet2 j;
            switch (n.kind) {
            case NodeKind::Constant: j = {n.value, 0.0, 0.0}; break;
            case NodeKind::Variable: j = {x, 1.0, 0.0}; break;
            case NodeKind::Pi: j = {std::numbers::pi, 0.0, 0.0}; break;
            case NodeKind::E: j = {std::numbers::e, 0.0, 0.0}; break;
            case NodeKind::Neg: j = {-l.v, -l.d1, -l.d2}; break;
            case NodeKind::Sqrt: {
                if (l.v < 0.0) domain_error(i, x, "sqrt of negative");
                const double s = std::sqrt(l.v);
                // written via l.d1 / l.v so that huge arguments do not underflow f''
                const double r1 = l.d1 / l.v;
                j = {s, 0.5 * s * r1, 0.5 * l.d2 / s - 0.25 * s * r1 * r1};
                if (l.d1 == 0.0 && l.d2 == 0.0) j.d1 = j.d2 = 0.0;
                break;
            }
            case NodeKind::Exp: {
                const double ev = std::exp(l.v);
                j = detail::chain(ev, ev, ev, l);
                break;
            }
            case NodeKind::Log: {
                if (l.v <= 0.0) domain_error(i, x, "log of non-positive");
                const double r1 = l.d1 / l.v;
                j = {std::log(l.v), r1, l.d2 / l.v - r1 * r1};
                break;
            }
            case NodeKind::Sin: {
                const double s = std::sin(l.v), c = std::cos(l.v);
                j = detail::chain(s, c, -s, l);
                break;
            }
            case NodeKind::Cos: {
                const double s = std::sin(l.v), c = std::cos(l.v);
                j = detail::chain(c, -s, -c, l);
                break;
            }
            case NodeKind::Add: j = {l.v + r.v, l.d1 + r.d1, l.d2 + r.d2}; break;
            case NodeKind::Sub: j = {l.v - r.v, l.d1 - r.d1, l.d2 - r.d2}; break;
            case NodeKind::Mul:
                j = {l.v * r.v, l.d1 * r.v + l.v * r.d1, l.d2 * r.v + 2.0 * l.d1 * r.d1 + l.v * r.d2};
                break;
            case NodeKind::Div: {
                if (r.v == 0.0) domain_error(i, x, "division by zero");
                const double q = l.v / r.v;
                const double q1 = (l.d1 - q * r.d1) / r.v;
                j = {q, q1, (l.d2 - 2.0 * q1 * r.d1 - q * r.d2) / r.v};
                break;
            }
            case NodeKind::Pow:
                j = pow_jet(i, x, l, r);
                break;
            }
            if (!std::isfinite(j.v) || !std::isfinite(j.d1) || !std::isfinite(j.d2))
                domain_error(i, x, "non-finite result");
            buf[i] = j;
        }
        return buf.back();
    }

    friend bool operator==(const Expr& a, const Expr& b) {
        return a.nodes_ == b.nodes_ || *a.nodes_ == *b.nodes_;
    }

private:
    explicit Expr(std::vector<ExprNode> nodes)
        : nodes_(std::make_shared<const std::vector<ExprNode>>(std::move(nodes))) {}

    static Expr leaf(NodeKind k, double v) { return Expr(std::vector<ExprNode>{{k, v, -1, -1}}); }

    [[noreturn]] void domain_error(std::size_t index, double x, const char* what) const {
        throw DomainError(std::string(what) + " in '" + to_string(index) + "' at x = " +
                          detail::format_number(x));
    }

    void check_pow(std::size_t index, double x, double base, double exponent) const {
        if (base < 0.0 && exponent != std::trunc(exponent))
            domain_error(index, x, "negative base with non-integer exponent");
        if (base == 0.0 && exponent < 0.0)
            domain_error(index, x, "zero base with negative exponent");
    }

    Jet2 pow_jet(std::size_t index, double x, const Jet2& b, const Jet2& p) const {
        if (p.d1 == 0.0 && p.d2 == 0.0) {
            // constant exponent: power rule
            check_pow(index, x, b.v, p.v);
            const double e = p.v;
            Jet2 r{std::pow(b.v, e), 0.0, 0.0};
            if (b.d1 == 0.0 && b.d2 == 0.0) return r;
            const double f1 = e == 0.0 ? 0.0 : e * std::pow(b.v, e - 1.0);
            const double f2 = (e == 0.0 || e == 1.0) ? 0.0 : e * (e - 1.0) * std::pow(b.v, e - 2.0);
            return detail::chain(r.v, f1, f2, b);
        }
        // b^g = exp(g log b)
        if (b.v <= 0.0) domain_error(index, x, "non-positive base with variable exponent");
        const double lb = std::log(b.v);
        const double r1 = b.d1 / b.v;
        const Jet2 logb{lb, r1, b.d2 / b.v - r1 * r1};
        const Jet2 prod{p.v * logb.v, p.d1 * logb.v + p.v * logb.d1,
                        p.d2 * logb.v + 2.0 * p.d1 * logb.d1 + p.v * logb.d2};
        const double ev = std::pow(b.v, p.v);
        return detail::chain(ev, ev, ev, prod);
    }

    std::shared_ptr<const std::vector<ExprNode>> nodes_;

    friend class Parser;
};

/// Recursive-descent parser for the grammar at the top of this file.
class Parser {
public:
    explicit Parser(std::string_view src) : src_(src) {}

    Expr parse() {
        if (src_.find_first_not_of(" \t\r\n") == std::string_view::npos)
            throw ParseError("empty formula", 0);
        parse_expr();
        skip_ws();
        if (pos_ != src_.size())
            throw ParseError(std::string("unexpected '") + src_[pos_] + "'", pos_);
        return Expr(std::move(nodes_));
    }

private:
    void skip_ws() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    }

    bool accept(char c) {
        skip_ws();
        if (pos_ < src_.size() && src_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c) {
        if (!accept(c)) {
            if (pos_ >= src_.size())
                throw ParseError(std::string("expected '") + c + "' but reached end of input", pos_);
            throw ParseError(std::string("expected '") + c + "'", pos_);
        }
    }

    std::int32_t push(NodeKind k, double v = 0.0, std::int32_t l = -1, std::int32_t r = -1) {
        nodes_.push_back({k, v, l, r});
        return static_cast<std::int32_t>(nodes_.size() - 1);
    }

    std::int32_t parse_expr() {
        std::int32_t lhs = parse_term();
        for (;;) {
            if (accept('+')) lhs = push(NodeKind::Add, 0.0, lhs, parse_term());
            else if (accept('-')) lhs = push(NodeKind::Sub, 0.0, lhs, parse_term());
            else return lhs;
        }
    }

    std::int32_t parse_term() {
        std::int32_t lhs = parse_factor();
        for (;;) {
            if (accept('*')) lhs = push(NodeKind::Mul, 0.0, lhs, parse_factor());
            else if (accept('/')) lhs = push(NodeKind::Div, 0.0, lhs, parse_factor());
            else return lhs;
        }
    }

    std::int32_t parse_factor() {
        const std::int32_t base = parse_unary();
        if (accept('^')) return push(NodeKind::Pow, 0.0, base, parse_factor());
        return base;
    }

    std::int32_t parse_unary() {
        if (accept('-')) return push(NodeKind::Neg, 0.0, parse_unary());
        return parse_atom();
    }

    std::int32_t parse_atom() {
        skip_ws();
        if (pos_ >= src_.size()) throw ParseError("unexpected end of input", pos_);
        const char c = src_[pos_];
        if (c == '(') {
            ++pos_;
            const std::int32_t inner = parse_expr();
            expect(')');
            return inner;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_identifier();
        throw ParseError(std::string("unexpected '") + c + "'", pos_);
    }

    std::int32_t parse_number() {
        const std::size_t start = pos_;
        auto digits = [&] {
            std::size_t n = 0;
            while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
                ++pos_;
                ++n;
            }
            return n;
        };
        std::size_t mantissa = digits();
        if (pos_ < src_.size() && src_[pos_] == '.') {
            ++pos_;
            mantissa += digits();
        }
        if (mantissa == 0) throw ParseError("malformed number", start);
        // exponent only when followed by digits, so "2*e" style input stays unambiguous
        if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
            std::size_t look = pos_ + 1;
            if (look < src_.size() && (src_[look] == '+' || src_[look] == '-')) ++look;
            if (look < src_.size() && std::isdigit(static_cast<unsigned char>(src_[look]))) {
                pos_ = look;
                digits();
            }
        }
        const std::string text(src_.substr(start, pos_ - start));
        const double v = std::strtod(text.c_str(), nullptr);
        if (!std::isfinite(v)) throw ParseError("number out of range", start);
        return push(NodeKind::Constant, v);
    }

    std::int32_t parse_identifier() {
        const std::size_t start = pos_;
        while (pos_ < src_.size() &&
               (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
            ++pos_;
        const std::string_view name = src_.substr(start, pos_ - start);

        NodeKind fn{};
        bool is_function = true;
        if (name == "sqrt") fn = NodeKind::Sqrt;
        else if (name == "exp") fn = NodeKind::Exp;
        else if (name == "log") fn = NodeKind::Log;
        else if (name == "sin") fn = NodeKind::Sin;
        else if (name == "cos") fn = NodeKind::Cos;
        else is_function = false;

        skip_ws();
        const bool call = pos_ < src_.size() && src_[pos_] == '(';
        if (!call) {
            if (name == "x") return push(NodeKind::Variable);
            if (name == "pi") return push(NodeKind::Pi);
            if (name == "e") return push(NodeKind::E);
            if (is_function) throw ParseError("function '" + std::string(name) + "' needs an argument", pos_);
            throw ParseError("unknown identifier '" + std::string(name) + "'", start);
        }
        if (!is_function) throw ParseError("unknown function '" + std::string(name) + "'", start);

        const std::size_t open = pos_;
        ++pos_;
        if (accept(')'))
            throw ParseError("wrong arity: '" + std::string(name) + "' takes 1 argument, got 0", open);
        const std::int32_t arg = parse_expr();
        int count = 1;
        while (accept(',')) {
            parse_expr();
            ++count;
        }
        if (count != 1)
            throw ParseError("wrong arity: '" + std::string(name) + "' takes 1 argument, got " +
                                 std::to_string(count),
                             open);
        expect(')');
        return push(fn, 0.0, arg);
    }

    std::string_view src_;
    std::size_t pos_ = 0;
    std::vector<ExprNode> nodes_;
};

inline Expr parse(std::string_view source) { return Parser(source).parse(); }

inline Jet2 eval_jet2(const Expr& ast, double x) { return ast.jet(x); }

} // namespace sturm

#endif // STURM_EXPR_HPP
