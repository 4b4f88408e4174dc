#pragma once

/*
 * Coefficient functions q(t).
 *
 * Expression grammar (whitespace-insensitive, no implicit multiplication):
 *
 *   expr    ::= term { ("+" | "-") term }
 *   term    ::= unary { ("*" | "/") unary }
 *   unary   ::= "-" unary | power
 *   power   ::= primary [ "^" unary ]          right-associative
 *   primary ::= number | "t" | func "(" expr ")" | "(" expr ")"
 *   func    ::= "ln" | "exp" | "sin" | "cos" | "abs" | "sqrt"
 *   number  ::= digits [ "." digits ] [ ("e" | "E") [ "+" | "-" ] digits ]
 *             | "." digits [ exponent ]
 *
 * so  -t^2 = -(t^2),  2^-1 = 0.5,  2^3^2 = 2^9.
 */

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <memory>
#include <sstream>
#include <string>
#include <string_view>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

#include "hlyap/errors.hpp"

namespace hlyap {

enum class ExprKind { Number, Variable, Negate, Add, Subtract, Multiply, Divide, Power, Function };
enum class FuncKind { Ln, Exp, Sin, Cos, Abs, Sqrt };

constexpr std::string_view to_string(FuncKind f) noexcept {
    switch (f) {
        case FuncKind::Ln: return "ln";
        case FuncKind::Exp: return "exp";
        case FuncKind::Sin: return "sin";
        case FuncKind::Cos: return "cos";
        case FuncKind::Abs: return "abs";
        case FuncKind::Sqrt: return "sqrt";
    }
    return "?";
}

struct ExprNode;
using ExprPtr = std::shared_ptr<const ExprNode>;

/// Immutable expression tree node. Arity follows `kind`: Number and
/// Variable are leaves, Negate and Function have one child (`lhs`), the
/// binary operators use both.
struct ExprNode {
    ExprKind kind;
    double value = 0.0;
    FuncKind func = FuncKind::Ln;
    ExprPtr lhs;
    ExprPtr rhs;

    static ExprPtr number(double v) {
        return std::make_shared<const ExprNode>(ExprNode{ExprKind::Number, v, FuncKind::Ln, nullptr, nullptr});
    }
    static ExprPtr variable() {
        return std::make_shared<const ExprNode>(ExprNode{ExprKind::Variable, 0.0, FuncKind::Ln, nullptr, nullptr});
    }
    static ExprPtr unary(ExprKind kind, ExprPtr arg) {
        return std::make_shared<const ExprNode>(ExprNode{kind, 0.0, FuncKind::Ln, std::move(arg), nullptr});
    }
    static ExprPtr function(FuncKind f, ExprPtr arg) {
        return std::make_shared<const ExprNode>(ExprNode{ExprKind::Function, 0.0, f, std::move(arg), nullptr});
    }
    static ExprPtr binary(ExprKind kind, ExprPtr l, ExprPtr r) {
        return std::make_shared<const ExprNode>(ExprNode{kind, 0.0, FuncKind::Ln, std::move(l), std::move(r)});
    }
};

/// Structural equality (number literals compared bitwise).
inline bool structurally_equal(const ExprNode& a, const ExprNode& b) {
    if (a.kind != b.kind) return false;
    switch (a.kind) {
        case ExprKind::Number: return a.value == b.value;
        case ExprKind::Variable: return true;
        case ExprKind::Negate: return structurally_equal(*a.lhs, *b.lhs);
        case ExprKind::Function: return a.func == b.func && structurally_equal(*a.lhs, *b.lhs);
        default: return structurally_equal(*a.lhs, *b.lhs) && structurally_equal(*a.rhs, *b.rhs);
    }
}

namespace detail {

class ExprParser {
public:
    explicit ExprParser(std::string_view src) : src_(src) {}

    ExprPtr parse() {
        skip_space();
        if (pos_ == src_.size()) fail({"number", "t", "function", "(", "-"}, "empty expression");
        ExprPtr root = expr();
        skip_space();
        if (pos_ != src_.size()) fail({"+", "-", "*", "/", "^", "end of input"}, "unexpected trailing input");
        return root;
    }

private:
    [[noreturn]] void fail(std::vector<std::string> expected, const std::string& what) const {
        std::string msg = what + " (expected one of:";
        for (const auto& e : expected) msg += " '" + e + "'";
        msg += ")";
        throw SyntaxError(pos_, std::move(expected), msg);
    }

    void skip_space() {
        while (pos_ < src_.size() && (src_[pos_] == ' ' || src_[pos_] == '\t' || src_[pos_] == '\n' ||
                                      src_[pos_] == '\r')) {
            ++pos_;
        }
    }

    bool accept(char c) {
        skip_space();
        if (pos_ < src_.size() && src_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    ExprPtr expr() {
        ExprPtr node = term();
        for (;;) {
            if (accept('+')) {
                node = ExprNode::binary(ExprKind::Add, node, term());
            } else if (accept('-')) {
                node = ExprNode::binary(ExprKind::Subtract, node, term());
            } else {
                return node;
            }
        }
    }

    ExprPtr term() {
        ExprPtr node = unary();
        for (;;) {
            if (accept('*')) {
                node = ExprNode::binary(ExprKind::Multiply, node, unary());
            } else if (accept('/')) {
                node = ExprNode::binary(ExprKind::Divide, node, unary());
            } else {
                return node;
            }
        }
    }

    ExprPtr unary() {
        if (accept('-')) return ExprNode::unary(ExprKind::Negate, unary());
        return power();
    }

    ExprPtr power() {
        ExprPtr base = primary();
        if (accept('^')) return ExprNode::binary(ExprKind::Power, base, unary());
        return base;
    }

    ExprPtr primary() {
        skip_space();
        if (pos_ >= src_.size()) fail({"number", "t", "function", "(", "-"}, "unexpected end of input");
        const char c = src_[pos_];
        if (c == '(') {
            ++pos_;
            ExprPtr inner = expr();
            if (!accept(')')) fail({")"}, "unbalanced parenthesis");
            return inner;
        }
        if ((c >= '0' && c <= '9') || c == '.') return number();
        if (is_ident_start(c)) return identifier();
        fail({"number", "t", "function", "(", "-"}, std::string("unexpected character '") + c + "'");
    }

    static bool is_ident_start(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_'; }
    static bool is_digit(char c) { return c >= '0' && c <= '9'; }

    ExprPtr number() {
        const std::size_t start = pos_;
        std::size_t p = pos_;
        std::size_t mantissa_digits = 0;
        while (p < src_.size() && is_digit(src_[p])) ++p, ++mantissa_digits;
        if (p < src_.size() && src_[p] == '.') {
            ++p;
            while (p < src_.size() && is_digit(src_[p])) ++p, ++mantissa_digits;
        }
        if (mantissa_digits == 0) fail({"digit"}, "malformed number");
        if (p < src_.size() && (src_[p] == 'e' || src_[p] == 'E')) {
            std::size_t q = p + 1;
            if (q < src_.size() && (src_[q] == '+' || src_[q] == '-')) ++q;
            if (q >= src_.size() || !is_digit(src_[q])) {
                pos_ = q;
                fail({"digit"}, "malformed exponent");
            }
            while (q < src_.size() && is_digit(src_[q])) ++q;
            p = q;
        }
        double value = 0.0;
        const auto [end, ec] = std::from_chars(src_.data() + start, src_.data() + p, value);
        if (ec != std::errc() || end != src_.data() + p || !std::isfinite(value)) {
            fail({"finite number"}, "number literal out of range");
        }
        pos_ = p;
        return ExprNode::number(value);
    }

    ExprPtr identifier() {
        const std::size_t start = pos_;
        while (pos_ < src_.size() && (is_ident_start(src_[pos_]) || is_digit(src_[pos_]))) ++pos_;
        const std::string_view name = src_.substr(start, pos_ - start);
        if (name == "t") return ExprNode::variable();
        static constexpr FuncKind funcs[] = {FuncKind::Ln,  FuncKind::Exp, FuncKind::Sin,
                                             FuncKind::Cos, FuncKind::Abs, FuncKind::Sqrt};
        for (FuncKind f : funcs) {
            if (name == to_string(f)) {
                if (!accept('(')) fail({"("}, "function '" + std::string(name) + "' needs an argument list");
                ExprPtr arg = expr();
                if (!accept(')')) fail({")"}, "unbalanced parenthesis");
                return ExprNode::function(f, arg);
            }
        }
        throw Error(ErrorKind::UnknownIdentifier,
                    "unknown identifier '" + std::string(name) + "' at offset " + std::to_string(start));
    }

    std::string_view src_;
    std::size_t pos_ = 0;
};

}  // namespace detail

inline ExprPtr parse_expr(std::string_view src) { return detail::ExprParser(src).parse(); }

/// Fully parenthesized rendering that parses back to the same tree.
inline std::string to_source(const ExprNode& node) {
    switch (node.kind) {
        case ExprKind::Number: {
            char buf[64];
            const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, node.value);
            std::string s(buf, end);
            // to_chars may emit "1e+20"; the grammar accepts that form.
            return s;
        }
        case ExprKind::Variable: return "t";
        case ExprKind::Negate: return "(-" + to_source(*node.lhs) + ")";
        case ExprKind::Function: return std::string(to_string(node.func)) + "(" + to_source(*node.lhs) + ")";
        default: break;
    }
    const char* op = "?";
    switch (node.kind) {
        case ExprKind::Add: op = " + "; break;
        case ExprKind::Subtract: op = " - "; break;
        case ExprKind::Multiply: op = " * "; break;
        case ExprKind::Divide: op = " / "; break;
        case ExprKind::Power: op = " ^ "; break;
        default: break;
    }
    return "(" + to_source(*node.lhs) + op + to_source(*node.rhs) + ")";
}

inline double evaluate(const ExprNode& node, double t) {
    auto checked = [](double v, const char* what) {
        if (!std::isfinite(v)) throw Error(ErrorKind::EvalError, std::string(what) + " produced a non-finite value");
        return v;
    };
    switch (node.kind) {
        case ExprKind::Number: return node.value;
        case ExprKind::Variable: return t;
        case ExprKind::Negate: return -evaluate(*node.lhs, t);
        case ExprKind::Add: return checked(evaluate(*node.lhs, t) + evaluate(*node.rhs, t), "addition");
        case ExprKind::Subtract: return checked(evaluate(*node.lhs, t) - evaluate(*node.rhs, t), "subtraction");
        case ExprKind::Multiply: return checked(evaluate(*node.lhs, t) * evaluate(*node.rhs, t), "multiplication");
        case ExprKind::Divide: {
            const double den = evaluate(*node.rhs, t);
            if (den == 0.0) throw Error(ErrorKind::EvalError, "division by zero");
            return checked(evaluate(*node.lhs, t) / den, "division");
        }
        case ExprKind::Power: return checked(std::pow(evaluate(*node.lhs, t), evaluate(*node.rhs, t)), "power");
        case ExprKind::Function: {
            const double x = evaluate(*node.lhs, t);
            switch (node.func) {
                case FuncKind::Ln:
                    if (!(x > 0.0)) throw Error(ErrorKind::EvalError, "ln of a non-positive value");
                    return std::log(x);
                case FuncKind::Exp: return checked(std::exp(x), "exp");
                case FuncKind::Sin: return std::sin(x);
                case FuncKind::Cos: return std::cos(x);
                case FuncKind::Abs: return std::fabs(x);
                case FuncKind::Sqrt:
                    if (x < 0.0) throw Error(ErrorKind::EvalError, "sqrt of a negative value");
                    return std::sqrt(x);
            }
        }
    }
    throw Error(ErrorKind::EvalError, "malformed expression node");
}

// ---------------------------------------------------------------------------
// Coefficient = constant | expression | sampled table
// ---------------------------------------------------------------------------

struct ConstantCoefficient {
    double value;
};

struct ExpressionCoefficient {
    std::string source;
    ExprPtr ast;
};

/// Samples (t_k, q_k), t strictly increasing and positive; interpolated
/// linearly in (ln t, q).
class TableCoefficient {
public:
    TableCoefficient(std::vector<double> t, std::vector<double> q) : t_(std::move(t)), q_(std::move(q)) {
        if (t_.size() != q_.size()) throw Error(ErrorKind::DomainInvalid, "table columns differ in length");
        if (t_.size() < 2) throw Error(ErrorKind::DomainInvalid, "table needs at least two points");
        for (std::size_t k = 0; k < t_.size(); ++k) {
            if (!std::isfinite(t_[k]) || !std::isfinite(q_[k])) {
                throw Error(ErrorKind::DomainInvalid, "table entries must be finite");
            }
            if (!(t_[k] > 0.0)) throw Error(ErrorKind::DomainInvalid, "table abscissae must be positive");
            if (k > 0 && !(t_[k] > t_[k - 1])) {
                throw Error(ErrorKind::DomainInvalid, "table abscissae must be strictly increasing");
            }
        }
        log_t_.reserve(t_.size());
        for (double v : t_) log_t_.push_back(std::log(v));
    }

    const std::vector<double>& t() const noexcept { return t_; }
    const std::vector<double>& q() const noexcept { return q_; }
    double front() const noexcept { return t_.front(); }
    double back() const noexcept { return t_.back(); }

    double operator()(double t) const {
        // Endpoints are accepted with a relative slack of a few ulps so that
        // a table spanning [t1, t2] can be evaluated at t2 = t1·exp(L).
        constexpr double slack = 1e-12;
        if (!(t >= t_.front() * (1.0 - slack) && t <= t_.back() * (1.0 + slack))) {
            throw Error(ErrorKind::OutOfTableRange, "t = " + std::to_string(t) + " outside table range");
        }
        if (t <= t_.front()) return q_.front();
        if (t >= t_.back()) return q_.back();
        const auto it = std::upper_bound(t_.begin(), t_.end(), t);
        const std::size_t k = static_cast<std::size_t>(it - t_.begin());
        if (t == t_[k - 1]) return q_[k - 1];
        const double x = std::log(t);
        const double w = (x - log_t_[k - 1]) / (log_t_[k] - log_t_[k - 1]);
        return q_[k - 1] + w * (q_[k] - q_[k - 1]);
    }

private:
    std::vector<double> t_;
    std::vector<double> q_;
    std::vector<double> log_t_;
};

class Coefficient {
public:
    using Variant = std::variant<ConstantCoefficient, ExpressionCoefficient, TableCoefficient>;

    static Coefficient constant(double value) {
        if (!std::isfinite(value)) throw Error(ErrorKind::DomainInvalid, "constant coefficient must be finite");
        return Coefficient(ConstantCoefficient{value});
    }
    static Coefficient expression(std::string source) {
        ExprPtr ast = parse_expr(source);
        return Coefficient(ExpressionCoefficient{std::move(source), std::move(ast)});
    }
    static Coefficient table(std::vector<double> t, std::vector<double> q) {
        return Coefficient(TableCoefficient(std::move(t), std::move(q)));
    }

    const Variant& variant() const noexcept { return v_; }

    double operator()(double t) const {
        return std::visit(
            [t](const auto& c) -> double {
                using C = std::decay_t<decltype(c)>;
                if constexpr (std::is_same_v<C, ConstantCoefficient>) {
                    return c.value;
                } else if constexpr (std::is_same_v<C, ExpressionCoefficient>) {
                    return evaluate(*c.ast, t);
                } else {
                    return c(t);
                }
            },
            v_);
    }

    /// Interior points in (lo, hi) where q may fail to be smooth (table knots).
    std::vector<double> breakpoints(double lo, double hi) const {
        std::vector<double> out;
        if (const auto* tab = std::get_if<TableCoefficient>(&v_)) {
            for (double t : tab->t()) {
                if (t > lo && t < hi) out.push_back(t);
            }
        }
        return out;
    }

    /// Human-readable description for reports.
    std::string describe() const {
        return std::visit(
            [](const auto& c) -> std::string {
                using C = std::decay_t<decltype(c)>;
                if constexpr (std::is_same_v<C, ConstantCoefficient>) {
                    std::ostringstream os;
                    os.precision(17);
                    os << "const " << c.value;
                    return os.str();
                } else if constexpr (std::is_same_v<C, ExpressionCoefficient>) {
                    return "expr " + c.source;
                } else {
                    return "table (" + std::to_string(c.t().size()) + " points)";
                }
            },
            v_);
    }

private:
    explicit Coefficient(Variant v) : v_(std::move(v)) {}
    Variant v_;
};

inline double eval_coefficient(const Coefficient& q, double t) { return q(t); }

/// Checks that a table spans exactly [t1, t2] (to a relative 1e-12) so it
/// can stand in for q on the problem interval. Other variants always pass.
inline void bind_to_interval(const Coefficient& q, double t1, double t2) {
    if (const auto* tab = std::get_if<TableCoefficient>(&q.variant())) {
        constexpr double slack = 1e-12;
        if (std::fabs(tab->front() - t1) > slack * t1 || std::fabs(tab->back() - t2) > slack * t2) {
            throw Error(ErrorKind::OutOfTableRange, "table must span [t1, t2] exactly");
        }
    }
}

/// Reads a CSV table with header `t,q`, comma separated, strictly increasing t.
inline Coefficient load_table_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw Error(ErrorKind::DomainInvalid, "table file is empty");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "t,q") throw Error(ErrorKind::DomainInvalid, "table header must be 't,q'");
    std::vector<double> ts, qs;
    std::size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos) {
            throw Error(ErrorKind::DomainInvalid, "row " + std::to_string(row) + " lacks a comma");
        }
        auto parse_field = [&](std::string_view field) {
            while (!field.empty() && field.front() == ' ') field.remove_prefix(1);
            while (!field.empty() && field.back() == ' ') field.remove_suffix(1);
            double v = 0.0;
            const auto [end, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
            if (ec != std::errc() || end != field.data() + field.size()) {
                throw Error(ErrorKind::DomainInvalid, "row " + std::to_string(row) + ": malformed number");
            }
            return v;
        };
        const std::string_view view(line);
        ts.push_back(parse_field(view.substr(0, comma)));
        qs.push_back(parse_field(view.substr(comma + 1)));
    }
    return Coefficient::table(std::move(ts), std::move(qs));
}

inline Coefficient load_table_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::DomainInvalid, "cannot open table file '" + path + "'");
    return load_table_csv(in);
}

}  // namespace hlyap
