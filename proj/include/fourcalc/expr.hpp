#pragma once

#include "fourcalc/number.hpp"

#include <cstdint>
#include <initializer_list>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace fourcalc {

/// Name of the distinguished integration/differentiation variable.
inline constexpr std::string_view kVariable = "x";

enum class Op { Const, Pi, Var, Param, Neg, Add, Sub, Mul, Div, IntPow, Sin, Cos };

/// Immutable expression tree over one variable `x` and named free parameters.
/// Copies share structure; nodes are never mutated after construction, so
/// expressions can be read and evaluated from any number of threads.
class Expr {
public:
    static Expr constant(Number value);
    static Expr integer(std::int64_t value) { return constant(Rational(value)); }
    static Expr real(double value);
    static Expr pi();
    static Expr var();
    static Expr param(std::string name);

    static Expr neg(Expr operand);
    static Expr add(Expr lhs, Expr rhs);
    static Expr sub(Expr lhs, Expr rhs);
    static Expr mul(Expr lhs, Expr rhs);
    static Expr div(Expr lhs, Expr rhs);
    static Expr pow(Expr base, int exponent);
    static Expr sin(Expr operand);
    static Expr cos(Expr operand);

    Op op() const noexcept;
    /// Valid for Op::Const.
    const Number& number() const;
    /// Valid for Op::Param.
    const std::string& name() const;
    /// Valid for Op::IntPow.
    int exponent() const;

    std::size_t arity() const noexcept;
    const Expr& child(std::size_t i) const;
    const Expr& operand() const { return child(0); }
    const Expr& lhs() const { return child(0); }
    const Expr& rhs() const { return child(1); }

    /// Structural equality (rational 1 and double 1.0 differ).
    friend bool operator==(const Expr& a, const Expr& b);

    /// Same underlying node, i.e. a cheap identity test.
    bool same_node(const Expr& other) const noexcept { return node_ == other.node_; }

    friend Expr operator+(Expr a, Expr b) { return add(std::move(a), std::move(b)); }
    friend Expr operator-(Expr a, Expr b) { return sub(std::move(a), std::move(b)); }
    friend Expr operator*(Expr a, Expr b) { return mul(std::move(a), std::move(b)); }
    friend Expr operator/(Expr a, Expr b) { return div(std::move(a), std::move(b)); }
    friend Expr operator-(Expr a) { return neg(std::move(a)); }

private:
    struct Node;
    explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
    std::shared_ptr<const Node> node_;
};

/// Free-parameter bindings. Integer-typed parameters must hold integral values.
class ParamEnv {
public:
    ParamEnv() = default;
    ParamEnv(std::initializer_list<std::pair<std::string, double>> values);

    /// Adds a binding; a name may be bound only once.
    ParamEnv& bind(const std::string& name, double value, bool integer = false);
    /// Copy with `name` bound (replacing any existing binding).
    ParamEnv with(const std::string& name, double value, bool integer = false) const;

    bool contains(const std::string& name) const { return values_.count(name) != 0; }
    std::optional<double> find(const std::string& name) const;
    /// Throws BindingError when unbound.
    double at(const std::string& name) const;
    bool is_integer(const std::string& name) const { return integers_.count(name) != 0; }

    const std::map<std::string, double>& values() const noexcept { return values_; }
    bool empty() const noexcept { return values_.empty(); }
    /// "n=3, L=2.5"
    std::string describe() const;

    friend bool operator==(const ParamEnv&, const ParamEnv&) = default;

private:
    std::map<std::string, double> values_;
    std::set<std::string> integers_;
};

/// Closed interval [lo, hi] with finite endpoints and lo <= hi.
class Interval {
public:
    Interval(double lo, double hi);
    double lo() const noexcept { return lo_; }
    double hi() const noexcept { return hi_; }
    double width() const noexcept { return hi_ - lo_; }
    bool contains(double x) const noexcept { return lo_ <= x && x <= hi_; }
    bool degenerate() const noexcept { return lo_ == hi_; }

    friend bool operator==(const Interval&, const Interval&) = default;

private:
    double lo_;
    double hi_;
};

/// Parses the infix grammar: + - * / ^, unary minus, sin(), cos(), pi, x,
/// numeric literals and parameter identifiers. `^` binds tighter than unary
/// minus and is right-associative; its exponent must reduce to an integer
/// constant. Throws ParseError.
Expr parse_expr(std::string_view text);

/// As above, with the named identifiers read as the given constants. This is
/// how an index like n can appear in an exponent (x^n).
Expr parse_expr(std::string_view text, const std::map<std::string, Number>& constants);

/// Canonical fully parenthesized infix form; parse_expr(to_string(e)) equals normalize(e).
std::string to_string(const Expr& e);

/// Rewrites literals into the shape the printer/parser pair produces:
/// negative constants become Neg, rationals without a decimal literal become
/// Div of integers, doubles become whatever their shortest text parses as.
Expr normalize(const Expr& e);

/// Binary64 evaluation at `x`. Throws DomainError on division by zero and
/// BindingError on unbound parameters.
double eval_expr(const Expr& e, double x, const ParamEnv& env);

/// Parameter names in `e` (never "x").
std::set<std::string> free_params(const Expr& e);

bool depends_on_x(const Expr& e);

/// Replaces every Param `name` with `value`.
Expr substitute(const Expr& e, const std::string& name, const Expr& value);

/// Exact value of a tree without x or parameters (pi excluded), or nullopt.
std::optional<Number> constant_value(const Expr& e);

/// Number of nodes.
std::size_t node_count(const Expr& e);

}  // namespace fourcalc
