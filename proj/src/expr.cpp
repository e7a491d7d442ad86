#include "fourcalc/expr.hpp"

#include "fourcalc/error.hpp"

#include <cctype>
#include <cmath>
#include <numbers>
#include <sstream>

namespace fourcalc {

struct Expr::Node {
    Op op;
    Number value{};
    std::string name{};
    int exponent = 0;
    std::vector<Expr> children{};
};

namespace {

bool reserved(std::string_view name) {
    return name == kVariable || name == "pi" || name == "sin" || name == "cos";
}

bool valid_identifier(std::string_view name) {
    if (name.empty()) return false;
    if (!(std::isalpha(static_cast<unsigned char>(name[0])) || name[0] == '_')) return false;
    for (char c : name)
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) return false;
    return true;
}

}  // namespace

Expr Expr::constant(Number value) {
    if (const auto* d = std::get_if<double>(&value); d && !std::isfinite(*d))
        throw ArgumentError("non-finite constant");
    return Expr(std::make_shared<const Node>(Node{Op::Const, value}));
}

Expr Expr::real(double value) { return constant(Number(value)); }

Expr Expr::pi() {
    static const Expr instance(std::make_shared<const Node>(Node{Op::Pi}));
    return instance;
}

Expr Expr::var() {
    static const Expr instance(std::make_shared<const Node>(Node{Op::Var}));
    return instance;
}

Expr Expr::param(std::string name) {
    if (!valid_identifier(name) || reserved(name))
        throw ArgumentError("invalid parameter name '" + name + "'");
    return Expr(std::make_shared<const Node>(Node{Op::Param, {}, std::move(name)}));
}

Expr Expr::neg(Expr operand) {
    return Expr(std::make_shared<const Node>(Node{Op::Neg, {}, {}, 0, {std::move(operand)}}));
}

namespace {

template <class E>
std::vector<E> pair_of(E a, E b) {
    std::vector<E> v;
    v.reserve(2);
    v.push_back(std::move(a));
    v.push_back(std::move(b));
    return v;
}

}  // namespace

Expr Expr::add(Expr lhs, Expr rhs) {
    return Expr(std::make_shared<const Node>(Node{Op::Add, {}, {}, 0, pair_of(std::move(lhs), std::move(rhs))}));
}

Expr Expr::sub(Expr lhs, Expr rhs) {
    return Expr(std::make_shared<const Node>(Node{Op::Sub, {}, {}, 0, pair_of(std::move(lhs), std::move(rhs))}));
}

Expr Expr::mul(Expr lhs, Expr rhs) {
    return Expr(std::make_shared<const Node>(Node{Op::Mul, {}, {}, 0, pair_of(std::move(lhs), std::move(rhs))}));
}

Expr Expr::div(Expr lhs, Expr rhs) {
    return Expr(std::make_shared<const Node>(Node{Op::Div, {}, {}, 0, pair_of(std::move(lhs), std::move(rhs))}));
}

Expr Expr::pow(Expr base, int exponent) {
    return Expr(std::make_shared<const Node>(Node{Op::IntPow, {}, {}, exponent, {std::move(base)}}));
}

Expr Expr::sin(Expr operand) {
    return Expr(std::make_shared<const Node>(Node{Op::Sin, {}, {}, 0, {std::move(operand)}}));
}

Expr Expr::cos(Expr operand) {
    return Expr(std::make_shared<const Node>(Node{Op::Cos, {}, {}, 0, {std::move(operand)}}));
}

Op Expr::op() const noexcept { return node_->op; }

const Number& Expr::number() const {
    if (node_->op != Op::Const) throw ArgumentError("not a constant node");
    return node_->value;
}

const std::string& Expr::name() const {
    if (node_->op != Op::Param) throw ArgumentError("not a parameter node");
    return node_->name;
}

int Expr::exponent() const {
    if (node_->op != Op::IntPow) throw ArgumentError("not a power node");
    return node_->exponent;
}

std::size_t Expr::arity() const noexcept { return node_->children.size(); }

const Expr& Expr::child(std::size_t i) const { return node_->children.at(i); }

bool operator==(const Expr& a, const Expr& b) {
    if (a.node_ == b.node_) return true;
    const auto& na = *a.node_;
    const auto& nb = *b.node_;
    if (na.op != nb.op || na.children.size() != nb.children.size()) return false;
    switch (na.op) {
        case Op::Const:
            return same_number(na.value, nb.value);
        case Op::Param:
            return na.name == nb.name;
        case Op::IntPow:
            if (na.exponent != nb.exponent) return false;
            break;
        default:
            break;
    }
    for (std::size_t i = 0; i < na.children.size(); ++i)
        if (!(na.children[i] == nb.children[i])) return false;
    return true;
}

// ---------------------------------------------------------------------------
// ParamEnv / Interval

ParamEnv::ParamEnv(std::initializer_list<std::pair<std::string, double>> values) {
    for (const auto& [name, value] : values) bind(name, value);
}

ParamEnv& ParamEnv::bind(const std::string& name, double value, bool integer) {
    if (!valid_identifier(name) || reserved(name))
        throw ArgumentError("invalid parameter name '" + name + "'");
    if (values_.count(name)) throw ArgumentError("parameter '" + name + "' bound twice");
    if (!std::isfinite(value)) throw ArgumentError("parameter '" + name + "' is not finite");
    if (integer && std::trunc(value) != value)
        throw ArgumentError("integer parameter '" + name + "' bound to non-integer value");
    values_.emplace(name, value);
    if (integer) integers_.insert(name);
    return *this;
}

ParamEnv ParamEnv::with(const std::string& name, double value, bool integer) const {
    ParamEnv copy = *this;
    copy.values_.erase(name);
    copy.integers_.erase(name);
    copy.bind(name, value, integer);
    return copy;
}

std::optional<double> ParamEnv::find(const std::string& name) const {
    auto it = values_.find(name);
    if (it == values_.end()) return std::nullopt;
    return it->second;
}

double ParamEnv::at(const std::string& name) const {
    auto it = values_.find(name);
    if (it == values_.end()) throw BindingError(name);
    return it->second;
}

std::string ParamEnv::describe() const {
    std::string out;
    for (const auto& [name, value] : values_) {
        if (!out.empty()) out += ", ";
        out += name + "=" + format_double(value);
    }
    return out;
}

Interval::Interval(double lo, double hi) : lo_(lo), hi_(hi) {
    if (!std::isfinite(lo) || !std::isfinite(hi)) throw ArgumentError("interval endpoints must be finite");
    if (lo > hi) throw ArgumentError("interval requires lo <= hi");
}

// ---------------------------------------------------------------------------
// Printing

namespace {

void print_number(const Number& n, std::string& out) {
    if (is_negative(n)) {
        out += "(-";
        print_number(negate(n), out);
        out += ")";
        return;
    }
    if (auto lit = number_literal(n)) {
        out += *lit;
        return;
    }
    if (const auto* r = std::get_if<Rational>(&n)) {
        if (r->is_integer()) {
            // Beyond 2^53: no exact literal exists, the text reads back as a double.
            out += format_double(r->to_double());
            return;
        }
        out += "(";
        print_number(Number(Rational(r->num())), out);
        out += "/";
        print_number(Number(Rational(r->den())), out);
        out += ")";
        return;
    }
    // Doubles whose shortest text reads back as an exact rational.
    out += format_double(std::get<double>(n));
}

void print(const Expr& e, std::string& out) {
    auto binary = [&](const char* op) {
        out += "(";
        print(e.lhs(), out);
        out += op;
        print(e.rhs(), out);
        out += ")";
    };
    switch (e.op()) {
        case Op::Const:
            print_number(e.number(), out);
            break;
        case Op::Pi:
            out += "pi";
            break;
        case Op::Var:
            out += kVariable;
            break;
        case Op::Param:
            out += e.name();
            break;
        case Op::Neg:
            out += "(-";
            print(e.operand(), out);
            out += ")";
            break;
        case Op::Add:
            binary(" + ");
            break;
        case Op::Sub:
            binary(" - ");
            break;
        case Op::Mul:
            binary(" * ");
            break;
        case Op::Div:
            binary(" / ");
            break;
        case Op::IntPow:
            out += "(";
            print(e.operand(), out);
            out += "^";
            if (e.exponent() < 0)
                out += "(-" + std::to_string(-static_cast<long long>(e.exponent())) + ")";
            else
                out += std::to_string(e.exponent());
            out += ")";
            break;
        case Op::Sin:
            out += "sin(";
            print(e.operand(), out);
            out += ")";
            break;
        case Op::Cos:
            out += "cos(";
            print(e.operand(), out);
            out += ")";
            break;
    }
}

}  // namespace

std::string to_string(const Expr& e) {
    std::string out;
    print(e, out);
    return out;
}

Expr normalize(const Expr& e) {
    switch (e.op()) {
        case Op::Const:
            // A literal means whatever its printed text parses to.
            return parse_expr(to_string(e));
        case Op::Pi:
        case Op::Var:
        case Op::Param:
            return e;
        case Op::Neg:
            return Expr::neg(normalize(e.operand()));
        case Op::Add:
            return Expr::add(normalize(e.lhs()), normalize(e.rhs()));
        case Op::Sub:
            return Expr::sub(normalize(e.lhs()), normalize(e.rhs()));
        case Op::Mul:
            return Expr::mul(normalize(e.lhs()), normalize(e.rhs()));
        case Op::Div:
            return Expr::div(normalize(e.lhs()), normalize(e.rhs()));
        case Op::IntPow:
            return Expr::pow(normalize(e.operand()), e.exponent());
        case Op::Sin:
            return Expr::sin(normalize(e.operand()));
        case Op::Cos:
            return Expr::cos(normalize(e.operand()));
    }
    return e;
}

// ---------------------------------------------------------------------------
// Evaluation and structural queries

double eval_expr(const Expr& e, double x, const ParamEnv& env) {
    switch (e.op()) {
        case Op::Const:
            return to_double(e.number());
        case Op::Pi:
            return std::numbers::pi;
        case Op::Var:
            return x;
        case Op::Param:
            return env.at(e.name());
        case Op::Neg:
            return -eval_expr(e.operand(), x, env);
        case Op::Add:
            return eval_expr(e.lhs(), x, env) + eval_expr(e.rhs(), x, env);
        case Op::Sub:
            return eval_expr(e.lhs(), x, env) - eval_expr(e.rhs(), x, env);
        case Op::Mul:
            return eval_expr(e.lhs(), x, env) * eval_expr(e.rhs(), x, env);
        case Op::Div: {
            const double num = eval_expr(e.lhs(), x, env);
            const double den = eval_expr(e.rhs(), x, env);
            if (den == 0.0) throw DomainError(to_string(e), "x=" + format_double(x));
            return num / den;
        }
        case Op::IntPow: {
            const double base = eval_expr(e.operand(), x, env);
            if (base == 0.0 && e.exponent() < 0) throw DomainError(to_string(e), "x=" + format_double(x));
            return std::pow(base, e.exponent());
        }
        case Op::Sin:
            return std::sin(eval_expr(e.operand(), x, env));
        case Op::Cos:
            return std::cos(eval_expr(e.operand(), x, env));
    }
    return 0.0;
}

namespace {

void collect_params(const Expr& e, std::set<std::string>& out) {
    if (e.op() == Op::Param) {
        out.insert(e.name());
        return;
    }
    for (std::size_t i = 0; i < e.arity(); ++i) collect_params(e.child(i), out);
}

}  // namespace

std::set<std::string> free_params(const Expr& e) {
    std::set<std::string> out;
    collect_params(e, out);
    return out;
}

bool depends_on_x(const Expr& e) {
    if (e.op() == Op::Var) return true;
    for (std::size_t i = 0; i < e.arity(); ++i)
        if (depends_on_x(e.child(i))) return true;
    return false;
}

Expr substitute(const Expr& e, const std::string& name, const Expr& value) {
    switch (e.op()) {
        case Op::Param:
            return e.name() == name ? value : e;
        case Op::Const:
        case Op::Pi:
        case Op::Var:
            return e;
        case Op::Neg:
            return Expr::neg(substitute(e.operand(), name, value));
        case Op::Add:
            return Expr::add(substitute(e.lhs(), name, value), substitute(e.rhs(), name, value));
        case Op::Sub:
            return Expr::sub(substitute(e.lhs(), name, value), substitute(e.rhs(), name, value));
        case Op::Mul:
            return Expr::mul(substitute(e.lhs(), name, value), substitute(e.rhs(), name, value));
        case Op::Div:
            return Expr::div(substitute(e.lhs(), name, value), substitute(e.rhs(), name, value));
        case Op::IntPow:
            return Expr::pow(substitute(e.operand(), name, value), e.exponent());
        case Op::Sin:
            return Expr::sin(substitute(e.operand(), name, value));
        case Op::Cos:
            return Expr::cos(substitute(e.operand(), name, value));
    }
    return e;
}

namespace {

std::optional<Number> fold_constant(const Expr& e);

std::optional<Number> finite_only(std::optional<Number> v) {
    if (v && !std::isfinite(to_double(*v))) return std::nullopt;
    return v;
}

}  // namespace

std::optional<Number> constant_value(const Expr& e) { return fold_constant(e); }

namespace {

std::optional<Number> fold_constant(const Expr& e) {
    switch (e.op()) {
        case Op::Const:
            return e.number();
        case Op::Pi:
        case Op::Var:
        case Op::Param:
        case Op::Sin:
        case Op::Cos:
            return std::nullopt;
        case Op::Neg: {
            auto v = fold_constant(e.operand());
            if (!v) return std::nullopt;
            return negate(*v);
        }
        case Op::IntPow: {
            auto v = fold_constant(e.operand());
            if (!v || (is_zero(*v) && e.exponent() < 0)) return std::nullopt;
            return finite_only(pow(*v, e.exponent()));
        }
        default:
            break;
    }
    auto a = fold_constant(e.lhs());
    auto b = fold_constant(e.rhs());
    if (!a || !b) return std::nullopt;
    switch (e.op()) {
        case Op::Add:
            return finite_only(add(*a, *b));
        case Op::Sub:
            return finite_only(sub(*a, *b));
        case Op::Mul:
            return finite_only(mul(*a, *b));
        case Op::Div:
            if (is_zero(*b)) return std::nullopt;
            return finite_only(div(*a, *b));
        default:
            return std::nullopt;
    }
}

}  // namespace

std::size_t node_count(const Expr& e) {
    std::size_t n = 1;
    for (std::size_t i = 0; i < e.arity(); ++i) n += node_count(e.child(i));
    return n;
}

}  // namespace fourcalc
