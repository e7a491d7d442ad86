#include "fourcalc/symdiff.hpp"

#include "fourcalc/compiled.hpp"
#include "fourcalc/error.hpp"

#include <cmath>
#include <limits>

namespace fourcalc {

Expr differentiate(const Expr& e) {
    const Expr zero = Expr::integer(0);
    switch (e.op()) {
        case Op::Const:
        case Op::Pi:
        case Op::Param:
            return zero;
        case Op::Var:
            return Expr::integer(1);
        case Op::Neg:
            return Expr::neg(differentiate(e.operand()));
        case Op::Add:
            return Expr::add(differentiate(e.lhs()), differentiate(e.rhs()));
        case Op::Sub:
            return Expr::sub(differentiate(e.lhs()), differentiate(e.rhs()));
        case Op::Mul:
            // (u v)' = u v' + v u'
            return Expr::add(Expr::mul(e.lhs(), differentiate(e.rhs())), Expr::mul(e.rhs(), differentiate(e.lhs())));
        case Op::Div:
            // (u / v)' = (u' v - u v') / v^2
            return Expr::div(Expr::sub(Expr::mul(differentiate(e.lhs()), e.rhs()),
                                       Expr::mul(e.lhs(), differentiate(e.rhs()))),
                             Expr::pow(e.rhs(), 2));
        case Op::IntPow: {
            const int k = e.exponent();
            if (k == 0) return zero;
            return Expr::mul(Expr::mul(Expr::integer(k), Expr::pow(e.operand(), k - 1)), differentiate(e.operand()));
        }
        case Op::Sin:
            return Expr::mul(Expr::cos(e.operand()), differentiate(e.operand()));
        case Op::Cos:
            return Expr::mul(Expr::neg(Expr::sin(e.operand())), differentiate(e.operand()));
    }
    return zero;
}

namespace {

bool is_zero_const(const Expr& e) { return e.op() == Op::Const && is_zero(e.number()); }
bool is_one_const(const Expr& e) { return e.op() == Op::Const && is_one(e.number()); }

/// Factor ordering inside products: constants, pi, parameters, everything else.
int factor_rank(const Expr& e) {
    switch (e.op()) {
        case Op::Const:
            return 0;
        case Op::Pi:
            return 1;
        case Op::Param:
            return 2;
        default:
            return 3;
    }
}

/// k for operands of the form pi, k*pi or 0 with integer k.
std::optional<std::int64_t> integer_multiple_of_pi(const Expr& e) {
    if (is_zero_const(e)) return 0;
    if (e.op() == Op::Pi) return 1;
    if (e.op() == Op::Mul && e.rhs().op() == Op::Pi && e.lhs().op() == Op::Const) return as_integer(e.lhs().number());
    return std::nullopt;
}

Expr rewrite_node(const Expr& e) {
    if (e.op() != Op::Const) {
        if (auto folded = constant_value(e)) return Expr::constant(*folded);
    }
    switch (e.op()) {
        case Op::Neg:
            if (e.operand().op() == Op::Neg) return e.operand().operand();
            break;
        case Op::Add:
            if (is_zero_const(e.lhs())) return e.rhs();
            if (is_zero_const(e.rhs())) return e.lhs();
            break;
        case Op::Sub:
            if (is_zero_const(e.rhs())) return e.lhs();
            if (is_zero_const(e.lhs())) return Expr::neg(e.rhs());
            break;
        case Op::Mul:
            if (is_zero_const(e.lhs()) || is_zero_const(e.rhs())) return Expr::integer(0);
            if (is_one_const(e.lhs())) return e.rhs();
            if (is_one_const(e.rhs())) return e.lhs();
            if (factor_rank(e.rhs()) < factor_rank(e.lhs())) return Expr::mul(e.rhs(), e.lhs());
            if (e.lhs().op() == Op::Const && e.rhs().op() == Op::Mul && e.rhs().lhs().op() == Op::Const)
                return Expr::mul(Expr::constant(mul(e.lhs().number(), e.rhs().lhs().number())), e.rhs().rhs());
            break;
        case Op::Div:
            if (is_one_const(e.rhs())) return e.lhs();
            if (is_zero_const(e.lhs())) return Expr::integer(0);
            break;
        case Op::IntPow:
            if (e.exponent() == 1) return e.operand();
            if (e.exponent() == 0) return Expr::integer(1);
            break;
        case Op::Sin:
            if (integer_multiple_of_pi(e.operand())) return Expr::integer(0);
            break;
        case Op::Cos:
            if (auto k = integer_multiple_of_pi(e.operand())) return Expr::integer(*k % 2 == 0 ? 1 : -1);
            break;
        default:
            break;
    }
    return e;
}

Expr simplify_pass(const Expr& e) {
    Expr rebuilt = e;
    switch (e.op()) {
        case Op::Neg:
            rebuilt = Expr::neg(simplify_pass(e.operand()));
            break;
        case Op::Sin:
            rebuilt = Expr::sin(simplify_pass(e.operand()));
            break;
        case Op::Cos:
            rebuilt = Expr::cos(simplify_pass(e.operand()));
            break;
        case Op::IntPow:
            rebuilt = Expr::pow(simplify_pass(e.operand()), e.exponent());
            break;
        case Op::Add:
            rebuilt = Expr::add(simplify_pass(e.lhs()), simplify_pass(e.rhs()));
            break;
        case Op::Sub:
            rebuilt = Expr::sub(simplify_pass(e.lhs()), simplify_pass(e.rhs()));
            break;
        case Op::Mul:
            rebuilt = Expr::mul(simplify_pass(e.lhs()), simplify_pass(e.rhs()));
            break;
        case Op::Div:
            rebuilt = Expr::div(simplify_pass(e.lhs()), simplify_pass(e.rhs()));
            break;
        default:
            return e;
    }
    // Local rules until the node stops changing; every rule shrinks the tree
    // or removes a factor-order inversion.
    for (;;) {
        Expr next = rewrite_node(rebuilt);
        if (next == rebuilt) return rebuilt;
        rebuilt = next;
    }
}

}  // namespace

Expr simplify(const Expr& e) {
    Expr current = e;
    for (;;) {
        Expr next = simplify_pass(current);
        if (next == current) return current;
        current = next;
    }
}

DerivativeCheckReport check_derivative(const Expr& f, const Expr& g, const Interval& dom, const ParamEnv& env,
                                       const DerivativeCheckOptions& options) {
    if (!(options.tol > 0)) throw ArgumentError("derivative check tolerance must be positive");
    if (options.samples < 1) throw ArgumentError("derivative check needs at least one sample");
    if (options.steps.empty()) throw ArgumentError("derivative check needs at least one step size");

    const BoundExpr fb(f, env);
    const BoundExpr gb(g, env);
    const double floor = options.abs_floor / options.tol;
    const int samples = dom.degenerate() ? 1 : options.samples;

    DerivativeCheckReport report;
    report.sample_count = samples;
    report.steps = options.steps;
    report.worst_env = env;
    report.worst_x = dom.lo();
    for (int i = 0; i < samples; ++i) {
        const double x = dom.degenerate() ? dom.lo() : dom.lo() + (i + 0.5) * dom.width() / samples;
        double best = std::numeric_limits<double>::infinity();
        double fx = 0.0;
        try {
            fx = fb(x);
            for (double h : options.steps) {
                const double fd = (gb(x + h) - gb(x - h)) / (2.0 * h);
                best = std::min(best, std::abs(fd - fx));
            }
        } catch (const EvalError&) {
            rethrow_with_context("derivative check sample x=" + format_double(x) +
                                 (env.empty() ? "" : " with " + env.describe()));
        }
        const double deviation = best / std::max(std::abs(fx), floor);
        if (!(deviation <= report.max_rel_deviation)) {
            report.max_rel_deviation = deviation;
            report.worst_x = x;
        }
    }
    report.pass = report.max_rel_deviation <= options.tol;
    return report;
}

}  // namespace fourcalc
