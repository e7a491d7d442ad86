#pragma once

#include "fourcalc/expr.hpp"

#include <span>
#include <string>
#include <vector>

namespace fourcalc {

/// Flat postfix program for an Expr. Parameters are resolved to slot indices
/// at compile time, so evaluation does no name lookups. Performs the same
/// floating-point operations in the same order as eval_expr, so results are
/// bitwise identical to the tree walker.
class CompiledExpr {
public:
    /// Every parameter of `e` must appear in `slots`; otherwise BindingError.
    CompiledExpr(const Expr& e, std::vector<std::string> slots);

    double operator()(double x, std::span<const double> slot_values) const;

    const std::vector<std::string>& slots() const noexcept { return slots_; }
    /// Slot index of `name`, or -1.
    int slot_of(const std::string& name) const noexcept;

private:
    enum class Code : unsigned char { Const, Var, Slot, Neg, Add, Sub, Mul, Div, Pow, Sin, Cos };
    struct Instr {
        Code code;
        int arg = 0;         // slot index, exponent, or index into nodes_ (Div/Pow)
        double value = 0.0;  // Const
    };

    void emit(const Expr& e, int depth);

    std::vector<Instr> program_;
    std::vector<Expr> nodes_;  // subtrees kept for error messages
    std::vector<std::string> slots_;
    int max_depth_ = 0;
};

/// CompiledExpr with its parameter values captured from a ParamEnv; a plain
/// callable f(x). Copyable and safe to call concurrently.
class BoundExpr {
public:
    BoundExpr(const Expr& e, const ParamEnv& env);
    double operator()(double x) const { return program_(x, values_); }

private:
    CompiledExpr program_;
    std::vector<double> values_;
};

}  // namespace fourcalc
