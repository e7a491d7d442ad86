#include "fourcalc/compiled.hpp"

#include "fourcalc/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace fourcalc {

CompiledExpr::CompiledExpr(const Expr& e, std::vector<std::string> slots) : slots_(std::move(slots)) {
    emit(e, 1);
}

int CompiledExpr::slot_of(const std::string& name) const noexcept {
    auto it = std::find(slots_.begin(), slots_.end(), name);
    return it == slots_.end() ? -1 : static_cast<int>(it - slots_.begin());
}

void CompiledExpr::emit(const Expr& e, int depth) {
    max_depth_ = std::max(max_depth_, depth);
    switch (e.op()) {
        case Op::Const:
            program_.push_back({Code::Const, 0, to_double(e.number())});
            return;
        case Op::Pi:
            program_.push_back({Code::Const, 0, std::numbers::pi});
            return;
        case Op::Var:
            program_.push_back({Code::Var});
            return;
        case Op::Param: {
            const int slot = slot_of(e.name());
            if (slot < 0) throw BindingError(e.name());
            program_.push_back({Code::Slot, slot});
            return;
        }
        case Op::Neg:
            emit(e.operand(), depth);
            program_.push_back({Code::Neg});
            return;
        case Op::Sin:
            emit(e.operand(), depth);
            program_.push_back({Code::Sin});
            return;
        case Op::Cos:
            emit(e.operand(), depth);
            program_.push_back({Code::Cos});
            return;
        case Op::IntPow:
            emit(e.operand(), depth);
            nodes_.push_back(e);
            program_.push_back({Code::Pow, static_cast<int>(nodes_.size() - 1)});
            return;
        default:
            break;
    }
    emit(e.lhs(), depth);
    emit(e.rhs(), depth + 1);
    switch (e.op()) {
        case Op::Add:
            program_.push_back({Code::Add});
            break;
        case Op::Sub:
            program_.push_back({Code::Sub});
            break;
        case Op::Mul:
            program_.push_back({Code::Mul});
            break;
        case Op::Div:
            nodes_.push_back(e);
            program_.push_back({Code::Div, static_cast<int>(nodes_.size() - 1)});
            break;
        default:
            break;
    }
}

double CompiledExpr::operator()(double x, std::span<const double> slot_values) const {
    constexpr int kInline = 64;
    double inline_stack[kInline];
    inline_stack[0] = 0.0;
    std::vector<double> heap_stack;
    double* stack = inline_stack;
    if (max_depth_ > kInline) {
        heap_stack.resize(static_cast<std::size_t>(max_depth_));
        stack = heap_stack.data();
    }
    int top = -1;
    for (const Instr& in : program_) {
        switch (in.code) {
            case Code::Const:
                stack[++top] = in.value;
                break;
            case Code::Var:
                stack[++top] = x;
                break;
            case Code::Slot:
                stack[++top] = slot_values[static_cast<std::size_t>(in.arg)];
                break;
            case Code::Neg:
                stack[top] = -stack[top];
                break;
            case Code::Sin:
                stack[top] = std::sin(stack[top]);
                break;
            case Code::Cos:
                stack[top] = std::cos(stack[top]);
                break;
            case Code::Pow: {
                const int k = nodes_[static_cast<std::size_t>(in.arg)].exponent();
                if (stack[top] == 0.0 && k < 0)
                    throw DomainError(to_string(nodes_[static_cast<std::size_t>(in.arg)]), "x=" + format_double(x));
                stack[top] = std::pow(stack[top], k);
                break;
            }
            case Code::Add:
                --top;
                stack[top] = stack[top] + stack[top + 1];
                break;
            case Code::Sub:
                --top;
                stack[top] = stack[top] - stack[top + 1];
                break;
            case Code::Mul:
                --top;
                stack[top] = stack[top] * stack[top + 1];
                break;
            case Code::Div:
                --top;
                if (stack[top + 1] == 0.0)
                    throw DomainError(to_string(nodes_[static_cast<std::size_t>(in.arg)]), "x=" + format_double(x));
                stack[top] = stack[top] / stack[top + 1];
                break;
        }
    }
    return stack[0];
}

namespace {

std::vector<std::string> env_names(const ParamEnv& env) {
    std::vector<std::string> names;
    for (const auto& [name, value] : env.values()) names.push_back(name);
    return names;
}

std::vector<double> env_values(const ParamEnv& env) {
    std::vector<double> values;
    for (const auto& [name, value] : env.values()) values.push_back(value);
    return values;
}

}  // namespace

BoundExpr::BoundExpr(const Expr& e, const ParamEnv& env) : program_(e, env_names(env)), values_(env_values(env)) {}

}  // namespace fourcalc
