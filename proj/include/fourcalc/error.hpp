#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace fourcalc {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed expression text.
class ParseError : public Error {
public:
    ParseError(std::string message, std::size_t offset, std::vector<std::string> expected = {});

    /// 0-based byte offset into the input where parsing stopped.
    std::size_t offset() const noexcept { return offset_; }
    const std::vector<std::string>& expected() const noexcept { return expected_; }

private:
    std::size_t offset_;
    std::vector<std::string> expected_;
};

/// Evaluation failure. `context` accumulates where it happened (sample point,
/// subinterval index, ...) as the error propagates outward.
class EvalError : public Error {
public:
    explicit EvalError(const std::string& message, std::string context = {});
    const std::string& context() const noexcept { return context_; }

private:
    std::string context_;
};

/// Division by zero (or 0 raised to a negative power) inside an expression.
class DomainError : public EvalError {
public:
    DomainError(std::string subtree, std::string context = {});
    /// Printed form of the offending subexpression.
    const std::string& subtree() const noexcept { return subtree_; }

private:
    std::string subtree_;
};

/// A parameter referenced by an expression has no value.
class BindingError : public EvalError {
public:
    explicit BindingError(std::string name, std::string context = {});
    const std::string& name() const noexcept { return name_; }

private:
    std::string name_;
};

/// Violated precondition on plain arguments (bad n, degenerate interval, L = 0).
class ArgumentError : public Error {
public:
    using Error::Error;
};

/// Constraint sampler could not produce a satisfying environment.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Operation invoked on an object that does not satisfy its contract
/// (e.g. evaluating an unverified antiderivative).
class ContractError : public Error {
public:
    using Error::Error;
};

/// Parameter environment violates registered constraints.
class ConstraintError : public Error {
public:
    using Error::Error;
};

/// Re-throws the in-flight EvalError (DomainError, BindingError, or plain)
/// with `where` prepended to its context. Must be called from a catch block.
[[noreturn]] void rethrow_with_context(const std::string& where);

}  // namespace fourcalc
