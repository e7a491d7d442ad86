#include "fourcalc/error.hpp"

namespace fourcalc {

namespace {

std::string join_context(const std::string& where, const std::string& inner) {
    if (inner.empty()) return where;
    return where + ": " + inner;
}

std::string with_context(const std::string& message, const std::string& context) {
    if (context.empty()) return message;
    return message + " (" + context + ")";
}

}  // namespace

ParseError::ParseError(std::string message, std::size_t offset, std::vector<std::string> expected)
    : Error("parse error at offset " + std::to_string(offset) + ": " + message),
      offset_(offset),
      expected_(std::move(expected)) {}

EvalError::EvalError(const std::string& message, std::string context)
    : Error(with_context(message, context)), context_(std::move(context)) {}

DomainError::DomainError(std::string subtree, std::string context)
    : EvalError("division by zero in " + subtree, std::move(context)), subtree_(std::move(subtree)) {}

BindingError::BindingError(std::string name, std::string context)
    : EvalError("unbound parameter '" + name + "'", std::move(context)), name_(std::move(name)) {}

void rethrow_with_context(const std::string& where) {
    try {
        throw;
    } catch (const DomainError& e) {
        throw DomainError(e.subtree(), join_context(where, e.context()));
    } catch (const BindingError& e) {
        throw BindingError(e.name(), join_context(where, e.context()));
    } catch (const EvalError& e) {
        throw EvalError(e.what(), where);
    }
}

}  // namespace fourcalc
