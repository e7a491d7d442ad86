// Recursive-descent parser for the infix expression grammar.
//
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := ('-' | '+') unary | power
//   power   := primary ('^' unary)?
//   primary := number | 'pi' | 'x' | ident | ('sin' | 'cos') '(' expr ')' | '(' expr ')'

#include "fourcalc/error.hpp"
#include "fourcalc/expr.hpp"

#include <cctype>
#include <limits>

namespace fourcalc {

namespace {

enum class Tok { Number, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, End };

struct Token {
    Tok kind;
    std::size_t offset;
    std::string_view text;
};

const std::vector<std::string> kOperandStart = {"number", "identifier", "(", "-"};
const std::vector<std::string> kAfterOperand = {"+", "-", "*", "/", "^", ")", "end of input"};

constexpr int kMaxExponent = 4096;

class Parser {
public:
    Parser(std::string_view text, const std::map<std::string, Number>* constants)
        : text_(text), constants_(constants) {
        advance();
    }

    Expr parse() {
        Expr e = expression();
        if (tok_.kind != Tok::End) fail("unexpected '" + std::string(tok_.text) + "'", kAfterOperand);
        return e;
    }

private:
    [[noreturn]] void fail(const std::string& message, std::vector<std::string> expected) const {
        throw ParseError(message, tok_.offset, std::move(expected));
    }

    void advance() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        const std::size_t start = pos_;
        if (pos_ == text_.size()) {
            tok_ = {Tok::End, start, {}};
            return;
        }
        const char c = text_[pos_];
        auto single = [&](Tok kind) {
            ++pos_;
            tok_ = {kind, start, text_.substr(start, 1)};
        };
        switch (c) {
            case '+': return single(Tok::Plus);
            case '-': return single(Tok::Minus);
            case '*': return single(Tok::Star);
            case '/': return single(Tok::Slash);
            case '^': return single(Tok::Caret);
            case '(': return single(Tok::LParen);
            case ')': return single(Tok::RParen);
            default: break;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
            if (pos_ < text_.size() && text_[pos_] == '.') {
                ++pos_;
                while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
            }
            if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
                std::size_t p = pos_ + 1;
                if (p < text_.size() && (text_[p] == '+' || text_[p] == '-')) ++p;
                if (p < text_.size() && std::isdigit(static_cast<unsigned char>(text_[p]))) {
                    while (p < text_.size() && std::isdigit(static_cast<unsigned char>(text_[p]))) ++p;
                    pos_ = p;
                }
            }
            tok_ = {Tok::Number, start, text_.substr(start, pos_ - start)};
            return;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            while (pos_ < text_.size() &&
                   (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
                ++pos_;
            tok_ = {Tok::Ident, start, text_.substr(start, pos_ - start)};
            return;
        }
        tok_ = {Tok::End, start, text_.substr(start, 1)};
        throw ParseError("unexpected character '" + std::string(1, c) + "'", start,
                         {"number", "identifier", "operator", "(", ")"});
    }

    Expr expression() {
        Expr lhs = term();
        while (tok_.kind == Tok::Plus || tok_.kind == Tok::Minus) {
            const bool plus = tok_.kind == Tok::Plus;
            advance();
            Expr rhs = term();
            lhs = plus ? Expr::add(std::move(lhs), std::move(rhs)) : Expr::sub(std::move(lhs), std::move(rhs));
        }
        return lhs;
    }

    Expr term() {
        Expr lhs = unary();
        while (tok_.kind == Tok::Star || tok_.kind == Tok::Slash) {
            const bool times = tok_.kind == Tok::Star;
            advance();
            Expr rhs = unary();
            lhs = times ? Expr::mul(std::move(lhs), std::move(rhs)) : Expr::div(std::move(lhs), std::move(rhs));
        }
        return lhs;
    }

    Expr unary() {
        if (tok_.kind == Tok::Minus) {
            advance();
            return Expr::neg(unary());
        }
        if (tok_.kind == Tok::Plus) {
            advance();
            return unary();
        }
        return power();
    }

    Expr power() {
        Expr base = primary();
        if (tok_.kind != Tok::Caret) return base;
        advance();
        const std::size_t exponent_offset = tok_.offset;
        Expr exponent = unary();
        const auto value = constant_value(exponent);
        const auto k = value ? as_integer(*value) : std::nullopt;
        if (!k) throw ParseError("exponent must be an integer constant", exponent_offset, {"integer"});
        if (*k > kMaxExponent || *k < -kMaxExponent)
            throw ParseError("exponent out of range", exponent_offset, {"integer"});
        return Expr::pow(std::move(base), static_cast<int>(*k));
    }

    Expr primary() {
        switch (tok_.kind) {
            case Tok::Number: {
                auto value = parse_number_literal(tok_.text);
                if (!value) fail("malformed number '" + std::string(tok_.text) + "'", {"number"});
                advance();
                return Expr::constant(*value);
            }
            case Tok::LParen: {
                advance();
                Expr inner = expression();
                if (tok_.kind != Tok::RParen) fail("expected ')'", {")", "+", "-", "*", "/", "^"});
                advance();
                return inner;
            }
            case Tok::Ident:
                return identifier();
            default:
                fail(tok_.kind == Tok::End ? "unexpected end of input" : "unexpected '" + std::string(tok_.text) + "'",
                     kOperandStart);
        }
    }

    Expr identifier() {
        const Token ident = tok_;
        advance();
        const bool call = tok_.kind == Tok::LParen;
        if (call) {
            if (ident.text != "sin" && ident.text != "cos")
                throw ParseError("unsupported function '" + std::string(ident.text) + "'", ident.offset,
                                 {"sin", "cos"});
            advance();
            Expr arg = expression();
            if (tok_.kind != Tok::RParen) fail("expected ')'", {")", "+", "-", "*", "/", "^"});
            advance();
            return ident.text == "sin" ? Expr::sin(std::move(arg)) : Expr::cos(std::move(arg));
        }
        if (ident.text == "sin" || ident.text == "cos") fail("expected '(' after " + std::string(ident.text), {"("});
        if (ident.text == "pi") return Expr::pi();
        if (ident.text == kVariable) return Expr::var();
        if (constants_) {
            auto it = constants_->find(std::string(ident.text));
            if (it != constants_->end()) return Expr::constant(it->second);
        }
        return Expr::param(std::string(ident.text));
    }

    std::string_view text_;
    const std::map<std::string, Number>* constants_ = nullptr;
    std::size_t pos_ = 0;
    Token tok_{Tok::End, 0, {}};
};

}  // namespace

Expr parse_expr(std::string_view text) { return Parser(text, nullptr).parse(); }

Expr parse_expr(std::string_view text, const std::map<std::string, Number>& constants) {
    return Parser(text, &constants).parse();
}

}  // namespace fourcalc
