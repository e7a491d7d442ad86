#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

namespace fourcalc {

/// Exact rational with 64-bit numerator/denominator, always reduced, den > 0.
/// Arithmetic returns nullopt on overflow; callers fall back to binary64.
class Rational {
public:
    constexpr Rational() = default;
    Rational(std::int64_t num, std::int64_t den = 1);

    std::int64_t num() const noexcept { return num_; }
    std::int64_t den() const noexcept { return den_; }

    bool is_integer() const noexcept { return den_ == 1; }
    bool is_zero() const noexcept { return num_ == 0; }
    double to_double() const noexcept;

    friend bool operator==(const Rational&, const Rational&) = default;

    static std::optional<Rational> add(const Rational& a, const Rational& b);
    static std::optional<Rational> sub(const Rational& a, const Rational& b);
    static std::optional<Rational> mul(const Rational& a, const Rational& b);
    static std::optional<Rational> div(const Rational& a, const Rational& b);
    static std::optional<Rational> pow(const Rational& a, int exponent);
    std::optional<Rational> negated() const;

private:
    std::int64_t num_ = 0;
    std::int64_t den_ = 1;
};

/// A literal: exact rational when possible, binary64 otherwise.
using Number = std::variant<Rational, double>;

double to_double(const Number& n) noexcept;
bool is_zero(const Number& n) noexcept;
bool is_one(const Number& n) noexcept;
bool is_negative(const Number& n) noexcept;
Number negate(const Number& n);
/// Exact integer value, if the number is one.
std::optional<std::int64_t> as_integer(const Number& n) noexcept;

Number add(const Number& a, const Number& b);
Number sub(const Number& a, const Number& b);
Number mul(const Number& a, const Number& b);
/// Precondition: b is not zero.
Number div(const Number& a, const Number& b);
/// Precondition: a != 0 when exponent < 0.
Number pow(const Number& a, int exponent);

/// Structural equality: a rational never equals a double, even if numerically equal.
bool same_number(const Number& a, const Number& b) noexcept;

/// Classifies a numeric literal (digits, optional fraction, optional exponent).
/// It becomes a Rational when the decimal mantissa and the reduced
/// numerator/denominator all stay within 2^53, so that converting to binary64
/// reproduces strtod exactly; otherwise it is parsed as a double.
std::optional<Number> parse_number_literal(std::string_view text);

/// Text for a non-negative number that parse_number_literal maps back to the
/// same value, or nullopt when no such literal exists (e.g. 1/3).
std::optional<std::string> number_literal(const Number& n);

/// Shortest round-trip text for a double, e.g. "0.1", "1e-300".
std::string format_double(double v);

}  // namespace fourcalc
