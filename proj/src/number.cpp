#include "fourcalc/number.hpp"

#include "fourcalc/error.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <limits>
#include <numeric>

namespace fourcalc {

namespace {

constexpr std::int64_t kExactLimit = std::int64_t{1} << 53;

__extension__ typedef __int128 i128;

std::optional<Rational> make_checked(i128 num, i128 den) {
    if (den == 0) return std::nullopt;
    if (den < 0) {
        num = -num;
        den = -den;
    }
    i128 a = num < 0 ? -num : num;
    i128 b = den;
    while (b != 0) {
        i128 t = a % b;
        a = b;
        b = t;
    }
    if (a > 1) {
        num /= a;
        den /= a;
    }
    constexpr i128 lo = std::numeric_limits<std::int64_t>::min() + 1;
    constexpr i128 hi = std::numeric_limits<std::int64_t>::max();
    if (num < lo || num > hi || den > hi) return std::nullopt;
    return Rational(static_cast<std::int64_t>(num), static_cast<std::int64_t>(den));
}

i128 pow10(int k) {
    i128 r = 1;
    for (int i = 0; i < k; ++i) r *= 10;
    return r;
}

}  // namespace

Rational::Rational(std::int64_t num, std::int64_t den) {
    if (den == 0) throw ArgumentError("rational with zero denominator");
    if (num == std::numeric_limits<std::int64_t>::min() || den == std::numeric_limits<std::int64_t>::min())
        throw ArgumentError("rational component out of range");
    if (den < 0) {
        num = -num;
        den = -den;
    }
    const std::int64_t g = std::gcd(num, den);
    num_ = num / g;
    den_ = den / g;
}

double Rational::to_double() const noexcept {
    return static_cast<double>(num_) / static_cast<double>(den_);
}

std::optional<Rational> Rational::add(const Rational& a, const Rational& b) {
    return make_checked(i128(a.num_) * b.den_ + i128(b.num_) * a.den_, i128(a.den_) * b.den_);
}

std::optional<Rational> Rational::sub(const Rational& a, const Rational& b) {
    return make_checked(i128(a.num_) * b.den_ - i128(b.num_) * a.den_, i128(a.den_) * b.den_);
}

std::optional<Rational> Rational::mul(const Rational& a, const Rational& b) {
    return make_checked(i128(a.num_) * b.num_, i128(a.den_) * b.den_);
}

std::optional<Rational> Rational::div(const Rational& a, const Rational& b) {
    if (b.num_ == 0) return std::nullopt;
    return make_checked(i128(a.num_) * b.den_, i128(a.den_) * b.num_);
}

std::optional<Rational> Rational::pow(const Rational& a, int exponent) {
    if (exponent < 0) {
        if (a.num_ == 0) return std::nullopt;
        auto inv = make_checked(a.den_, a.num_);
        if (!inv) return std::nullopt;
        return pow(*inv, -exponent);
    }
    Rational result(1);
    for (int i = 0; i < exponent; ++i) {
        auto next = mul(result, a);
        if (!next) return std::nullopt;
        result = *next;
    }
    return result;
}

std::optional<Rational> Rational::negated() const { return make_checked(-i128(num_), den_); }

double to_double(const Number& n) noexcept {
    return std::visit([](const auto& v) -> double {
        if constexpr (std::is_same_v<std::decay_t<decltype(v)>, Rational>)
            return v.to_double();
        else
            return v;
    }, n);
}

bool is_zero(const Number& n) noexcept { return to_double(n) == 0.0; }
bool is_one(const Number& n) noexcept { return to_double(n) == 1.0; }
bool is_negative(const Number& n) noexcept { return to_double(n) < 0.0; }

std::optional<std::int64_t> as_integer(const Number& n) noexcept {
    if (const auto* r = std::get_if<Rational>(&n); r && r->is_integer()) return r->num();
    return std::nullopt;
}

namespace {

template <class ExactOp, class FloatOp>
Number combine(const Number& a, const Number& b, ExactOp exact, FloatOp fl) {
    const auto* ra = std::get_if<Rational>(&a);
    const auto* rb = std::get_if<Rational>(&b);
    if (ra && rb) {
        if (auto r = exact(*ra, *rb)) return *r;
    }
    return fl(to_double(a), to_double(b));
}

}  // namespace

Number negate(const Number& n) {
    if (const auto* r = std::get_if<Rational>(&n)) {
        if (auto neg = r->negated()) return *neg;
    }
    return -to_double(n);
}

Number add(const Number& a, const Number& b) {
    return combine(a, b, Rational::add, [](double x, double y) { return x + y; });
}

Number sub(const Number& a, const Number& b) {
    return combine(a, b, Rational::sub, [](double x, double y) { return x - y; });
}

Number mul(const Number& a, const Number& b) {
    return combine(a, b, Rational::mul, [](double x, double y) { return x * y; });
}

Number div(const Number& a, const Number& b) {
    return combine(a, b, Rational::div, [](double x, double y) { return x / y; });
}

Number pow(const Number& a, int exponent) {
    if (const auto* r = std::get_if<Rational>(&a)) {
        if (auto p = Rational::pow(*r, exponent)) return *p;
    }
    return std::pow(to_double(a), exponent);
}

bool same_number(const Number& a, const Number& b) noexcept {
    if (a.index() != b.index()) return false;
    if (const auto* ra = std::get_if<Rational>(&a)) return *ra == std::get<Rational>(b);
    return std::get<double>(a) == std::get<double>(b);
}

std::optional<Number> parse_number_literal(std::string_view text) {
    std::size_t i = 0;
    std::string mantissa;
    int frac_digits = 0;
    bool any_digit = false;
    while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
        mantissa.push_back(text[i++]);
        any_digit = true;
    }
    if (i < text.size() && text[i] == '.') {
        ++i;
        while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
            mantissa.push_back(text[i++]);
            ++frac_digits;
            any_digit = true;
        }
    }
    if (!any_digit) return std::nullopt;
    long exponent = 0;
    if (i < text.size() && (text[i] == 'e' || text[i] == 'E')) {
        ++i;
        bool neg = false;
        if (i < text.size() && (text[i] == '+' || text[i] == '-')) neg = text[i++] == '-';
        if (i == text.size() || !std::isdigit(static_cast<unsigned char>(text[i]))) return std::nullopt;
        while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
            if (exponent < 100000) exponent = exponent * 10 + (text[i] - '0');
            ++i;
        }
        if (neg) exponent = -exponent;
    }
    if (i != text.size()) return std::nullopt;

    auto as_double = [&]() -> std::optional<Number> {
        double v = 0;
        auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
        if (ec == std::errc::result_out_of_range) {
            // Underflow rounds to zero; overflow has no finite value.
            if (exponent < 0) return Number(0.0);
            return std::nullopt;
        }
        if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(v)) return std::nullopt;
        return Number(v);
    };

    const auto first_nonzero = mantissa.find_first_not_of('0');
    if (first_nonzero == std::string::npos) return Number(Rational(0));
    const std::string digits = mantissa.substr(first_nonzero);
    if (digits.size() > 16) return as_double();
    i128 m = 0;
    for (char c : digits) m = m * 10 + (c - '0');
    if (m > kExactLimit) return as_double();

    long scale = exponent - frac_digits;
    while (scale < 0 && m % 10 == 0) {
        m /= 10;
        ++scale;
    }
    if (scale >= 0) {
        if (scale > 16) return as_double();
        const i128 num = m * pow10(static_cast<int>(scale));
        if (num > kExactLimit) return as_double();
        return Number(Rational(static_cast<std::int64_t>(num)));
    }
    if (-scale > 30) return as_double();
    auto r = make_checked(m, pow10(static_cast<int>(-scale)));
    if (!r || r->num() > kExactLimit || r->den() > kExactLimit) return as_double();
    return Number(*r);
}

std::string format_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    (void)ec;
    return std::string(buf, ptr);
}

std::optional<std::string> number_literal(const Number& n) {
    if (is_negative(n)) return std::nullopt;
    if (const auto* d = std::get_if<double>(&n)) {
        if (!std::isfinite(*d)) return std::nullopt;
        std::string text = format_double(*d);
        auto back = parse_number_literal(text);
        if (back && same_number(*back, n)) return text;
        return std::nullopt;
    }
    const auto& r = std::get<Rational>(n);
    if (r.num() > kExactLimit || r.den() > kExactLimit) return std::nullopt;
    std::int64_t q = r.den();
    int twos = 0, fives = 0;
    while (q % 2 == 0) {
        q /= 2;
        ++twos;
    }
    while (q % 5 == 0) {
        q /= 5;
        ++fives;
    }
    if (q != 1) return std::nullopt;
    const int k = std::max(twos, fives);
    if (k > 30) return std::nullopt;
    const i128 m = i128(r.num()) * (pow10(k) / r.den());
    if (m > kExactLimit) return std::nullopt;
    std::string digits;
    {
        i128 t = m;
        do {
            digits.insert(digits.begin(), static_cast<char>('0' + static_cast<int>(t % 10)));
            t /= 10;
        } while (t != 0);
    }
    if (k == 0) return digits;
    if (static_cast<int>(digits.size()) <= k) digits.insert(0, static_cast<std::size_t>(k + 1) - digits.size(), '0');
    digits.insert(digits.size() - static_cast<std::size_t>(k), ".");
    return digits;
}

}  // namespace fourcalc
