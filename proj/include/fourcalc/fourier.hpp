#pragma once

#include "fourcalc/expr.hpp"
#include "fourcalc/number.hpp"
#include "fourcalc/riemann.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace fourcalc {

enum class OrthoKind { SinSin, CosCos, SinCos };

/// Accepts "sin-sin", "cos-cos", "sin-cos" (and the "·" spellings).
std::optional<OrthoKind> parse_ortho_kind(std::string_view text);
const char* to_string(OrthoKind kind);

/// ∫_{-L}^{L} of a product of sin(mπx/L) / cos(nπx/L), as an exact
/// multiple (0, 1 or 2) of L plus the case that produced it.
struct OrthogonalityValue {
    Rational multiple;
    double L = 0.0;
    std::string case_label;
    double value() const { return multiple.to_double() * L; }
};

/// Closed form by case split; the m = n case never goes through the
/// antiderivative with its 1/(m - n) factor. Throws ArgumentError for L = 0
/// or negative m, n.
OrthogonalityValue orthogonality_integral(OrthoKind kind, int m, int n, double L);

/// sin(m*pi*x/L)*sin(n*pi*x/L) (or the cos variants) with m, n, L as literals.
Expr orthogonality_integrand(OrthoKind kind, int m, int n, double L);

enum class CheckStatus { Pass, Fail, Inconclusive };
const char* to_string(CheckStatus s);

struct OrthogonalityCheck {
    CheckStatus status = CheckStatus::Inconclusive;
    double closed_form = 0.0;
    double quadrature = 0.0;
    double delta = 0.0;
};

/// Closed form against the refined Riemann integral over [-L, L].
OrthogonalityCheck orthogonality_numeric_check(OrthoKind kind, int m, int n, double L, double tol);

/// a0 + Σ_{n=1}^{N} (a_n cos(nπx/L) + b_n sin(nπx/L)); L != 0, |a| = |b| = N.
class FourierCoefficients {
public:
    FourierCoefficients(double L, double a0, std::vector<double> a, std::vector<double> b);
    /// All-zero coefficients of order N.
    static FourierCoefficients zeros(double L, int N);

    double L() const noexcept { return L_; }
    double a0() const noexcept { return a0_; }
    int N() const noexcept { return static_cast<int>(a_.size()); }
    /// 1-based, as in the series.
    double a(int n) const { return a_.at(static_cast<std::size_t>(n - 1)); }
    double b(int n) const { return b_.at(static_cast<std::size_t>(n - 1)); }
    const std::vector<double>& a_values() const noexcept { return a_; }
    const std::vector<double>& b_values() const noexcept { return b_; }

    void set_a0(double v) { a0_ = v; }
    void set_a(int n, double v) { a_.at(static_cast<std::size_t>(n - 1)) = v; }
    void set_b(int n, double v) { b_.at(static_cast<std::size_t>(n - 1)) = v; }

    friend bool operator==(const FourierCoefficients&, const FourierCoefficients&) = default;

private:
    double L_;
    double a0_;
    std::vector<double> a_;
    std::vector<double> b_;
};

/// Evaluates the finite Fourier sum in ascending n with compensated accumulation.
double fourier_sum_eval(const FourierCoefficients& c, double x);

/// Coefficients together with the equivalent expression tree.
struct TrigPoly {
    FourierCoefficients coeffs;
    Expr expr;
};

TrigPoly synthesize(const FourierCoefficients& c);

struct NumericCoefficients {
    FourierCoefficients coeffs;
    bool converged = true;
    int failed_components = 0;
};

/// a0 = (1/2L)∫f, a_n = (1/L)∫f cos(nπx/L), b_n = (1/L)∫f sin(nπx/L) over
/// [-L, L], each by refined Riemann sums with per-coefficient tolerance
/// tol / (2N + 1). Coefficient integrals run in parallel. Throws
/// ContractError when f fails the continuity probe on [-L, L].
NumericCoefficients coeffs_numeric(const Expr& f, const ParamEnv& env, double L, int N, double tol);

/// Componentwise |difference| <= tol. Throws ArgumentError on L or N mismatch.
bool uniqueness_check(const FourierCoefficients& c1, const FourierCoefficients& c2, double tol);

struct SumRuleReport {
    int terms = 0;
    double lhs = 0.0;  // ∫ Σ f_n
    double rhs = 0.0;  // Σ ∫ f_n
    double delta = 0.0;
    CheckStatus status = CheckStatus::Inconclusive;
    /// max |G'(x) - Σ f_n(x)| with G = Σ_n ∫_a^x f_n, by central differences.
    double ftc1_max_deviation = 0.0;
    int ftc1_samples = 0;
    bool ftc1_pass = false;
};

struct SumRuleOptions {
    double tol = 1e-9;
    int ftc1_samples = 4;
    double ftc1_step = 1e-3;
    double ftc1_quadrature_tol = 1e-8;
    double ftc1_tol = 1e-4;
};

/// ∫Σ = Σ∫ for a finite family (pass iff |lhs - rhs| <= tol (N + 1)), plus the
/// FTC-1 leg of the argument checked numerically.
SumRuleReport sum_rule_finite_check(const std::vector<Expr>& family, const Interval& dom, const ParamEnv& env,
                                    const SumRuleOptions& options = {});

}  // namespace fourcalc
