#include "fourcalc/fourier.hpp"

#include "fourcalc/compiled.hpp"
#include "fourcalc/error.hpp"
#include "fourcalc/ftc.hpp"
#include "fourcalc/summation.hpp"

#include <cmath>
#include <exception>
#include <numbers>

namespace fourcalc {

std::optional<OrthoKind> parse_ortho_kind(std::string_view text) {
    if (text == "sin-sin" || text == "sin·sin" || text == "sinsin") return OrthoKind::SinSin;
    if (text == "cos-cos" || text == "cos·cos" || text == "coscos") return OrthoKind::CosCos;
    if (text == "sin-cos" || text == "sin·cos" || text == "sincos") return OrthoKind::SinCos;
    return std::nullopt;
}

const char* to_string(OrthoKind kind) {
    switch (kind) {
        case OrthoKind::SinSin:
            return "sin-sin";
        case OrthoKind::CosCos:
            return "cos-cos";
        case OrthoKind::SinCos:
            return "sin-cos";
    }
    return "?";
}

const char* to_string(CheckStatus s) {
    switch (s) {
        case CheckStatus::Pass:
            return "pass";
        case CheckStatus::Fail:
            return "fail";
        case CheckStatus::Inconclusive:
            return "inconclusive";
    }
    return "?";
}

namespace {

void check_ortho_args(int m, int n, double L) {
    if (!std::isfinite(L) || L == 0.0) throw ArgumentError("L must be finite and nonzero");
    if (m < 0 || n < 0) throw ArgumentError("m and n must be >= 0");
}

std::string case_label(int m, int n) {
    if (m != n) return "m≠n";
    return m == 0 ? "m=n=0" : "m=n≠0";
}

// sin(k*pi*x/L) or cos(k*pi*x/L)
Expr mode(bool sine, int k, double L) {
    Expr arg = Expr::div(Expr::mul(Expr::mul(Expr::integer(k), Expr::pi()), Expr::var()), Expr::real(L));
    return sine ? Expr::sin(std::move(arg)) : Expr::cos(std::move(arg));
}

}  // namespace

OrthogonalityValue orthogonality_integral(OrthoKind kind, int m, int n, double L) {
    check_ortho_args(m, n, L);
    OrthogonalityValue v;
    v.L = L;
    switch (kind) {
        case OrthoKind::SinSin:
            v.case_label = case_label(m, n);
            v.multiple = Rational(m == n && m != 0 ? 1 : 0);
            break;
        case OrthoKind::CosCos:
            v.case_label = case_label(m, n);
            v.multiple = Rational(m != n ? 0 : (m == 0 ? 2 : 1));
            break;
        case OrthoKind::SinCos:
            v.case_label = "any m, n";
            v.multiple = Rational(0);
            break;
    }
    return v;
}

Expr orthogonality_integrand(OrthoKind kind, int m, int n, double L) {
    check_ortho_args(m, n, L);
    switch (kind) {
        case OrthoKind::SinSin:
            return Expr::mul(mode(true, m, L), mode(true, n, L));
        case OrthoKind::CosCos:
            return Expr::mul(mode(false, m, L), mode(false, n, L));
        case OrthoKind::SinCos:
            break;
    }
    return Expr::mul(mode(true, m, L), mode(false, n, L));
}

OrthogonalityCheck orthogonality_numeric_check(OrthoKind kind, int m, int n, double L, double tol) {
    if (!(tol > 0)) throw ArgumentError("tolerance must be positive");
    const OrthogonalityValue closed = orthogonality_integral(kind, m, n, L);
    RefineOptions options;
    options.tol = tol / 4;
    // enough cells that the highest mode cannot alias onto the first level
    options.n0 = std::max<std::int64_t>(16, 4 * (m + n + 1));
    options.bound_grid = 0;
    const IntegralEstimate est = integrate_signed(orthogonality_integrand(kind, m, n, L), -L, L, ParamEnv{}, options);
    OrthogonalityCheck check;
    check.closed_form = closed.value();
    check.quadrature = est.value;
    check.delta = est.value - check.closed_form;
    if (!est.converged)
        check.status = CheckStatus::Inconclusive;
    else
        check.status = std::abs(check.delta) <= tol ? CheckStatus::Pass : CheckStatus::Fail;
    return check;
}

FourierCoefficients::FourierCoefficients(double L, double a0, std::vector<double> a, std::vector<double> b)
    : L_(L), a0_(a0), a_(std::move(a)), b_(std::move(b)) {
    if (!std::isfinite(L_) || L_ == 0.0) throw ArgumentError("L must be finite and nonzero");
    if (a_.size() != b_.size()) throw ArgumentError("a and b must have the same length");
}

FourierCoefficients FourierCoefficients::zeros(double L, int N) {
    if (N < 0) throw ArgumentError("N must be >= 0");
    return FourierCoefficients(L, 0.0, std::vector<double>(static_cast<std::size_t>(N), 0.0),
                               std::vector<double>(static_cast<std::size_t>(N), 0.0));
}

double fourier_sum_eval(const FourierCoefficients& c, double x) {
    CompensatedSum sum;
    sum.add(c.a0());
    for (int n = 1; n <= c.N(); ++n) {
        const double arg = n * std::numbers::pi * x / c.L();
        sum.add(c.a(n) * std::cos(arg));
        sum.add(c.b(n) * std::sin(arg));
    }
    return sum.value();
}

TrigPoly synthesize(const FourierCoefficients& c) {
    Expr e = Expr::real(c.a0());
    for (int n = 1; n <= c.N(); ++n) {
        e = Expr::add(std::move(e), Expr::mul(Expr::real(c.a(n)), mode(false, n, c.L())));
        e = Expr::add(std::move(e), Expr::mul(Expr::real(c.b(n)), mode(true, n, c.L())));
    }
    return TrigPoly{c, std::move(e)};
}

NumericCoefficients coeffs_numeric(const Expr& f, const ParamEnv& env, double L, int N, double tol) {
    if (!std::isfinite(L) || L == 0.0) throw ArgumentError("L must be finite and nonzero");
    if (N < 0) throw ArgumentError("N must be >= 0");
    if (!(tol > 0)) throw ArgumentError("tolerance must be positive");
    const Interval period(std::min(-L, L), std::max(-L, L));
    const ContinuityProbe probe = continuity_probe(f, period, env);
    if (!probe.continuous) throw ContractError("f failed the continuity probe on [-L, L]");

    const double coeff_tol = tol / (2.0 * N + 1.0);
    const double scale = std::abs(L);
    // component 0 is a0, then a_1, b_1, a_2, b_2, ...
    const int components = 2 * N + 1;
    std::vector<double> values(static_cast<std::size_t>(components), 0.0);
    std::vector<char> converged(static_cast<std::size_t>(components), 1);
    std::exception_ptr error;
    int error_index = components;

#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i < components; ++i) {
        try {
            const int n = (i + 1) / 2;
            Expr integrand = f;
            if (i > 0) integrand = Expr::mul(f, mode(i % 2 == 0, n, L));
            RefineOptions options;
            options.tol = coeff_tol * (i == 0 ? 2.0 * scale : scale);
            options.n0 = std::max<std::int64_t>(16, 4 * (N + 1));
            options.bound_grid = 0;
            const IntegralEstimate est = integrate_signed(integrand, -L, L, env, options);
            values[static_cast<std::size_t>(i)] = i == 0 ? est.value / (2.0 * L) : est.value / L;
            converged[static_cast<std::size_t>(i)] = est.converged ? 1 : 0;
        } catch (...) {
#pragma omp critical(fourcalc_coeffs_error)
            if (i < error_index) {
                error_index = i;
                error = std::current_exception();
            }
        }
    }
    if (error) std::rethrow_exception(error);

    NumericCoefficients result{FourierCoefficients::zeros(L, N)};
    result.coeffs.set_a0(values[0]);
    for (int n = 1; n <= N; ++n) {
        result.coeffs.set_a(n, values[static_cast<std::size_t>(2 * n - 1)]);
        result.coeffs.set_b(n, values[static_cast<std::size_t>(2 * n)]);
    }
    for (char ok : converged)
        if (!ok) ++result.failed_components;
    result.converged = result.failed_components == 0;
    return result;
}

bool uniqueness_check(const FourierCoefficients& c1, const FourierCoefficients& c2, double tol) {
    if (c1.L() != c2.L()) throw ArgumentError("coefficient sets have different L");
    if (c1.N() != c2.N()) throw ArgumentError("coefficient sets have different N");
    if (!(std::abs(c1.a0() - c2.a0()) <= tol)) return false;
    for (int n = 1; n <= c1.N(); ++n) {
        if (!(std::abs(c1.a(n) - c2.a(n)) <= tol)) return false;
        if (!(std::abs(c1.b(n) - c2.b(n)) <= tol)) return false;
    }
    return true;
}

SumRuleReport sum_rule_finite_check(const std::vector<Expr>& family, const Interval& dom, const ParamEnv& env,
                                    const SumRuleOptions& options) {
    if (family.empty()) throw ArgumentError("sum rule needs at least one term");
    if (!(options.tol > 0)) throw ArgumentError("tolerance must be positive");
    for (std::size_t i = 0; i < family.size(); ++i) {
        if (!continuity_probe(family[i], dom, env).continuous)
            throw ContractError("term " + std::to_string(i) + " failed the continuity probe");
    }

    SumRuleReport report;
    report.terms = static_cast<int>(family.size());
    RefineOptions q;
    q.tol = options.tol / 4;
    q.bound_grid = 0;

    Expr total = family.front();
    for (std::size_t i = 1; i < family.size(); ++i) total = Expr::add(std::move(total), family[i]);
    const IntegralEstimate lhs = integrate_refine(total, dom, env, q);
    bool converged = lhs.converged;
    CompensatedSum rhs;
    for (const Expr& fn : family) {
        const IntegralEstimate est = integrate_refine(fn, dom, env, q);
        converged = converged && est.converged;
        rhs.add(est.value);
    }
    report.lhs = lhs.value;
    report.rhs = rhs.value();
    report.delta = report.lhs - report.rhs;
    if (!converged)
        report.status = CheckStatus::Inconclusive;
    else
        report.status = std::abs(report.delta) <= options.tol * report.terms ? CheckStatus::Pass : CheckStatus::Fail;

    // FTC-1 leg: G(x) = Σ ∫_a^x f_n, then G' against Σ f_n by central differences.
    if (!dom.degenerate() && options.ftc1_samples > 0) {
        std::vector<BoundExpr> terms;
        terms.reserve(family.size());
        for (const Expr& fn : family) terms.emplace_back(fn, env);
        RefineOptions g;
        g.tol = options.ftc1_quadrature_tol;
        g.bound_grid = 0;
        const double h = std::min(options.ftc1_step, dom.width() / 100);
        auto G = [&](double x) {
            CompensatedSum s;
            for (const BoundExpr& fn : terms) s.add(integrate_signed_fn(fn, dom.lo(), x, g).value);
            return s.value();
        };
        double worst = 0.0;
        for (int j = 1; j <= options.ftc1_samples; ++j) {
            const double x = dom.lo() + dom.width() * j / (options.ftc1_samples + 1);
            const double derivative = (G(x + h) - G(x - h)) / (2 * h);
            CompensatedSum fx;
            for (const BoundExpr& fn : terms) fx.add(fn(x));
            const double dev = std::abs(derivative - fx.value()) / std::max(1.0, std::abs(fx.value()));
            worst = std::max(worst, dev);
        }
        report.ftc1_samples = options.ftc1_samples;
        report.ftc1_max_deviation = worst;
        report.ftc1_pass = worst <= options.ftc1_tol;
    } else {
        report.ftc1_pass = true;
    }
    return report;
}

}  // namespace fourcalc
