#include "fourcalc/error.hpp"
#include "fourcalc/fourier.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace fourcalc;

namespace {

FourierCoefficients random_coefficients(std::mt19937_64& rng, int N, double L) {
    std::uniform_real_distribution<double> u(-2, 2);
    FourierCoefficients c = FourierCoefficients::zeros(L, N);
    c.set_a0(u(rng));
    for (int n = 1; n <= N; ++n) {
        c.set_a(n, u(rng));
        c.set_b(n, u(rng));
    }
    return c;
}

}  // namespace

TEST(Orthogonality, ClosedFormExamples) {
    EXPECT_EQ(orthogonality_integral(OrthoKind::SinSin, 1, 2, M_PI).value(), 0.0);
    const auto cc = orthogonality_integral(OrthoKind::CosCos, 0, 0, 2);
    EXPECT_EQ(cc.value(), 4.0);
    EXPECT_EQ(cc.case_label, "m=n=0");
    EXPECT_EQ(orthogonality_integral(OrthoKind::SinCos, 7, 7, 1.5).value(), 0.0);
    const auto diag = orthogonality_integral(OrthoKind::SinSin, 3, 3, 2.5);
    EXPECT_EQ(diag.value(), 2.5);
    EXPECT_EQ(diag.case_label, "m=n≠0");
    EXPECT_EQ(diag.multiple, Rational(1));
    EXPECT_EQ(orthogonality_integral(OrthoKind::SinSin, 0, 0, 1).value(), 0.0);
    EXPECT_THROW(orthogonality_integral(OrthoKind::SinSin, 1, 1, 0), ArgumentError);
    EXPECT_THROW(orthogonality_integral(OrthoKind::CosCos, -1, 1, 1), ArgumentError);
}

TEST(Orthogonality, NumericExamples) {
    const auto a = orthogonality_numeric_check(OrthoKind::SinSin, 3, 3, M_PI, 1e-6);
    EXPECT_EQ(a.status, CheckStatus::Pass);
    EXPECT_NEAR(a.quadrature, M_PI, 1e-6);
    EXPECT_EQ(orthogonality_numeric_check(OrthoKind::SinSin, 0, 5, 1, 1e-6).status, CheckStatus::Pass);
    const auto c = orthogonality_numeric_check(OrthoKind::CosCos, 2, 5, 2.5, 1e-6);
    EXPECT_EQ(c.status, CheckStatus::Pass);
    EXPECT_NEAR(c.quadrature, oracle::kCosCos_2_5_L2p5, 1e-6);
}

TEST(Orthogonality, NegativeLUsesSignedIntegral) {
    const auto v = orthogonality_integral(OrthoKind::CosCos, 0, 0, -1.5);
    EXPECT_EQ(v.value(), -3.0);
    EXPECT_EQ(orthogonality_numeric_check(OrthoKind::CosCos, 0, 0, -1.5, 1e-6).status, CheckStatus::Pass);
    EXPECT_EQ(orthogonality_numeric_check(OrthoKind::SinSin, 2, 2, -1.5, 1e-6).status, CheckStatus::Pass);
}

TEST(FourierSum, Examples) {
    EXPECT_EQ(fourier_sum_eval(FourierCoefficients(1.0, 1.0, {}, {}), 0.37), 1.0);
    FourierCoefficients c = FourierCoefficients::zeros(M_PI, 1);
    c.set_b(1, 1);
    EXPECT_NEAR(fourier_sum_eval(c, M_PI / 2), 1.0, 1e-15);
}

TEST(FourierSum, MatchesNaiveEvaluatorAndExpression) {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> xs(-5, 5);
    for (int t = 0; t < 20; ++t) {
        const FourierCoefficients c = random_coefficients(rng, 8, t % 2 ? M_PI : 1.0);
        const TrigPoly p = synthesize(c);
        for (int k = 0; k < 10; ++k) {
            const double x = xs(rng);
            long double naive = c.a0();
            for (int n = 1; n <= 8; ++n)
                naive += c.a(n) * std::cos(n * M_PI * x / c.L()) + c.b(n) * std::sin(n * M_PI * x / c.L());
            EXPECT_NEAR(fourier_sum_eval(c, x), static_cast<double>(naive), 1e-12);
            EXPECT_NEAR(eval_expr(p.expr, x, {}), fourier_sum_eval(c, x), 1e-12);
        }
    }
}

TEST(Coefficients, Validation) {
    EXPECT_THROW(FourierCoefficients(0.0, 1, {}, {}), ArgumentError);
    EXPECT_THROW(FourierCoefficients(1.0, 1, {1}, {}), ArgumentError);
    EXPECT_THROW(FourierCoefficients::zeros(1, -1), ArgumentError);
}

TEST(CoeffsNumeric, Sawtooth) {
    const auto r = coeffs_numeric(Expr::var(), {}, M_PI, 3, 1e-6);
    EXPECT_TRUE(r.converged);
    EXPECT_LT(std::abs(r.coeffs.a0()), 1e-8);
    const double expected[] = {oracle::kSawtoothB1, oracle::kSawtoothB2, oracle::kSawtoothB3};
    for (int n = 1; n <= 3; ++n) {
        EXPECT_LT(std::abs(r.coeffs.a(n)), 1e-8);
        EXPECT_NEAR(r.coeffs.b(n), expected[n - 1], 1e-6);
    }
}

TEST(CoeffsNumeric, Constant) {
    const auto r = coeffs_numeric(Expr::integer(5), {}, 2.0, 4, 1e-6);
    EXPECT_NEAR(r.coeffs.a0(), 5.0, 1e-12);
    for (int n = 1; n <= 4; ++n) {
        EXPECT_NEAR(r.coeffs.a(n), 0.0, 1e-12);
        EXPECT_NEAR(r.coeffs.b(n), 0.0, 1e-12);
    }
}

TEST(CoeffsNumeric, RejectsDiscontinuousInput) {
    EXPECT_THROW(coeffs_numeric(parse_expr("1/(x - 0.3)"), {}, 1.0, 2, 1e-6), Error);
}

TEST(Uniqueness, Examples) {
    std::mt19937_64 rng(41);
    const FourierCoefficients c = random_coefficients(rng, 5, M_PI);
    EXPECT_TRUE(uniqueness_check(c, c, 1e-12));

    FourierCoefficients bumped = c;
    bumped.set_b(1, c.b(1) + 1);
    EXPECT_FALSE(uniqueness_check(c, bumped, 1e-6));
    double sup = 0;
    for (int i = 0; i < 4097; ++i) {
        const double x = -M_PI + 2 * M_PI * i / 4096;
        sup = std::max(sup, std::abs(fourier_sum_eval(c, x) - fourier_sum_eval(bumped, x)));
    }
    EXPECT_GT(sup, 0.5);

    const auto back = coeffs_numeric(synthesize(c).expr, {}, c.L(), c.N(), 1e-6);
    EXPECT_TRUE(uniqueness_check(c, back.coeffs, 1e-6));

    EXPECT_THROW(uniqueness_check(c, FourierCoefficients::zeros(1.0, 5), 1e-6), ArgumentError);
    EXPECT_THROW(uniqueness_check(c, FourierCoefficients::zeros(M_PI, 4), 1e-6), ArgumentError);
}

TEST(Uniqueness, AgreesWithSupOverGrid) {
    // uniqueness_check true <=> sup |synth(c1) - synth(c2)| <= (2N + 1) tol on a 4097 grid
    std::mt19937_64 rng(43);
    std::uniform_real_distribution<double> noise(-1, 1);
    const double tol = 1e-6;
    for (int t = 0; t < 200; ++t) {
        const int N = 1 + t % 6;
        const FourierCoefficients c1 = random_coefficients(rng, N, 1.0);
        FourierCoefficients c2 = c1;
        // either all perturbations within tol, or one coefficient far out
        const bool close = t % 2 == 0;
        c2.set_a0(c1.a0() + (close ? 0.5 : 0.0) * tol * noise(rng));
        for (int n = 1; n <= N; ++n) {
            c2.set_a(n, c1.a(n) + (close ? 0.5 : 0.0) * tol * noise(rng));
            c2.set_b(n, c1.b(n) + (close ? 0.5 : 0.0) * tol * noise(rng));
        }
        if (!close) c2.set_a(1 + t % N, c1.a(1 + t % N) + 0.01);
        double sup = 0;
        for (int i = 0; i < 4097; ++i) {
            const double x = -1 + 2.0 * i / 4096;
            sup = std::max(sup, std::abs(fourier_sum_eval(c1, x) - fourier_sum_eval(c2, x)));
        }
        EXPECT_EQ(uniqueness_check(c1, c2, tol), sup <= (2 * N + 1) * tol) << "t=" << t << " sup=" << sup;
    }
}

TEST(SumRule, Examples) {
    const std::vector<Expr> cosines{parse_expr("cos(x)"), parse_expr("cos(2*x)"), parse_expr("cos(3*x)")};
    const auto r = sum_rule_finite_check(cosines, Interval(0, M_PI / 2), {});
    EXPECT_EQ(r.status, CheckStatus::Pass);
    EXPECT_NEAR(r.lhs, oracle::kCosFamilyIntegral, 1e-8);
    EXPECT_NEAR(r.rhs, oracle::kCosFamilyIntegral, 1e-8);
    EXPECT_TRUE(r.ftc1_pass);

    const auto single = sum_rule_finite_check({parse_expr("x^2")}, Interval(0, 1), {});
    EXPECT_EQ(single.status, CheckStatus::Pass);
    EXPECT_EQ(single.lhs, single.rhs);

    const auto zeros = sum_rule_finite_check({Expr::integer(0), Expr::integer(0)}, Interval(-1, 1), {});
    EXPECT_EQ(zeros.lhs, 0.0);
    EXPECT_EQ(zeros.rhs, 0.0);
    EXPECT_EQ(zeros.status, CheckStatus::Pass);

    EXPECT_THROW(sum_rule_finite_check({}, Interval(0, 1), {}), ArgumentError);
}
