#include "fourcalc/error.hpp"
#include "fourcalc/symdiff.hpp"
#include "random_expr.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace fourcalc;

TEST(Differentiate, SineOfScaledArgument) {
    const Expr d = differentiate(parse_expr("sin(n*x)"));
    EXPECT_EQ(d, parse_expr("cos(n*x)*(n*1 + x*0)"));
    EXPECT_EQ(simplify(d), parse_expr("n*cos(n*x)"));
}

TEST(Differentiate, Constant) {
    EXPECT_EQ(simplify(differentiate(parse_expr("7"))), Expr::integer(0));
    EXPECT_EQ(simplify(differentiate(parse_expr("a*b"))), Expr::integer(0));
}

TEST(Differentiate, CubeMatchesFiniteDifferences) {
    const Expr d = simplify(differentiate(parse_expr("x^3")));
    EXPECT_EQ(d, parse_expr("3*x^2"));
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> xs(-3, 3);
    for (int i = 0; i < 10; ++i) {
        const double x = xs(rng);
        const double h = 1e-5;
        const double fd = (std::pow(x + h, 3) - std::pow(x - h, 3)) / (2 * h);
        EXPECT_NEAR(eval_expr(d, x, {}), fd, 1e-6 * std::max(1.0, std::abs(fd)));
    }
}

TEST(Simplify, Examples) {
    EXPECT_EQ(simplify(parse_expr("cos(n*x)*(n*1 + x*0)")), parse_expr("n*cos(n*x)"));
    EXPECT_EQ(simplify(parse_expr("x + 0")), Expr::var());
    EXPECT_EQ(simplify(parse_expr("(2*3)*x")), parse_expr("6*x"));
    EXPECT_EQ(simplify(parse_expr("0 - x")), parse_expr("-x"));
    EXPECT_EQ(simplify(parse_expr("x/1")), Expr::var());
    EXPECT_EQ(simplify(parse_expr("x^1")), Expr::var());
    EXPECT_EQ(simplify(parse_expr("x^0")), Expr::integer(1));
    EXPECT_EQ(simplify(parse_expr("--x")), Expr::var());
    EXPECT_EQ(simplify(parse_expr("sin(3*pi)")), Expr::integer(0));
    EXPECT_EQ(simplify(parse_expr("cos(3*pi)")), Expr::integer(-1));
}

TEST(Simplify, IsIdempotent) {
    std::mt19937_64 rng(5);
    for (int i = 0; i < 500; ++i) {
        const Expr s = simplify(testutil::random_expr(rng, 5));
        EXPECT_EQ(simplify(s), s) << to_string(s);
    }
}

TEST(Simplify, PreservesValuesWhereDefined) {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> xs(-3, 3);
    const ParamEnv env{{"a", 0.6}, {"b", -1.3}};
    for (int i = 0; i < 1500; ++i) {
        const Expr e = testutil::random_expr(rng, 5);
        const Expr s = simplify(e);
        for (int k = 0; k < 4; ++k) {
            const double x = xs(rng);
            double ve;
            try {
                ve = eval_expr(e, x, env);
            } catch (const DomainError&) {
                continue;
            }
            if (!std::isfinite(ve) || std::abs(ve) > 1e6) continue;
            // sin(k*pi) folds to an exact 0, so s may be undefined where rounding kept e finite
            double vs;
            try {
                vs = eval_expr(s, x, env);
            } catch (const DomainError&) {
                continue;
            }
            EXPECT_NEAR(vs, ve, 1e-9 * std::max(1.0, std::abs(ve))) << to_string(e) << " -> " << to_string(s);
        }
    }
}

TEST(Differentiate, RandomTreesMatchCentralDifferences) {
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> xs(-2, 2);
    const ParamEnv env{{"a", 0.8}, {"b", 1.7}};
    int checked = 0;
    for (int i = 0; i < 400; ++i) {
        const Expr e = testutil::random_expr(rng, 4);
        const Expr d = simplify(differentiate(e));
        const double x = xs(rng);
        try {
            const double h = 1e-6;
            const double fd = (eval_expr(e, x + h, env) - eval_expr(e, x - h, env)) / (2 * h);
            const double exact = eval_expr(d, x, env);
            if (!std::isfinite(fd) || std::abs(exact) > 1e4) continue;
            EXPECT_NEAR(exact, fd, 1e-4 * std::max(1.0, std::abs(exact))) << to_string(e);
            ++checked;
        } catch (const DomainError&) {
        }
    }
    EXPECT_GT(checked, 300);
}

TEST(CheckDerivative, Examples) {
    const Interval pm(-M_PI, M_PI);
    const auto ok = check_derivative(parse_expr("n*cos(n*x)"), parse_expr("sin(n*x)"), pm, {{"n", 3}}, 1e-6);
    EXPECT_TRUE(ok.pass);
    EXPECT_GE(ok.sample_count, 64);

    const auto constant = check_derivative(parse_expr("0"), parse_expr("5"), pm, {}, 1e-6);
    EXPECT_TRUE(constant.pass);
    EXPECT_EQ(constant.max_rel_deviation, 0.0);

    const auto wrong = check_derivative(parse_expr("cos(x)"), parse_expr("sin(2*x)"), Interval(0, 1), {}, 1e-6);
    EXPECT_FALSE(wrong.pass);
    EXPECT_GT(wrong.max_rel_deviation, 0.1);
}

TEST(CheckDerivative, PropagatesEvaluationErrors) {
    EXPECT_THROW(check_derivative(parse_expr("-1/x^2"), parse_expr("1/x"), Interval(0, 0), {}, 1e-6), DomainError);
    try {
        check_derivative(parse_expr("-1/x^2"), parse_expr("1/x"), Interval(0, 0), {}, 1e-6);
    } catch (const DomainError& e) {
        EXPECT_NE(std::string(e.what()).find("x=0"), std::string::npos) << e.what();
    }
}
