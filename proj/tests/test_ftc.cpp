#include "fourcalc/error.hpp"
#include "fourcalc/ftc.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <thread>

using namespace fourcalc;

namespace {

ParamConstraints integer_nonzero(const std::string& name, double lo, double hi) {
    ParamConstraints c;
    c.params.push_back(ParamSpec{name, true, lo, hi, true});
    return c;
}

const AntiderivativeRegistry& registry() {
    static const AntiderivativeRegistry r = builtin_registry();
    return r;
}

}  // namespace

TEST(ContinuityProbe, Examples) {
    EXPECT_TRUE(continuity_probe(parse_expr("sin(n*x)"), Interval(-M_PI, M_PI), {{"n", 5}}).continuous);
    EXPECT_TRUE(continuity_probe(parse_expr("x^2"), Interval(-1, 1), {}).continuous);
    EXPECT_TRUE(continuity_probe(Expr::integer(4), Interval(0, 1), {}).continuous);
    try {
        EXPECT_FALSE(continuity_probe(parse_expr("1/(x - 0.5)"), Interval(0, 1), {}).continuous);
    } catch (const DomainError&) {
        SUCCEED();
    }
    const auto step = continuity_probe_fn([](double x) { return x < 0.3 ? 0.0 : 1.0; }, Interval(0, 1), 64, 1e-12);
    EXPECT_FALSE(step.continuous);
    EXPECT_EQ(step.worst_jump, 1.0);
    EXPECT_THROW(continuity_probe(Expr::var(), Interval(0, 1), {}, 8), ArgumentError);
}

TEST(Constraints, SampleAndViolation) {
    ParamConstraints c;
    c.params.push_back(ParamSpec{"m", true, 0, 6, false});
    c.params.push_back(ParamSpec{"n", true, 0, 6, false});
    c.nonzero.push_back(parse_expr("m - n"));
    std::mt19937_64 rng(1);
    for (int i = 0; i < 100; ++i) {
        const ParamEnv env = c.sample(rng);
        EXPECT_TRUE(c.satisfied_by(env)) << env.describe();
        EXPECT_NE(env.at("m"), env.at("n"));
        EXPECT_EQ(std::trunc(env.at("m")), env.at("m"));
    }
    EXPECT_FALSE(c.satisfied_by({{"m", 2}, {"n", 2}}));
    EXPECT_FALSE(c.satisfied_by({{"m", 2.5}, {"n", 2}}));
    EXPECT_FALSE(c.satisfied_by({{"m", 2}}));

    ParamConstraints impossible;
    impossible.params.push_back(ParamSpec{"n", true, 0, 3, false});
    impossible.nonzero.push_back(parse_expr("n - n"));
    EXPECT_THROW(impossible.sample(rng), ConfigError);
}

TEST(Register, Examples) {
    const auto sine = register_antiderivative("s", parse_expr("n*cos(n*x)"), parse_expr("sin(n*x)"),
                                              Interval(-M_PI, M_PI), integer_nonzero("n", -10, 10));
    EXPECT_TRUE(sine.verified);
    EXPECT_GE(sine.verification.envs_checked, 16);

    ParamConstraints c;
    c.params.push_back(ParamSpec{"c", false, -5, 5, false});
    EXPECT_TRUE(register_antiderivative("z", parse_expr("0"), parse_expr("c"), Interval(0, 1), c).verified);

    const auto bad = register_antiderivative("bad", parse_expr("cos(x)"), parse_expr("cos(x)"), Interval(0, 3), {});
    EXPECT_FALSE(bad.verified);
    EXPECT_GT(bad.verification.max_rel_deviation, 1e-3);
}

TEST(Register, DefaultsConstraintsForParametersOfG) {
    const auto e = register_antiderivative("k", parse_expr("k"), parse_expr("k*x"), Interval(0, 1), {});
    EXPECT_TRUE(e.verified);
    ASSERT_NE(e.constraints.find("k"), nullptr);
}

TEST(Register, RejectsParametersOnlyInF) {
    EXPECT_THROW(register_antiderivative("q", parse_expr("q*x"), parse_expr("x^2/2"), Interval(0, 1), {}),
                 ArgumentError);
}

TEST(Registry, BuiltinsAllVerified) {
    const auto entries = registry().entries();
    EXPECT_GE(entries.size(), 20u);
    for (const auto& e : entries) EXPECT_TRUE(e.verified) << e.name << " " << e.verification.max_rel_deviation;
}

TEST(Registry, DuplicateNamesRejected) {
    AntiderivativeRegistry r;
    r.add(register_antiderivative("a", parse_expr("1"), parse_expr("x"), Interval(0, 1), {}));
    EXPECT_THROW(r.add(register_antiderivative("a", parse_expr("1"), parse_expr("x"), Interval(0, 1), {})),
                 ArgumentError);
    EXPECT_FALSE(r.find("missing"));
}

TEST(Registry, ConcurrentReadersDuringWrites) {
    AntiderivativeRegistry r;
    const auto proto = register_antiderivative("p", parse_expr("1"), parse_expr("x"), Interval(0, 1), {});
    std::thread writer([&] {
        for (int i = 0; i < 200; ++i) {
            auto e = proto;
            e.name = "e" + std::to_string(i);
            r.add(e);
        }
    });
    std::size_t seen = 0;
    for (int i = 0; i < 2000; ++i) {
        const std::size_t now = r.entries().size();
        EXPECT_GE(now, seen);
        seen = now;
    }
    writer.join();
    EXPECT_EQ(r.size(), 200u);
}

TEST(Ftc2, SineOnHalfPeriod) {
    const auto entry = registry().find("sin");
    ASSERT_TRUE(entry);
    const auto report = ftc2_evaluate(*entry, 0, M_PI, {});
    ASSERT_TRUE(report.value);
    EXPECT_NEAR(*report.value, 2.0, 1e-15);
    EXPECT_LT(std::abs(report.cross_check_delta), 1e-8);
    EXPECT_EQ(report.confidence, Confidence::High);
    for (const auto& s : report.steps) EXPECT_NE(s.status, StepStatus::Failed) << s.name;
}

TEST(Ftc2, EmptyIntervalIsZero) {
    for (const auto& e : registry().entries()) {
        std::mt19937_64 rng(4);
        const ParamEnv env = e.constraints.sample(rng);
        const double a = e.domain.lo() + 0.3 * e.domain.width();
        const auto report = ftc2_evaluate(e, a, a, env);
        ASSERT_TRUE(report.value) << e.name;
        EXPECT_EQ(*report.value, 0.0) << e.name;
    }
}

TEST(Ftc2, DistinctModesIntegrateToZero) {
    const auto entry = registry().find("sin-sin");
    ASSERT_TRUE(entry);
    for (auto [m, n] : {std::pair{1, 2}, {3, 5}, {0, 4}}) {
        const double L = 2.0;
        const ParamEnv env{{"m", double(m)}, {"n", double(n)}, {"L", L}};
        const auto report = ftc2_evaluate(*entry, -L, L, env);
        ASSERT_TRUE(report.value);
        EXPECT_NEAR(*report.value, 0.0, 1e-12);
        EXPECT_TRUE(report.cross_check_ok());
    }
}

TEST(Ftc2, ContractErrors) {
    const auto bad = register_antiderivative("bad", parse_expr("cos(x)"), parse_expr("cos(x)"), Interval(0, 3), {});
    EXPECT_THROW(ftc2_evaluate(bad, 0, 1, {}), ContractError);
    const auto sine = registry().find("sine-derivative");
    ASSERT_TRUE(sine);
    EXPECT_THROW(ftc2_evaluate(*sine, 0, 1, {{"n", 0}}), ConstraintError);
    EXPECT_THROW(ftc2_evaluate(*sine, 0, 1, {{"n", 1.5}}), ConstraintError);
    EXPECT_THROW(ftc2_evaluate(*sine, 0, 100, {{"n", 2}}), ArgumentError);
}

TEST(Ftc2, ReversedBoundsFollowSignedConvention) {
    const auto entry = registry().find("square");
    ASSERT_TRUE(entry);
    const auto fwd = ftc2_evaluate(*entry, 0, 2, {});
    const auto back = ftc2_evaluate(*entry, 2, 0, {});
    ASSERT_TRUE(fwd.value && back.value);
    EXPECT_DOUBLE_EQ(*fwd.value, -*back.value);
    EXPECT_TRUE(back.cross_check_ok());
}
