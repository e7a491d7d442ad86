#include "fourcalc/converge.hpp"
#include "fourcalc/error.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace fourcalc;

namespace {

FunctionSequence powers(bool partial) { return FunctionSequence::from_text("x^n", "n", 0, partial, 1'000'000); }

FunctionSequence sine_series() { return FunctionSequence::from_text("sin(n*x)/n^2", "n", 1, true, 1'000'000); }

LimitSpec zero() { return LimitSpec::symbolic(Expr::integer(0)); }

LimitSpec step_at_one() {
    return LimitSpec::callable([](double x) { return x < 1 ? 0.0 : 1.0; }, "0 for x < 1, 1 at x = 1");
}

}  // namespace

TEST(Sequence, TermsAndRange) {
    const auto seq = FunctionSequence::from_template(parse_expr("sin(n*x)/n"), "n", 1, true, 10);
    EXPECT_EQ(to_string(seq.term(3)), "(sin((3 * x)) / 3)");
    EXPECT_THROW(seq.term(0), ArgumentError);
    EXPECT_THROW(seq.term(11), ArgumentError);
    EXPECT_THROW(FunctionSequence::from_text("x^(", "n", 0, true, 5), ParseError);
}

TEST(PartialSum, Examples) {
    const auto zeros = FunctionSequence::from_text("0*x", "n", 0, true, 100);
    for (long N : {0L, 5L, 100L}) EXPECT_EQ(partial_sum_eval(zeros, N, 0.7, {}), 0.0);
    EXPECT_EQ(partial_sum_eval(powers(true), 3, 0.5, {}), 1.875);

    long double naive = 0;
    for (int n = 1; n <= 1000; ++n) naive += std::sin(static_cast<long double>(n)) / (static_cast<long double>(n) * n);
    EXPECT_NEAR(partial_sum_eval(sine_series(), 1000, 1.0, {}), static_cast<double>(naive), 1e-13);
    EXPECT_NEAR(partial_sum_eval(sine_series(), 1000, 1.0, {}), oracle::kSinOverSquareAt1N1000, 1e-13);
}

TEST(PartialSum, ErrorsCarryIndex) {
    const auto seq = FunctionSequence::from_text("1/(x - n)", "n", 0, true, 10);
    try {
        partial_sum_eval(seq, 5, 2.0, {});
        FAIL();
    } catch (const DomainError& e) {
        EXPECT_NE(e.context().find("n=2"), std::string::npos) << e.context();
    }
}

TEST(Evaluator, LadderMatchesDirectSums) {
    const auto seq = sine_series();
    const SequenceEvaluator eval(seq, {}, 64);
    const std::vector<long> Ns{4, 16, 64};
    const auto values = eval.ladder(Ns, 0.9);
    for (std::size_t k = 0; k < Ns.size(); ++k) EXPECT_EQ(values[k], partial_sum_eval(seq, Ns[k], 0.9, {}));
}

TEST(Uniform, PowersOnShrunkInterval) {
    ConvergenceOptions o;
    o.Ns = {10, 20, 50, 100};
    const auto r = uniform_report(powers(false), zero(), Interval(0, 0.9), {}, o);
    EXPECT_EQ(r.ladder[2].N, 50);
    // the grid point is the double nearest 0.9, whose 50th power is its own oracle
    EXPECT_DOUBLE_EQ(r.ladder[2].sup_dev, oracle::kDoublePointNineTo50);
    EXPECT_NEAR(r.ladder[2].sup_dev, oracle::kPointNineTo50, 2e-15 * oracle::kPointNineTo50);  // 50 times the rounding of 0.9
    EXPECT_EQ(r.uniform, Verdict::Yes);
    EXPECT_EQ(r.pointwise, Verdict::Yes);
    EXPECT_LT(r.fitted_decay, 0);
}

TEST(Uniform, PowersOnClosedUnitInterval) {
    ConvergenceOptions o;
    o.Ns = {4, 8, 16, 32, 64};
    const auto r = uniform_report(powers(false), step_at_one(), Interval(0, 1), {}, o);
    EXPECT_EQ(r.uniform, Verdict::No);
    EXPECT_EQ(r.pointwise, Verdict::Yes);
    for (const auto& p : r.ladder) EXPECT_GE(p.sup_dev, 0.9);
}

TEST(Uniform, SineSeriesAgainstReference) {
    const auto r = uniform_report(sine_series(), LimitSpec::reference(), Interval(0, M_PI), {});
    EXPECT_EQ(r.uniform, Verdict::Yes);
    EXPECT_EQ(r.pointwise, Verdict::Yes);
    EXPECT_TRUE(r.invariants_hold());
}

TEST(Uniform, Validation) {
    ConvergenceOptions o;
    o.grid = 100;
    EXPECT_THROW(uniform_report(powers(false), zero(), Interval(0, 1), {}, o), ArgumentError);
    o.grid = 257;
    o.Ns = {8, 4};
    EXPECT_THROW(uniform_report(powers(false), zero(), Interval(0, 1), {}, o), ArgumentError);
    o.Ns = {};
    EXPECT_THROW(uniform_report(powers(false), zero(), Interval(0, 1), {}, o), ArgumentError);
}

TEST(Monotone, Examples) {
    ConvergenceOptions o;
    const auto inc = monotone_check(powers(true), Interval(0, 0.9), {}, o);
    EXPECT_EQ(inc.verdict, MonotoneVerdict::Increasing);

    const auto constant = FunctionSequence::from_text("x + 0*n", "n", 0, false, 10'000);
    const auto both = monotone_check(constant, Interval(-1, 1), {}, o);
    EXPECT_EQ(both.verdict, MonotoneVerdict::NonStrict);
    EXPECT_TRUE(both.increasing && both.decreasing);

    const auto none = monotone_check(sine_series(), Interval(0, M_PI), {}, o);
    EXPECT_EQ(none.verdict, MonotoneVerdict::None);
    ASSERT_TRUE(none.increasing_violation);
    ASSERT_TRUE(none.decreasing_violation);
    // the reported violation is real
    const auto v = *none.increasing_violation;
    const auto it = std::find(o.Ns.begin(), o.Ns.end(), v.N);
    ASSERT_NE(it, o.Ns.begin());
    EXPECT_LT(partial_sum_eval(sine_series(), v.N, v.x, {}), partial_sum_eval(sine_series(), *(it - 1), v.x, {}));
}

TEST(Dini, SlowDecayExtendsLadder) {
    // sup is 1/(2 sqrt(n)): uniform, but still above 1e-3 at n = 1024
    const auto seq = FunctionSequence::from_text("x/(1 + n*x^2)", "n", 0, false, 1'000'000);
    const auto plain = uniform_report(seq, zero(), Interval(0, 2), {});
    EXPECT_EQ(plain.uniform, Verdict::No);
    const auto r = dini_report(seq, zero(), Interval(0, 2), {});
    EXPECT_EQ(r.dini->state, DiniState::Confirmed);
    EXPECT_GT(r.ladder.back().N, 1024);
    EXPECT_LE(r.ladder.back().sup_dev, 1e-3);

    ConvergenceOptions capped;
    capped.dini_max_N = 1024;
    EXPECT_EQ(dini_report(seq, zero(), Interval(0, 2), {}, capped).dini->state, DiniState::Inconsistent);
}

TEST(Dini, Scenarios) {
    const auto half = dini_report(powers(false), zero(), Interval(0, 0.5), {});
    EXPECT_TRUE(half.dini->preconditions_met);
    EXPECT_EQ(half.dini->state, DiniState::Confirmed);

    ConvergenceOptions o;
    o.Ns = {4, 8, 16, 32, 64};
    const auto unit = dini_report(powers(false), step_at_one(), Interval(0, 1), {}, o);
    EXPECT_FALSE(unit.dini->preconditions_met);
    EXPECT_EQ(unit.dini->failed_preconditions, std::vector<std::string>{"continuous limit"});
    EXPECT_EQ(unit.uniform, Verdict::No);
    EXPECT_EQ(unit.limit_continuity->verdict, Verdict::NotApplicable);

    const auto fourier = dini_report(sine_series(), LimitSpec::reference(), Interval(0, M_PI), {});
    EXPECT_FALSE(fourier.dini->preconditions_met);
    ASSERT_FALSE(fourier.dini->failed_preconditions.empty());
    EXPECT_EQ(fourier.dini->failed_preconditions.front(), "monotone");
    for (const auto* r : {&half, &unit, &fourier}) EXPECT_TRUE(r->invariants_hold());
}

TEST(LimitContinuity, Examples) {
    const auto series = uniform_report(sine_series(), LimitSpec::reference(), Interval(0, M_PI), {});
    const auto lc = limit_continuity_check(sine_series(), LimitSpec::reference(), Interval(0, M_PI), {}, series);
    EXPECT_EQ(lc.verdict, Verdict::Yes);
    EXPECT_FALSE(lc.inconsistent);

    ConvergenceOptions o;
    o.Ns = {4, 8, 16, 32, 64};
    const auto unit = uniform_report(powers(false), step_at_one(), Interval(0, 1), {}, o);
    EXPECT_EQ(limit_continuity_check(powers(false), step_at_one(), Interval(0, 1), {}, unit, o).verdict,
              Verdict::NotApplicable);

    const auto constant = FunctionSequence::from_text("3 + 0*n", "n", 0, false, 10'000);
    const auto cr = uniform_report(constant, LimitSpec::symbolic(Expr::integer(3)), Interval(0, 1), {});
    EXPECT_EQ(limit_continuity_check(constant, LimitSpec::symbolic(Expr::integer(3)), Interval(0, 1), {}, cr).verdict,
              Verdict::Yes);
}

TEST(LimitContinuity, FlagsInconsistencyForWrongLimit) {
    // a uniform verdict against a discontinuous "limit" with continuous terms cannot happen honestly;
    // force it with a limit that is discontinuous at a point the grid never visits
    const auto constant = FunctionSequence::from_text("0*x + 0*n", "n", 0, false, 10'000);
    const auto limit = LimitSpec::callable([](double x) { return x == 0.5 ? 1.0 : 0.0; }, "spike");
    ConvergenceOptions o;
    o.grid = 258;  // does not contain 0.5
    const auto r = uniform_report(constant, limit, Interval(0, 1), {}, o);
    ASSERT_EQ(r.uniform, Verdict::Yes);
    const auto lc = limit_continuity_check(constant, limit, Interval(0, 1), {}, r, o);
    // the probe grid (64, 127, 253) hits 0.5 on the finer levels
    EXPECT_EQ(lc.verdict, Verdict::No);
    EXPECT_TRUE(lc.inconsistent);
}

TEST(Overspill, Examples) {
    EXPECT_EQ(overspill_threshold([](long m) { return m <= 5; }, 100), 5);
    EXPECT_EQ(overspill_threshold([](long) { return true; }, 100), 100);
    EXPECT_EQ(overspill_threshold([](long) { return false; }, 100), std::nullopt);
    EXPECT_EQ(overspill_threshold([](long) { return true; }, 0), 0);
}

TEST(Overspill, DiniProofPredicateGrowsAsPointsMerge) {
    // P(m) := |f_m(x0) - f_m(x)| < 1/(m + 1) with f_m = x^m
    const double x0 = 0.9;
    std::optional<long> previous = 0;
    for (double gap : {1e-2, 1e-3, 1e-4, 1e-5}) {
        const double x = x0 + gap;
        const auto k = overspill_threshold(
            [&](long m) { return std::abs(std::pow(x0, m) - std::pow(x, m)) < 1.0 / (m + 1); }, 1'000'000);
        ASSERT_TRUE(k);
        // direct scan oracle
        long scan = 0;
        while (scan < 1'000'000 && std::abs(std::pow(x0, scan + 1) - std::pow(x, scan + 1)) < 1.0 / (scan + 2)) ++scan;
        EXPECT_EQ(*k, scan);
        EXPECT_GE(*k, *previous);
        previous = k;
    }
}

TEST(InfiniteSumRule, RequiresEvidence) {
    ConvergenceReport none;
    none.uniform = Verdict::No;
    EXPECT_THROW(infinite_sum_rule_check(sine_series(), Interval(0, M_PI), {}, {4, 8}, 1e-6, none), ContractError);
    EXPECT_THROW(infinite_sum_rule_check(powers(false), Interval(0, 0.5), {}, {4, 8}, 1e-6, none), ArgumentError);
}

TEST(InfiniteSumRule, ZeroSeries) {
    const auto zeros = FunctionSequence::from_text("0*x*n", "n", 0, true, 1'000'000);
    const auto evidence = uniform_report(zeros, zero(), Interval(0, 1), {});
    ASSERT_EQ(evidence.uniform, Verdict::Yes);
    const auto r = infinite_sum_rule_check(zeros, Interval(0, 1), {}, {4, 8, 16}, 1e-6, evidence);
    EXPECT_EQ(r.status, CheckStatus::Pass);
    for (const auto& g : r.rungs) {
        EXPECT_EQ(g.A, 0.0);
        EXPECT_EQ(g.B, 0.0);
    }
}

TEST(InfiniteSumRule, PaddedFiniteFamilyReducesToFiniteRule) {
    // f_n = cos(n x) for n <= 3, zero afterwards
    const auto seq = FunctionSequence(
        [](long n) { return n <= 3 ? Expr::cos(Expr::mul(Expr::integer(n), Expr::var())) : Expr::integer(0); }, 1,
        true, 1'000'000, "cos(n x) for n <= 3");
    const Interval dom(0, M_PI / 2);
    const auto evidence = uniform_report(seq, LimitSpec::reference(), dom, {});
    ASSERT_EQ(evidence.uniform, Verdict::Yes);
    const auto r = infinite_sum_rule_check(seq, dom, {}, {3, 6, 12}, 1e-8, evidence);
    EXPECT_EQ(r.status, CheckStatus::Pass);
    const auto finite =
        sum_rule_finite_check({parse_expr("cos(1*x)"), parse_expr("cos(2*x)"), parse_expr("cos(3*x)")}, dom, {});
    for (const auto& g : r.rungs) EXPECT_NEAR(g.B, finite.rhs, 1e-8);
    EXPECT_NEAR(r.rungs.back().A, oracle::kCosFamilyIntegral, 1e-8);
}
