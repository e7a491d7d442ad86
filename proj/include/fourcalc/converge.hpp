#pragma once

#include "fourcalc/compiled.hpp"
#include "fourcalc/expr.hpp"
#include "fourcalc/fourier.hpp"
#include "fourcalc/ftc.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace fourcalc {

/// A sequence of functions f_n, n = first_index .. n_max. In partial-sum mode
/// the sequence under test is S_N = Σ_{n=first}^{N} f_n, otherwise it is f_N.
class FunctionSequence {
public:
    /// Must be pure: it is called from several threads.
    using Generator = std::function<Expr(long)>;

    FunctionSequence(Generator generator, long first_index, bool partial_sums, long n_max, std::string label = {});

    /// f_n = template with the parameter `index` replaced by n.
    static FunctionSequence from_template(const Expr& tmpl, const std::string& index, long first_index,
                                          bool partial_sums, long n_max);
    /// The template is re-parsed per n with `index` read as a constant, so
    /// the index may appear in exponents ("x^n").
    static FunctionSequence from_text(const std::string& text, const std::string& index, long first_index,
                                      bool partial_sums, long n_max);

    /// Throws ArgumentError when n is outside [first_index, n_max].
    Expr term(long n) const;

    long first_index() const noexcept { return first_; }
    long n_max() const noexcept { return n_max_; }
    bool partial_sums() const noexcept { return partial_; }
    const std::string& label() const noexcept { return label_; }

private:
    Generator generator_;
    long first_;
    bool partial_;
    long n_max_;
    std::string label_;
};

/// Compiled terms of a sequence under one environment, for repeated evaluation.
class SequenceEvaluator {
public:
    /// Compiles terms first_index .. up_to (partial-sum mode) or just the
    /// requested indices.
    SequenceEvaluator(const FunctionSequence& seq, const ParamEnv& env, long up_to);
    SequenceEvaluator(const FunctionSequence& seq, const ParamEnv& env, const std::vector<long>& indices);

    double term(long n, double x) const;
    /// S_N(x) in partial-sum mode, f_N(x) otherwise.
    double value(long N, double x) const;
    /// Partial-sum mode: S_N(x) for every N in `Ns` (ascending) in one pass.
    std::vector<double> ladder(const std::vector<long>& Ns, double x) const;

    const FunctionSequence& sequence() const noexcept { return *seq_; }

private:
    const BoundExpr& compiled(long n) const;

    const FunctionSequence* seq_;
    long base_ = 0;
    std::vector<std::optional<BoundExpr>> terms_;
};

/// Σ_{n=first}^{N} f_n(x), ascending n, compensated. Errors carry (n, x).
double partial_sum_eval(const FunctionSequence& seq, long N, double x, const ParamEnv& env);

/// The limit a sequence is compared against.
class LimitSpec {
public:
    enum class Kind { Symbolic, Callable, Reference };

    static LimitSpec symbolic(Expr e);
    static LimitSpec callable(std::function<double(double)> f, std::string label);
    /// The sequence itself at index factor · max(Ns).
    static LimitSpec reference(long factor = 10);

    Kind kind() const noexcept { return kind_; }
    const Expr& expr() const { return *expr_; }
    const std::function<double(double)>& function() const { return fn_; }
    long factor() const noexcept { return factor_; }
    std::string describe() const;

private:
    LimitSpec() = default;
    Kind kind_ = Kind::Reference;
    std::optional<Expr> expr_;
    std::function<double(double)> fn_;
    std::string label_;
    long factor_ = 10;
};

struct ConvergenceOptions {
    int grid = 1025;
    std::vector<long> Ns = {4, 8, 16, 32, 64, 128, 256, 512, 1024};
    /// sup deviation required at the last rung for a uniform "yes"
    double threshold = 1e-3;
    /// allowed growth between rungs (10%)
    double jitter = 0.1;
    int probe_grid = 64;
    /// dini_report keeps doubling the ladder while the preconditions hold and
    /// the sup is still falling, up to this N ...
    long dini_max_N = 1L << 20;
    /// ... and, for partial sums, this many term evaluations per rung
    double dini_max_work = 1.5e8;
};

enum class Verdict { Yes, No, NotApplicable };
const char* to_string(Verdict v);

enum class MonotoneVerdict { Increasing, Decreasing, NonStrict, None };
const char* to_string(MonotoneVerdict v);

struct LadderPoint {
    long N = 0;
    double sup_dev = 0.0;
    double argmax_x = 0.0;
};

struct MonotoneViolation {
    double x = 0.0;
    long N = 0;  // the rung where S_{N_k} -> S_{N_{k+1}} broke the direction
};

struct MonotoneReport {
    MonotoneVerdict verdict = MonotoneVerdict::None;
    bool increasing = false;
    bool decreasing = false;
    std::optional<MonotoneViolation> increasing_violation;
    std::optional<MonotoneViolation> decreasing_violation;
};

enum class DiniState { Confirmed, NotApplicable, Inconsistent };
const char* to_string(DiniState s);

struct DiniReport {
    std::vector<std::string> failed_preconditions;
    bool preconditions_met = false;
    DiniState state = DiniState::NotApplicable;
};

struct LimitContinuityReport {
    Verdict verdict = Verdict::NotApplicable;  // Yes: continuous
    bool terms_continuous = false;
    bool inconsistent = false;
    std::optional<ContinuityProbe> probe;
};

struct ConvergenceReport {
    std::string sequence;
    std::string limit;
    Interval dom{0.0, 0.0};
    int grid = 0;
    std::vector<LadderPoint> ladder;
    Verdict pointwise = Verdict::No;
    int pointwise_failures = 0;
    std::optional<double> first_pointwise_failure;
    Verdict uniform = Verdict::No;
    /// log-log slope of sup deviation against N
    double fitted_decay = 0.0;
    double threshold = 0.0;
    std::optional<MonotoneReport> monotone;
    std::optional<DiniReport> dini;
    std::optional<LimitContinuityReport> limit_continuity;

    /// uniform-yes ⇒ pointwise-yes, and neither inconsistency state.
    bool invariants_hold() const;
};

/// Sup over a grid of |S_N - limit| at each N of the ladder, with pointwise and
/// uniform verdicts. A point converges when its last deviation is below the
/// threshold, or its deviations are non-increasing (within jitter) and
/// finish below where they started.
ConvergenceReport uniform_report(const FunctionSequence& seq, const LimitSpec& limit, const Interval& dom,
                                 const ParamEnv& env, const ConvergenceOptions& options = {});

MonotoneReport monotone_check(const FunctionSequence& seq, const Interval& dom, const ParamEnv& env,
                              const ConvergenceOptions& options = {});

/// Continuity of the limit, only when `report` says uniform. Terms that probe
/// continuous with a discontinuous limit are flagged as inconsistent.
LimitContinuityReport limit_continuity_check(const FunctionSequence& seq, const LimitSpec& limit,
                                             const Interval& dom, const ParamEnv& env,
                                             const ConvergenceReport& report, const ConvergenceOptions& options = {});

/// Dini preconditions (closed bounded interval, monotone, pointwise,
/// continuous limit) plus the uniform report. Preconditions met with a
/// non-uniform ladder is the Inconsistent state.
ConvergenceReport dini_report(const FunctionSequence& seq, const LimitSpec& limit, const Interval& dom,
                              const ParamEnv& env, const ConvergenceOptions& options = {});

/// Largest k <= n_max with P(m) for all m <= k, or nullopt when P(0) fails.
std::optional<long> overspill_threshold(const std::function<bool(long)>& P, long n_max);

struct SumRuleRung {
    long N = 0;
    double A = 0.0;  // ∫ S_N
    double B = 0.0;  // Σ_{n<=N} ∫ f_n
    double delta = 0.0;
    bool converged = false;
};

struct InfiniteSumRuleReport {
    std::vector<SumRuleRung> rungs;
    /// |A_{N_{k+1}} - B_{N_k}|
    std::vector<double> cross_index;
    bool stable = false;
    CheckStatus status = CheckStatus::Inconclusive;
};

/// Integral of the limit of a series as the sum of term integrals, checked on
/// a ladder of truncations. `evidence` must show uniform convergence or met
/// Dini preconditions, otherwise ContractError. Quadrature for A_N starts at
/// 2N cells so no term can alias.
InfiniteSumRuleReport infinite_sum_rule_check(const FunctionSequence& seq, const Interval& dom, const ParamEnv& env,
                                              const std::vector<long>& Ns, double tol,
                                              const ConvergenceReport& evidence);

}  // namespace fourcalc
