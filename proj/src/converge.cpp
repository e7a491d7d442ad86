#include "fourcalc/converge.hpp"

#include "fourcalc/error.hpp"
#include "fourcalc/summation.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>

namespace fourcalc {

FunctionSequence::FunctionSequence(Generator generator, long first_index, bool partial_sums, long n_max,
                                   std::string label)
    : generator_(std::move(generator)),
      first_(first_index),
      partial_(partial_sums),
      n_max_(n_max),
      label_(std::move(label)) {
    if (!generator_) throw ArgumentError("sequence needs a term generator");
    if (first_ < 0) throw ArgumentError("first index must be >= 0");
    if (n_max_ < first_) throw ArgumentError("n_max must be >= first index");
}

FunctionSequence FunctionSequence::from_template(const Expr& tmpl, const std::string& index, long first_index,
                                                 bool partial_sums, long n_max) {
    auto gen = [tmpl, index](long n) { return substitute(tmpl, index, Expr::integer(n)); };
    return FunctionSequence(gen, first_index, partial_sums, n_max, to_string(tmpl));
}

FunctionSequence FunctionSequence::from_text(const std::string& text, const std::string& index, long first_index,
                                             bool partial_sums, long n_max) {
    // fail early on a malformed template
    parse_expr(text, {{index, Rational(first_index)}});
    auto gen = [text, index](long n) { return parse_expr(text, {{index, Rational(n)}}); };
    return FunctionSequence(gen, first_index, partial_sums, n_max, text);
}

Expr FunctionSequence::term(long n) const {
    if (n < first_ || n > n_max_)
        throw ArgumentError("index " + std::to_string(n) + " outside [" + std::to_string(first_) + ", " +
                            std::to_string(n_max_) + "]");
    return generator_(n);
}

// ---------------------------------------------------------------------------

SequenceEvaluator::SequenceEvaluator(const FunctionSequence& seq, const ParamEnv& env, long up_to)
    : seq_(&seq), base_(seq.first_index()) {
    if (up_to < seq.first_index()) return;
    terms_.reserve(static_cast<std::size_t>(up_to - base_ + 1));
    for (long n = base_; n <= up_to; ++n) terms_.emplace_back(BoundExpr(seq.term(n), env));
}

SequenceEvaluator::SequenceEvaluator(const FunctionSequence& seq, const ParamEnv& env,
                                     const std::vector<long>& indices)
    : seq_(&seq), base_(seq.first_index()) {
    long top = base_ - 1;
    for (long n : indices) top = std::max(top, n);
    terms_.resize(static_cast<std::size_t>(std::max(0L, top - base_ + 1)));
    for (long n : indices) {
        auto& slot = terms_.at(static_cast<std::size_t>(n - base_));
        if (!slot) slot.emplace(seq.term(n), env);
    }
}

const BoundExpr& SequenceEvaluator::compiled(long n) const {
    const long i = n - base_;
    if (i < 0 || i >= static_cast<long>(terms_.size()) || !terms_[static_cast<std::size_t>(i)])
        throw ArgumentError("term " + std::to_string(n) + " was not compiled");
    return *terms_[static_cast<std::size_t>(i)];
}

double SequenceEvaluator::term(long n, double x) const {
    const BoundExpr& f = compiled(n);
    try {
        return f(x);
    } catch (const EvalError&) {
        rethrow_with_context("n=" + std::to_string(n) + ", x=" + format_double(x));
    }
}

double SequenceEvaluator::value(long N, double x) const {
    if (!seq_->partial_sums()) return term(N, x);
    CompensatedSum s;
    for (long n = base_; n <= N; ++n) s.add(term(n, x));
    return s.value();
}

std::vector<double> SequenceEvaluator::ladder(const std::vector<long>& Ns, double x) const {
    std::vector<double> out;
    out.reserve(Ns.size());
    if (!seq_->partial_sums()) {
        for (long N : Ns) out.push_back(term(N, x));
        return out;
    }
    CompensatedSum s;
    long n = base_;
    for (long N : Ns) {
        for (; n <= N; ++n) s.add(term(n, x));
        out.push_back(s.value());
    }
    return out;
}

double partial_sum_eval(const FunctionSequence& seq, long N, double x, const ParamEnv& env) {
    if (N > seq.n_max()) throw ArgumentError("N exceeds the sequence's n_max");
    CompensatedSum s;
    for (long n = seq.first_index(); n <= N; ++n) {
        try {
            s.add(eval_expr(seq.term(n), x, env));
        } catch (const EvalError&) {
            rethrow_with_context("n=" + std::to_string(n) + ", x=" + format_double(x));
        }
    }
    return s.value();
}

// ---------------------------------------------------------------------------

LimitSpec LimitSpec::symbolic(Expr e) {
    LimitSpec s;
    s.kind_ = Kind::Symbolic;
    s.label_ = to_string(e);
    s.expr_ = std::move(e);
    return s;
}

LimitSpec LimitSpec::callable(std::function<double(double)> f, std::string label) {
    if (!f) throw ArgumentError("limit callable is empty");
    LimitSpec s;
    s.kind_ = Kind::Callable;
    s.fn_ = std::move(f);
    s.label_ = std::move(label);
    return s;
}

LimitSpec LimitSpec::reference(long factor) {
    if (factor < 2) throw ArgumentError("reference factor must be >= 2");
    LimitSpec s;
    s.kind_ = Kind::Reference;
    s.factor_ = factor;
    s.label_ = "reference at " + std::to_string(factor) + "x max N";
    return s;
}

std::string LimitSpec::describe() const { return label_; }

const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::Yes:
            return "yes";
        case Verdict::No:
            return "no";
        case Verdict::NotApplicable:
            return "not applicable";
    }
    return "?";
}

const char* to_string(MonotoneVerdict v) {
    switch (v) {
        case MonotoneVerdict::Increasing:
            return "increasing";
        case MonotoneVerdict::Decreasing:
            return "decreasing";
        case MonotoneVerdict::NonStrict:
            return "non-strict monotone";
        case MonotoneVerdict::None:
            return "none";
    }
    return "?";
}

const char* to_string(DiniState s) {
    switch (s) {
        case DiniState::Confirmed:
            return "uniform confirmed";
        case DiniState::NotApplicable:
            return "not applicable";
        case DiniState::Inconsistent:
            return "inconsistent";
    }
    return "?";
}

bool ConvergenceReport::invariants_hold() const {
    if (uniform == Verdict::Yes && pointwise != Verdict::Yes) return false;
    if (dini && dini->state == DiniState::Inconsistent) return false;
    if (limit_continuity && limit_continuity->inconsistent) return false;
    return true;
}

namespace {

void check_ladder(const FunctionSequence& seq, const std::vector<long>& Ns) {
    if (Ns.empty()) throw ArgumentError("N ladder is empty");
    for (std::size_t k = 1; k < Ns.size(); ++k)
        if (!(Ns[k - 1] < Ns[k])) throw ArgumentError("N ladder must be strictly ascending");
    if (Ns.front() < seq.first_index()) throw ArgumentError("N ladder starts below the first index");
    if (Ns.back() > seq.n_max()) throw ArgumentError("N ladder exceeds n_max");
}

void check_options(const FunctionSequence& seq, const ConvergenceOptions& options) {
    if (options.grid < 257) throw ArgumentError("convergence grid needs >= 257 points");
    if (!(options.threshold > 0)) throw ArgumentError("threshold must be positive");
    check_ladder(seq, options.Ns);
}

long reference_index(const FunctionSequence& seq, const LimitSpec& limit, const std::vector<long>& Ns) {
    const long ref = limit.factor() * Ns.back();
    if (ref > seq.n_max()) throw ArgumentError("reference index " + std::to_string(ref) + " exceeds n_max");
    return ref;
}

// Evaluates f at every point of the grid in parallel; lowest failing index wins.
template <class F>
void for_grid(int grid, const F& f) {
    std::exception_ptr error;
    int error_index = std::numeric_limits<int>::max();
#pragma omp parallel for schedule(static)
    for (int i = 0; i < grid; ++i) {
        try {
            f(i);
        } catch (...) {
#pragma omp critical(fourcalc_for_grid_error)
            if (i < error_index) {
                error_index = i;
                error = std::current_exception();
            }
        }
    }
    if (error) std::rethrow_exception(error);
}

// The ladder values and the limit at every grid point.
struct GridValues {
    std::vector<std::vector<double>> S;  // [point][rung]
    std::vector<double> limit;
};

GridValues sample_ladder(const FunctionSequence& seq, const LimitSpec& limit, const Interval& dom,
                         const ParamEnv& env, const ConvergenceOptions& options) {
    const auto& Ns = options.Ns;
    std::vector<long> indices = Ns;
    const bool reference = limit.kind() == LimitSpec::Kind::Reference;
    if (reference) indices.push_back(reference_index(seq, limit, Ns));
    const SequenceEvaluator eval = seq.partial_sums() ? SequenceEvaluator(seq, env, indices.back())
                                                      : SequenceEvaluator(seq, env, indices);
    std::optional<BoundExpr> symbolic;
    if (limit.kind() == LimitSpec::Kind::Symbolic) symbolic.emplace(limit.expr(), env);

    GridValues out;
    const auto grid = static_cast<std::size_t>(options.grid);
    out.S.resize(grid);
    out.limit.resize(grid);
    for_grid(options.grid, [&](int i) {
        const double x = grid_point(dom, options.grid, i);
        auto values = eval.ladder(indices, x);
        double lim = 0.0;
        if (reference) {
            lim = values.back();
            values.pop_back();
        } else if (symbolic) {
            lim = (*symbolic)(x);
        } else {
            lim = limit.function()(x);
        }
        out.S[static_cast<std::size_t>(i)] = std::move(values);
        out.limit[static_cast<std::size_t>(i)] = lim;
    });
    return out;
}

double fitted_slope(const std::vector<LadderPoint>& ladder) {
    std::vector<std::pair<double, double>> pts;
    for (const auto& p : ladder)
        if (p.sup_dev > 0 && p.N > 0) pts.emplace_back(std::log(static_cast<double>(p.N)), std::log(p.sup_dev));
    if (pts.size() < 2) return 0.0;
    double mx = 0, my = 0;
    for (auto [x, y] : pts) mx += x, my += y;
    mx /= static_cast<double>(pts.size());
    my /= static_cast<double>(pts.size());
    double sxy = 0, sxx = 0;
    for (auto [x, y] : pts) sxy += (x - mx) * (y - my), sxx += (x - mx) * (x - mx);
    return sxx > 0 ? sxy / sxx : 0.0;
}

bool decays(const std::vector<double>& d, double threshold, double jitter) {
    if (d.back() <= threshold) return true;
    for (std::size_t k = 1; k < d.size(); ++k)
        if (d[k] > (1 + jitter) * d[k - 1]) return false;
    return d.back() < d.front();
}

MonotoneReport monotone_from(const std::vector<std::vector<double>>& S, const Interval& dom, int grid,
                             const std::vector<long>& Ns) {
    MonotoneReport r;
    // rung-major so the first violation is the earliest N, then smallest x
    for (std::size_t k = 1; k < Ns.size(); ++k) {
        for (int i = 0; i < grid; ++i) {
            const auto& s = S[static_cast<std::size_t>(i)];
            const double slack = 1e-12 * std::max(1.0, std::abs(s[k - 1]));
            const double step = s[k] - s[k - 1];
            if (step < -slack && !r.increasing_violation)
                r.increasing_violation = MonotoneViolation{grid_point(dom, grid, i), Ns[k]};
            if (step > slack && !r.decreasing_violation)
                r.decreasing_violation = MonotoneViolation{grid_point(dom, grid, i), Ns[k]};
        }
    }
    r.increasing = !r.increasing_violation;
    r.decreasing = !r.decreasing_violation;
    if (r.increasing && r.decreasing)
        r.verdict = MonotoneVerdict::NonStrict;
    else if (r.increasing)
        r.verdict = MonotoneVerdict::Increasing;
    else if (r.decreasing)
        r.verdict = MonotoneVerdict::Decreasing;
    else
        r.verdict = MonotoneVerdict::None;
    return r;
}

void fill_uniform(ConvergenceReport& report, const GridValues& values, const Interval& dom,
                  const ConvergenceOptions& options) {
    const auto& Ns = options.Ns;
    const std::size_t K = Ns.size();
    report.ladder.assign(K, LadderPoint{});
    for (std::size_t k = 0; k < K; ++k) report.ladder[k].N = Ns[k];
    std::vector<double> d(K);
    for (int i = 0; i < options.grid; ++i) {
        const auto& s = values.S[static_cast<std::size_t>(i)];
        const double lim = values.limit[static_cast<std::size_t>(i)];
        for (std::size_t k = 0; k < K; ++k) {
            d[k] = std::abs(s[k] - lim);
            if (std::isnan(d[k])) d[k] = std::numeric_limits<double>::infinity();
            if (d[k] > report.ladder[k].sup_dev) {
                report.ladder[k].sup_dev = d[k];
                report.ladder[k].argmax_x = grid_point(dom, options.grid, i);
            }
        }
        if (!decays(d, options.threshold, options.jitter)) {
            if (report.pointwise_failures == 0) report.first_pointwise_failure = grid_point(dom, options.grid, i);
            ++report.pointwise_failures;
        }
    }
    report.pointwise = report.pointwise_failures == 0 ? Verdict::Yes : Verdict::No;

    bool uniform = report.ladder.back().sup_dev <= options.threshold;
    for (std::size_t k = 1; k < K; ++k)
        if (report.ladder[k].sup_dev > (1 + options.jitter) * report.ladder[k - 1].sup_dev) uniform = false;
    report.uniform = uniform ? Verdict::Yes : Verdict::No;
    report.fitted_decay = fitted_slope(report.ladder);
    report.threshold = options.threshold;
}

ConvergenceReport blank_report(const FunctionSequence& seq, const LimitSpec& limit, const Interval& dom,
                               const ConvergenceOptions& options) {
    ConvergenceReport report;
    report.sequence = seq.label();
    report.limit = limit.describe();
    report.dom = dom;
    report.grid = options.grid;
    return report;
}

ContinuityProbe probe_limit(const FunctionSequence& seq, const LimitSpec& limit, const Interval& dom,
                            const ParamEnv& env, const ConvergenceOptions& options) {
    switch (limit.kind()) {
        case LimitSpec::Kind::Symbolic:
            return continuity_probe(limit.expr(), dom, env, options.probe_grid);
        case LimitSpec::Kind::Callable:
            return continuity_probe_fn(limit.function(), dom, options.probe_grid, 1e-12);
        case LimitSpec::Kind::Reference:
            break;
    }
    const long ref = reference_index(seq, limit, options.Ns);
    const SequenceEvaluator eval = seq.partial_sums() ? SequenceEvaluator(seq, env, ref)
                                                      : SequenceEvaluator(seq, env, std::vector<long>{ref});
    return continuity_probe_fn([&](double x) { return eval.value(ref, x); }, dom, options.probe_grid, 1e-12);
}

}  // namespace

ConvergenceReport uniform_report(const FunctionSequence& seq, const LimitSpec& limit, const Interval& dom,
                                 const ParamEnv& env, const ConvergenceOptions& options) {
    check_options(seq, options);
    ConvergenceReport report = blank_report(seq, limit, dom, options);
    fill_uniform(report, sample_ladder(seq, limit, dom, env, options), dom, options);
    return report;
}

MonotoneReport monotone_check(const FunctionSequence& seq, const Interval& dom, const ParamEnv& env,
                              const ConvergenceOptions& options) {
    check_options(seq, options);
    const SequenceEvaluator eval = seq.partial_sums() ? SequenceEvaluator(seq, env, options.Ns.back())
                                                      : SequenceEvaluator(seq, env, options.Ns);
    std::vector<std::vector<double>> S(static_cast<std::size_t>(options.grid));
    for_grid(options.grid, [&](int i) {
        S[static_cast<std::size_t>(i)] = eval.ladder(options.Ns, grid_point(dom, options.grid, i));
    });
    return monotone_from(S, dom, options.grid, options.Ns);
}

LimitContinuityReport limit_continuity_check(const FunctionSequence& seq, const LimitSpec& limit,
                                             const Interval& dom, const ParamEnv& env,
                                             const ConvergenceReport& report, const ConvergenceOptions& options) {
    LimitContinuityReport r;
    if (report.uniform != Verdict::Yes) return r;
    const long top = options.Ns.back();
    const SequenceEvaluator eval = seq.partial_sums() ? SequenceEvaluator(seq, env, top)
                                                      : SequenceEvaluator(seq, env, std::vector<long>{top});
    r.terms_continuous =
        continuity_probe_fn([&](double x) { return eval.value(top, x); }, dom, options.probe_grid, 1e-12).continuous;
    r.probe = probe_limit(seq, limit, dom, env, options);
    r.verdict = r.probe->continuous ? Verdict::Yes : Verdict::No;
    r.inconsistent = r.terms_continuous && !r.probe->continuous;
    return r;
}

namespace {

bool still_decaying(const ConvergenceReport& r, double jitter) {
    const auto& l = r.ladder;
    for (std::size_t k = 1; k < l.size(); ++k)
        if (l[k].sup_dev > (1 + jitter) * l[k - 1].sup_dev) return false;
    return l.size() >= 2 && l.back().sup_dev < l.front().sup_dev;
}

// Room for one more doubling of the ladder under n_max and the work caps.
bool can_extend(const FunctionSequence& seq, const LimitSpec& limit, const ConvergenceOptions& o) {
    const long next = 2 * o.Ns.back();
    if (next > o.dini_max_N) return false;
    const long top = limit.kind() == LimitSpec::Kind::Reference ? limit.factor() * next : next;
    if (top > seq.n_max()) return false;
    return !seq.partial_sums() || static_cast<double>(top) * o.grid <= o.dini_max_work;
}

}  // namespace

ConvergenceReport dini_report(const FunctionSequence& seq, const LimitSpec& limit, const Interval& dom,
                              const ParamEnv& env, const ConvergenceOptions& options) {
    check_options(seq, options);
    ConvergenceOptions o = options;
    for (;;) {
        ConvergenceReport report = blank_report(seq, limit, dom, o);
        const GridValues values = sample_ladder(seq, limit, dom, env, o);
        fill_uniform(report, values, dom, o);
        report.monotone = monotone_from(values.S, dom, o.grid, o.Ns);

        DiniReport dini;
        // An Interval is closed and bounded by construction.
        if (report.monotone->verdict == MonotoneVerdict::None) dini.failed_preconditions.push_back("monotone");
        if (report.pointwise != Verdict::Yes) dini.failed_preconditions.push_back("pointwise convergence");
        if (!probe_limit(seq, limit, dom, env, o).continuous) dini.failed_preconditions.push_back("continuous limit");
        dini.preconditions_met = dini.failed_preconditions.empty();

        // Dini promises uniform convergence but not a rate; a slow decay that
        // has not reached the threshold yet gets a longer ladder first.
        if (dini.preconditions_met && report.uniform != Verdict::Yes && still_decaying(report, o.jitter) &&
            can_extend(seq, limit, o)) {
            o.Ns.push_back(2 * o.Ns.back());
            continue;
        }
        if (!dini.preconditions_met)
            dini.state = DiniState::NotApplicable;
        else
            dini.state = report.uniform == Verdict::Yes ? DiniState::Confirmed : DiniState::Inconsistent;
        report.dini = std::move(dini);
        report.limit_continuity = limit_continuity_check(seq, limit, dom, env, report, o);
        return report;
    }
}

std::optional<long> overspill_threshold(const std::function<bool(long)>& P, long n_max) {
    if (n_max < 0) throw ArgumentError("n_max must be >= 0");
    long k = -1;
    while (k < n_max && P(k + 1)) ++k;
    if (k < 0) return std::nullopt;
    return k;
}

InfiniteSumRuleReport infinite_sum_rule_check(const FunctionSequence& seq, const Interval& dom, const ParamEnv& env,
                                              const std::vector<long>& Ns, double tol,
                                              const ConvergenceReport& evidence) {
    if (!seq.partial_sums()) throw ArgumentError("sum rule needs a partial-sum sequence");
    if (!(tol > 0)) throw ArgumentError("tolerance must be positive");
    check_ladder(seq, Ns);
    const bool uniform = evidence.uniform == Verdict::Yes;
    const bool dini = evidence.dini && evidence.dini->preconditions_met;
    if (!uniform && !dini)
        throw ContractError("infinite sum rule needs uniform convergence or met Dini preconditions");

    const long first = seq.first_index();
    const long top = Ns.back();
    const SequenceEvaluator eval(seq, env, top);

    // Per-term integrals once, accumulated cumulatively.
    const auto count = static_cast<std::size_t>(top - first + 1);
    std::vector<double> term_integral(count, 0.0);
    std::vector<char> term_converged(count, 1);
    RefineOptions per_term;
    per_term.tol = tol / (10.0 * static_cast<double>(count + 1));
    per_term.bound_grid = 0;
    for (long n = first; n <= top; ++n) {
        RefineOptions o = per_term;
        o.n0 = std::max<std::int64_t>(16, 2 * (n + 1));
        const IntegralEstimate est =
            integrate_refine_fn([&](double x) { return eval.term(n, x); }, dom, o);
        term_integral[static_cast<std::size_t>(n - first)] = est.value;
        term_converged[static_cast<std::size_t>(n - first)] = est.converged ? 1 : 0;
    }

    InfiniteSumRuleReport report;
    bool converged = true;
    CompensatedSum B;
    bool B_converged = true;
    long next = first;
    for (long N : Ns) {
        for (; next <= N; ++next) {
            B.add(term_integral[static_cast<std::size_t>(next - first)]);
            B_converged = B_converged && term_converged[static_cast<std::size_t>(next - first)];
        }
        RefineOptions o;
        o.tol = tol / 10;
        o.n0 = std::max<std::int64_t>(16, 2 * (N + 1));
        o.bound_grid = 0;
        const IntegralEstimate A = integrate_refine_fn([&](double x) { return eval.value(N, x); }, dom, o);
        SumRuleRung rung;
        rung.N = N;
        rung.A = A.value;
        rung.B = B.value();
        rung.delta = rung.A - rung.B;
        rung.converged = A.converged && B_converged;
        converged = converged && rung.converged;
        report.rungs.push_back(rung);
    }

    for (std::size_t k = 0; k + 1 < report.rungs.size(); ++k)
        report.cross_index.push_back(std::abs(report.rungs[k + 1].A - report.rungs[k].B));
    // both sides carry up to tol/10 of quadrature error; gaps inside that are noise
    const double floor = tol / 5;
    report.stable = true;
    // first gap is burn-in
    for (std::size_t k = 2; k < report.cross_index.size(); ++k)
        if (report.cross_index[k] > 1.1 * report.cross_index[k - 1] + floor) report.stable = false;
    if (!report.cross_index.empty() && report.cross_index.back() > report.cross_index.front() + floor)
        report.stable = false;

    bool within = true;
    for (const auto& r : report.rungs)
        if (!(std::abs(r.delta) <= tol)) within = false;
    if (!converged)
        report.status = CheckStatus::Inconclusive;
    else
        report.status = within && report.stable ? CheckStatus::Pass : CheckStatus::Fail;
    return report;
}

}  // namespace fourcalc
