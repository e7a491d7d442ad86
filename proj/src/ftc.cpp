#include "fourcalc/ftc.hpp"

#include "fourcalc/compiled.hpp"
#include "fourcalc/error.hpp"

#include <cmath>
#include <mutex>

namespace fourcalc {

ContinuityProbe continuity_probe(const Expr& f, const Interval& dom, const ParamEnv& env, int grid,
                                 double flat_tol) {
    return continuity_probe_fn(BoundExpr(f, env), dom, grid, flat_tol);
}

// ---------------------------------------------------------------------------

std::string ParamSpec::describe() const {
    std::string out = name + ": " + (integer ? "integer" : "real") + " in [" + format_double(lo) + ", " +
                      format_double(hi) + "]";
    if (nonzero) out += ", nonzero";
    return out;
}

std::set<std::string> ParamConstraints::names() const {
    std::set<std::string> out;
    for (const auto& p : params) out.insert(p.name);
    return out;
}

const ParamSpec* ParamConstraints::find(const std::string& name) const {
    for (const auto& p : params)
        if (p.name == name) return &p;
    return nullptr;
}

std::string ParamConstraints::violation(const ParamEnv& env) const {
    for (const auto& p : params) {
        const auto v = env.find(p.name);
        if (!v) return "parameter '" + p.name + "' is unbound";
        if (p.integer && std::trunc(*v) != *v) return p.name + " must be an integer";
        if (*v < p.lo || *v > p.hi) return p.name + " must lie in [" + format_double(p.lo) + ", " + format_double(p.hi) + "]";
        if (p.nonzero && *v == 0.0) return p.name + " must be nonzero";
    }
    for (const auto& e : nonzero) {
        double v = 0.0;
        try {
            v = eval_expr(e, 0.0, env);
        } catch (const EvalError& err) {
            return "cannot evaluate " + to_string(e) + ": " + err.what();
        }
        if (v == 0.0) return to_string(e) + " must be nonzero";
    }
    return {};
}

ParamEnv ParamConstraints::sample(std::mt19937_64& rng, int max_attempts) const {
    for (int attempt = 0; attempt < max_attempts; ++attempt) {
        ParamEnv env;
        for (const auto& p : params) {
            double v;
            if (p.integer) {
                const auto lo = static_cast<std::int64_t>(std::ceil(p.lo));
                const auto hi = static_cast<std::int64_t>(std::floor(p.hi));
                if (lo > hi) throw ConfigError("no integer in range for " + p.describe());
                v = static_cast<double>(std::uniform_int_distribution<std::int64_t>(lo, hi)(rng));
            } else {
                v = std::uniform_real_distribution<double>(p.lo, p.hi)(rng);
            }
            env.bind(p.name, v, p.integer);
        }
        if (satisfied_by(env)) return env;
    }
    throw ConfigError("could not sample parameters satisfying the constraints after " +
                      std::to_string(max_attempts) + " attempts");
}

// ---------------------------------------------------------------------------

AntiderivativeEntry register_antiderivative(std::string name, Expr f, Expr g, Interval domain,
                                            ParamConstraints constraints, const RegisterOptions& options) {
    const auto constrained = constraints.names();
    const auto g_params = free_params(g);
    for (const auto& p : free_params(f)) {
        if (!g_params.count(p) && !constrained.count(p))
            throw ArgumentError("parameter '" + p + "' of f is neither in g nor constrained");
    }
    for (const auto& p : g_params)
        if (!constrained.count(p)) constraints.params.push_back(ParamSpec{p});
    for (const auto& p : free_params(f))
        if (!constraints.find(p)) constraints.params.push_back(ParamSpec{p});

    AntiderivativeEntry entry{std::move(name), std::move(f), std::move(g), domain, std::move(constraints), false, {}};
    entry.verification.tol = options.tol;

    std::mt19937_64 rng(options.seed);
    const int envs = entry.constraints.params.empty() ? 1 : std::max(1, options.envs);
    bool all_pass = true;
    for (int i = 0; i < envs; ++i) {
        const ParamEnv env = entry.constraints.sample(rng);
        DerivativeCheckReport report;
        try {
            report = check_derivative(entry.f, entry.g, entry.domain, env, options.tol);
        } catch (const EvalError&) {
            all_pass = false;
            entry.verification.envs_checked = i + 1;
            entry.verification.worst_env = env;
            entry.verification.max_rel_deviation = std::numeric_limits<double>::infinity();
            break;
        }
        entry.verification.envs_checked = i + 1;
        if (!(report.max_rel_deviation <= entry.verification.max_rel_deviation) || i == 0) {
            entry.verification.max_rel_deviation = report.max_rel_deviation;
            entry.verification.worst_env = report.worst_env;
            entry.verification.worst_x = report.worst_x;
        }
        all_pass = all_pass && report.pass;
    }
    entry.verified = all_pass;
    return entry;
}

AntiderivativeRegistry::AntiderivativeRegistry(const AntiderivativeRegistry& other) {
    std::shared_lock lock(other.mutex_);
    entries_ = other.entries_;
}

AntiderivativeRegistry& AntiderivativeRegistry::operator=(const AntiderivativeRegistry& other) {
    if (this == &other) return *this;
    auto copy = other.entries();
    std::unique_lock lock(mutex_);
    entries_ = std::move(copy);
    return *this;
}

void AntiderivativeRegistry::add(AntiderivativeEntry entry) {
    std::unique_lock lock(mutex_);
    for (const auto& e : entries_)
        if (e.name == entry.name) throw ArgumentError("antiderivative '" + entry.name + "' already registered");
    entries_.push_back(std::move(entry));
}

std::optional<AntiderivativeEntry> AntiderivativeRegistry::find(const std::string& name) const {
    std::shared_lock lock(mutex_);
    for (const auto& e : entries_)
        if (e.name == name) return e;
    return std::nullopt;
}

std::vector<AntiderivativeEntry> AntiderivativeRegistry::entries() const {
    std::shared_lock lock(mutex_);
    return entries_;
}

std::size_t AntiderivativeRegistry::size() const {
    std::shared_lock lock(mutex_);
    return entries_.size();
}

namespace {

ParamSpec integer_spec(std::string name, double lo, double hi, bool nonzero = false) {
    return ParamSpec{std::move(name), true, lo, hi, nonzero};
}

ParamSpec real_spec(std::string name, double lo, double hi, bool nonzero = false) {
    return ParamSpec{std::move(name), false, lo, hi, nonzero};
}

/// m, n in 0..6 with m != n; L in [1, 3].
ParamConstraints distinct_modes() {
    return {{integer_spec("m", 0, 6), integer_spec("n", 0, 6), real_spec("L", 1, 3, true)},
            {parse_expr("m - n")}};
}

ParamConstraints single_mode() { return {{integer_spec("n", 1, 6, true), real_spec("L", 1, 3, true)}, {}}; }

}  // namespace

std::vector<AntiderivativeSpec> builtin_antiderivative_specs() {
    const ParamConstraints none;
    return {
        {"sin", "sin(x)", "-cos(x)", -10, 10, none},
        {"cos", "cos(x)", "sin(x)", -10, 10, none},
        {"sine-derivative", "n*cos(n*x)", "sin(n*x)", -4, 4, {{integer_spec("n", -10, 10, true)}, {}}},
        {"cosine-derivative", "-n*sin(n*x)", "cos(n*x)", -4, 4, {{integer_spec("n", -10, 10, true)}, {}}},
        {"scaled-sin", "sin(k*x)", "-cos(k*x)/k", -4, 4, {{real_spec("k", 0.5, 5)}, {}}},
        {"scaled-cos", "cos(k*x)", "sin(k*x)/k", -4, 4, {{real_spec("k", 0.5, 5)}, {}}},
        {"identity", "x", "x^2/2", -5, 5, none},
        {"square", "x^2", "x^3/3", -5, 5, none},
        {"quintic", "x^5", "x^6/6", -2, 2, none},
        {"cubic-poly", "3*x^2 - 2*x + 1", "x^3 - x^2 + x", -5, 5, none},
        {"zero", "0", "c", -5, 5, {{real_spec("c", -10, 10)}, {}}},
        {"constant", "a", "a*x", -5, 5, {{real_spec("a", -3, 3)}, {}}},
        {"sin-squared", "sin(x)^2", "x/2 - sin(2*x)/4", -6, 6, none},
        {"cos-squared", "cos(x)^2", "x/2 + sin(2*x)/4", -6, 6, none},
        {"sin-cos", "sin(x)*cos(x)", "sin(x)^2/2", -6, 6, none},
        {"x-sin", "x*sin(x)", "sin(x) - x*cos(x)", -6, 6, none},
        {"x-cos", "x*cos(x)", "cos(x) + x*sin(x)", -6, 6, none},
        {"inverse-square", "-1/x^2", "1/x", 1, 4, none},
        {"sin-sin", "sin(m*pi*x/L)*sin(n*pi*x/L)",
         "(1/2)*(sin((m - n)*pi*x/L)/((m - n)*pi/L) - sin((m + n)*pi*x/L)/((m + n)*pi/L))", -3, 3,
         distinct_modes()},
        {"cos-cos", "cos(m*pi*x/L)*cos(n*pi*x/L)",
         "(1/2)*(sin((m - n)*pi*x/L)/((m - n)*pi/L) + sin((m + n)*pi*x/L)/((m + n)*pi/L))", -3, 3,
         distinct_modes()},
        {"sin-cos-modes", "sin(m*pi*x/L)*cos(n*pi*x/L)",
         "-(1/2)*(cos((m + n)*pi*x/L)/((m + n)*pi/L) + cos((m - n)*pi*x/L)/((m - n)*pi/L))", -3, 3,
         distinct_modes()},
        {"sin-sin-diagonal", "sin(n*pi*x/L)^2", "x/2 - sin(2*n*pi*x/L)/(4*n*pi/L)", -3, 3, single_mode()},
        {"cos-cos-diagonal", "cos(n*pi*x/L)^2", "x/2 + sin(2*n*pi*x/L)/(4*n*pi/L)", -3, 3, single_mode()},
        {"sin-cos-diagonal", "sin(n*pi*x/L)*cos(n*pi*x/L)", "sin(n*pi*x/L)^2/(2*n*pi/L)", -3, 3, single_mode()},
    };
}

AntiderivativeRegistry builtin_registry(const RegisterOptions& options) {
    AntiderivativeRegistry registry;
    for (const auto& spec : builtin_antiderivative_specs()) {
        registry.add(register_antiderivative(spec.name, parse_expr(spec.f), parse_expr(spec.g),
                                             Interval(spec.lo, spec.hi), spec.constraints, options));
    }
    return registry;
}

// ---------------------------------------------------------------------------

const char* to_string(StepStatus s) {
    switch (s) {
        case StepStatus::Passed:
            return "passed";
        case StepStatus::Probed:
            return "probed";
        case StepStatus::Failed:
            return "failed";
        case StepStatus::Skipped:
            return "skipped";
    }
    return "skipped";
}

bool FtcReport::cross_check_ok() const {
    if (!value || !quadrature) return false;
    return std::abs(cross_check_delta) <= std::max(1e-8, 1e-6 * std::abs(*value));
}

FtcReport ftc2_evaluate(const AntiderivativeEntry& entry, double a, double b, const ParamEnv& env,
                        const FtcOptions& options) {
    if (!entry.verified) throw ContractError("antiderivative '" + entry.name + "' is not verified");
    if (!entry.domain.contains(a) || !entry.domain.contains(b))
        throw ArgumentError("integration bounds leave the domain of '" + entry.name + "'");
    if (auto why = entry.constraints.violation(env); !why.empty()) throw ConstraintError(why);

    FtcReport report;
    auto& [real_step, cont_step, anti_step, riemann_step, eval_step] = report.steps;
    real_step.name = "real-valued";
    cont_step.name = "continuity";
    anti_step.name = "antiderivative";
    riemann_step.name = "riemann-integral";
    eval_step.name = "evaluation";

    const Interval span(std::min(a, b), std::max(a, b));
    const BoundExpr f(entry.f, env);

    // 1. f returns finite reals on the interval (no singularities on the grid).
    try {
        const int grid = span.degenerate() ? 2 : options.realness_grid;
        const auto values = kernels::sample_grid(f, span.lo(), span.hi(), grid);
        bool finite = true;
        for (double v : values) finite = finite && std::isfinite(v);
        real_step.status = finite ? StepStatus::Passed : StepStatus::Failed;
        if (!finite) real_step.detail = "non-finite value on probe grid";
    } catch (const EvalError& e) {
        real_step.status = StepStatus::Failed;
        real_step.detail = e.what();
    }

    // 2. continuity, probed numerically.
    if (real_step.status != StepStatus::Passed) {
        cont_step.detail = "skipped after failed step";
    } else {
        try {
            const auto probe = continuity_probe_fn(f, span, options.probe_grid, 1e-12);
            cont_step.status = probe.continuous ? StepStatus::Probed : StepStatus::Failed;
            cont_step.detail = "max adjacent jump " + format_double(probe.worst_jump);
        } catch (const EvalError& e) {
            cont_step.status = StepStatus::Failed;
            cont_step.detail = e.what();
        }
    }

    // 3. antiderivative: stored verification plus a check under this env.
    if (cont_step.status != StepStatus::Probed) {
        anti_step.detail = "skipped after failed step";
    } else {
        try {
            const auto check = check_derivative(entry.f, entry.g, entry.domain, env, options.derivative_tol);
            anti_step.status = check.pass ? StepStatus::Passed : StepStatus::Failed;
            anti_step.detail = "verified over " + std::to_string(entry.verification.envs_checked) +
                               " environments; max deviation here " + format_double(check.max_rel_deviation);
        } catch (const EvalError& e) {
            anti_step.status = StepStatus::Failed;
            anti_step.detail = e.what();
        }
    }
    if (anti_step.status != StepStatus::Passed) {
        riemann_step.detail = eval_step.detail = "skipped after failed step";
        return report;
    }

    // 5. evaluation by FTC-2.
    const double value = eval_expr(entry.g, b, env) - eval_expr(entry.g, a, env);
    report.value = value;
    eval_step.status = StepStatus::Passed;
    eval_step.detail = "g(b) - g(a)";

    // 4. the Riemann integral, as an independent cross-check.
    RefineOptions refine;
    refine.tol = options.quadrature_tol * std::max(1.0, std::abs(value));
    const auto estimate = integrate_signed_fn(f, a, b, refine);
    report.quadrature = estimate.value;
    report.quadrature_converged = estimate.converged;
    report.cross_check_delta = value - estimate.value;
    riemann_step.status = estimate.converged ? StepStatus::Passed : StepStatus::Failed;
    riemann_step.detail = std::to_string(estimate.cells) + " midpoint cells, " +
                          (estimate.converged ? "converged" : "not converged");
    report.confidence =
        estimate.converged && report.cross_check_ok() ? Confidence::High : Confidence::Downgraded;
    return report;
}

}  // namespace fourcalc
