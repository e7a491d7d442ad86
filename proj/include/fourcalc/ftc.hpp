#pragma once

#include "fourcalc/expr.hpp"
#include "fourcalc/riemann.hpp"
#include "fourcalc/symdiff.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <random>
#include <shared_mutex>
#include <string>
#include <vector>

namespace fourcalc {

// ---------------------------------------------------------------------------
// Continuity probe

struct ContinuityProbe {
    bool continuous = false;
    /// Largest adjacent |Δf| at grid, 2·grid, 4·grid resolution.
    std::array<double, 3> jumps{};
    double worst_jump = 0.0;
};

/// Adjacent-sample jumps must shrink by at least 0.75 (half, with 1.5x slack)
/// at each of two grid doublings. Jumps at or below `flat_tol` count as
/// already converged. Heuristic: evidence of continuity, not a proof.
template <class F>
ContinuityProbe continuity_probe_fn(const F& f, const Interval& dom, int grid, double flat_tol) {
    if (grid < 16) throw ArgumentError("continuity probe needs grid >= 16");
    ContinuityProbe probe;
    if (dom.degenerate()) {
        f(dom.lo());
        probe.continuous = true;
        return probe;
    }
    int points = grid;
    for (int level = 0; level < 3; ++level) {
        const auto values = kernels::sample_grid(f, dom.lo(), dom.hi(), points);
        double jump = 0.0;
        for (std::size_t i = 1; i < values.size(); ++i) jump = std::max(jump, std::abs(values[i] - values[i - 1]));
        probe.jumps[static_cast<std::size_t>(level)] = jump;
        points = 2 * (points - 1) + 1;
    }
    probe.worst_jump = probe.jumps[0];
    constexpr double kShrink = 0.75;
    probe.continuous = true;
    for (std::size_t k = 1; k < 3; ++k) {
        const double now = probe.jumps[k];
        const double before = probe.jumps[k - 1];
        if (now <= flat_tol) continue;
        if (!(now <= kShrink * before)) probe.continuous = false;
    }
    return probe;
}

ContinuityProbe continuity_probe(const Expr& f, const Interval& dom, const ParamEnv& env, int grid = 64,
                                 double flat_tol = 1e-12);

// ---------------------------------------------------------------------------
// Parameter constraints

/// One free argument: its type, the range it is sampled from, and whether
/// zero is excluded.
struct ParamSpec {
    std::string name;
    bool integer = false;
    double lo = -2.0;
    double hi = 2.0;
    bool nonzero = false;

    std::string describe() const;
    friend bool operator==(const ParamSpec&, const ParamSpec&) = default;
};

struct ParamConstraints {
    std::vector<ParamSpec> params;
    /// Expressions over the parameters that must not vanish (e.g. m - n).
    std::vector<Expr> nonzero;

    std::set<std::string> names() const;
    const ParamSpec* find(const std::string& name) const;
    /// Empty string when satisfied, otherwise the first violated condition.
    std::string violation(const ParamEnv& env) const;
    bool satisfied_by(const ParamEnv& env) const { return violation(env).empty(); }
    /// Rejection sampling; throws ConfigError after `max_attempts` failures.
    ParamEnv sample(std::mt19937_64& rng, int max_attempts = 1000) const;
};

// ---------------------------------------------------------------------------
// Antiderivative entries

struct Verification {
    double tol = 1e-6;
    int envs_checked = 0;
    double max_rel_deviation = 0.0;
    ParamEnv worst_env;
    double worst_x = 0.0;
};

struct AntiderivativeEntry {
    std::string name;
    Expr f;
    Expr g;
    Interval domain;
    ParamConstraints constraints;
    bool verified = false;
    Verification verification;
};

struct RegisterOptions {
    double tol = 1e-6;
    int envs = 16;
    std::uint64_t seed = 0x5eed;
};

/// Verifies g' = f on `domain` numerically over `options.envs` environments
/// drawn from the constraints. Parameters of g with no constraint get a
/// default real spec in [-2, 2]. A failing pair is returned with
/// verified = false rather than thrown.
AntiderivativeEntry register_antiderivative(std::string name, Expr f, Expr g, Interval domain,
                                            ParamConstraints constraints, const RegisterOptions& options = {});

/// Append-only, thread-safe collection of entries (one writer, many readers).
class AntiderivativeRegistry {
public:
    AntiderivativeRegistry() = default;
    AntiderivativeRegistry(const AntiderivativeRegistry& other);
    AntiderivativeRegistry& operator=(const AntiderivativeRegistry& other);

    /// Throws ArgumentError on duplicate name.
    void add(AntiderivativeEntry entry);
    std::optional<AntiderivativeEntry> find(const std::string& name) const;
    std::vector<AntiderivativeEntry> entries() const;
    std::size_t size() const;

private:
    mutable std::shared_mutex mutex_;
    std::vector<AntiderivativeEntry> entries_;
};

/// Text-level description of a catalogue pair.
struct AntiderivativeSpec {
    std::string name;
    std::string f;
    std::string g;
    double lo;
    double hi;
    ParamConstraints constraints;
};

/// Standard pairs: trig, polynomial, and the orthogonality integrands with
/// their antiderivatives.
std::vector<AntiderivativeSpec> builtin_antiderivative_specs();

/// Registers (and verifies) every builtin pair.
AntiderivativeRegistry builtin_registry(const RegisterOptions& options = {});

// ---------------------------------------------------------------------------
// FTC-2 evaluation

enum class StepStatus { Passed, Probed, Failed, Skipped };

const char* to_string(StepStatus s);

struct FtcStep {
    std::string name;
    StepStatus status = StepStatus::Skipped;
    std::string detail;
};

enum class Confidence { High, Downgraded };

struct FtcReport {
    /// real-valued, continuity, antiderivative, Riemann integral, evaluation
    std::array<FtcStep, 5> steps;
    std::optional<double> value;
    std::optional<double> quadrature;
    bool quadrature_converged = false;
    double cross_check_delta = 0.0;
    Confidence confidence = Confidence::Downgraded;

    /// |delta| <= max(1e-8, 1e-6 |value|)
    bool cross_check_ok() const;
};

struct FtcOptions {
    double quadrature_tol = 1e-9;
    int probe_grid = 64;
    int realness_grid = 257;
    double derivative_tol = 1e-6;
};

/// ∫_a^b f = g(b) - g(a) with the full audit trail; the value is present only
/// when the real-valued, continuity, and antiderivative steps passed.
/// Throws ContractError for an unverified entry, ArgumentError when a or b
/// leaves the entry's domain, ConstraintError when env violates constraints.
FtcReport ftc2_evaluate(const AntiderivativeEntry& entry, double a, double b, const ParamEnv& env,
                        const FtcOptions& options = {});

}  // namespace fourcalc
