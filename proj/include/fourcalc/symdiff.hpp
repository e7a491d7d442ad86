#pragma once

#include "fourcalc/expr.hpp"

#include <vector>

namespace fourcalc {

/// d/dx by structural rules (sum, product, quotient, chain, power), with
/// parameters held constant. No simplification: d/dx sin(n*x) comes out as
/// cos(n*x) * ((n * 1) + (x * 0)).
Expr differentiate(const Expr& e);

/// Rewrites to a fixed point of a finite rule list: constant folding,
/// t*0, t*1, t+0, t-0, 0-t, t/1, t^1, t^0, double negation, sin/cos of integer
/// multiples of pi, and moving constant/parameter factors to the left of a
/// product. The result evaluates to the same value wherever the input is defined.
Expr simplify(const Expr& e);

struct DerivativeCheckOptions {
    double tol = 1e-6;
    /// Deviation is measured relative to max(|f(x)|, abs_floor / tol), so near
    /// zeros of f the check becomes absolute at abs_floor.
    double abs_floor = 1e-9;
    int samples = 64;
    std::vector<double> steps = {1e-4, 1e-5, 1e-6};
};

struct DerivativeCheckReport {
    int sample_count = 0;
    double max_rel_deviation = 0.0;
    std::vector<double> steps;
    bool pass = false;
    double worst_x = 0.0;
    ParamEnv worst_env;
};

/// Checks numerically that `f` is the derivative of `g` on `dom`: at each
/// sample x the central difference (g(x+h) - g(x-h)) / 2h is compared to f(x)
/// for every h in the sweep, keeping the best h. Passes when the largest
/// per-point deviation is within tolerance.
DerivativeCheckReport check_derivative(const Expr& f, const Expr& g, const Interval& dom, const ParamEnv& env,
                                       const DerivativeCheckOptions& options = {});

inline DerivativeCheckReport check_derivative(const Expr& f, const Expr& g, const Interval& dom,
                                              const ParamEnv& env, double tol) {
    DerivativeCheckOptions options;
    options.tol = tol;
    return check_derivative(f, g, dom, env, options);
}

}  // namespace fourcalc
