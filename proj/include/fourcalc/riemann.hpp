#pragma once

#include "fourcalc/compiled.hpp"
#include "fourcalc/error.hpp"
#include "fourcalc/expr.hpp"
#include "fourcalc/summation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <exception>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace fourcalc {

enum class TagRule { Left, Midpoint, Right };

/// Strictly increasing points x_0 < ... < x_n (n >= 1) with one tag
/// t_i in [x_{i-1}, x_i] per cell.
class Partition {
public:
    Partition(std::vector<double> points, std::vector<double> tags);

    std::span<const double> points() const noexcept { return points_; }
    std::span<const double> tags() const noexcept { return tags_; }
    std::size_t cells() const noexcept { return tags_.size(); }
    double lo() const noexcept { return points_.front(); }
    double hi() const noexcept { return points_.back(); }

private:
    std::vector<double> points_;
    std::vector<double> tags_;
};

/// Uniform grid of n cells over dom; x_i = lo + (hi - lo) * i / n, x_n = hi.
Partition make_partition(const Interval& dom, std::int64_t n, TagRule rule);

/// Grid estimate of min/max, widened by `widen * (1 + |bound|)`. Not a
/// rigorous enclosure: a narrow spike between grid points can escape it.
struct Bounds {
    double m = 0.0;
    double M = 0.0;
    int grid = 0;
    bool rigorous = false;
};

struct IntegralEstimate {
    double value = 0.0;
    int levels = 0;  // doublings performed
    std::int64_t cells = 0;  // cells in the final sum
    double last_delta = 0.0;
    bool converged = false;
    std::optional<Bounds> bounds;
};

struct RefineOptions {
    double tol = 1e-10;
    std::int64_t n0 = 16;
    int max_doublings = 24;
    int bound_grid = 1025;
};

namespace kernels {

/// Cells per block in the parallel reduction. Each block is summed serially,
/// then block sums are folded in index order, so the result does not depend
/// on the thread count.
inline constexpr std::int64_t kBlock = 2048;

/// Sum over i in [0, n) of cell(i): parallel map over blocks, ordered fold.
/// The first failing cell (lowest index) determines the exception thrown.
template <class Cell>
double ordered_sum(std::int64_t n, const Cell& cell) {
    const std::int64_t blocks = (n + kBlock - 1) / kBlock;
    std::vector<double> partial(static_cast<std::size_t>(blocks), 0.0);
    std::exception_ptr error;
    std::int64_t error_block = std::numeric_limits<std::int64_t>::max();
#pragma omp parallel for schedule(static)
    for (std::int64_t b = 0; b < blocks; ++b) {
        try {
            CompensatedSum s;
            const std::int64_t end = std::min(n, (b + 1) * kBlock);
            for (std::int64_t i = b * kBlock; i < end; ++i) s.add(cell(i));
            partial[static_cast<std::size_t>(b)] = s.value();
        } catch (...) {
#pragma omp critical(fourcalc_ordered_sum_error)
            if (b < error_block) {
                error_block = b;
                error = std::current_exception();
            }
        }
    }
    if (error) std::rethrow_exception(error);
    CompensatedSum total;
    for (double v : partial) total.add(v);
    return total.value();
}

/// Uniform midpoint Riemann sum with n cells, computed without materializing
/// a Partition; matches riemann_sum(make_partition(dom, n, Midpoint)).
template <class F>
double midpoint_sum(const F& f, double lo, double hi, std::int64_t n) {
    const double width = hi - lo;
    const double dn = static_cast<double>(n);
    auto point = [&](std::int64_t i) { return i == n ? hi : lo + width * (static_cast<double>(i) / dn); };
    return ordered_sum(n, [&](std::int64_t i) {
        const double x0 = point(i);
        const double x1 = point(i + 1);
        const double t = 0.5 * (x0 + x1);
        try {
            return f(t) * (x1 - x0);
        } catch (const EvalError&) {
            rethrow_with_context("subinterval " + std::to_string(i));
        }
    });
}

/// Values of f on `grid` equispaced points including both endpoints.
template <class F>
std::vector<double> sample_grid(const F& f, double lo, double hi, int grid) {
    std::vector<double> values(static_cast<std::size_t>(grid));
    std::exception_ptr error;
    int error_index = std::numeric_limits<int>::max();
#pragma omp parallel for schedule(static)
    for (int i = 0; i < grid; ++i) {
        const double x = i == grid - 1 ? hi : lo + (hi - lo) * (static_cast<double>(i) / (grid - 1));
        try {
            values[static_cast<std::size_t>(i)] = f(x);
        } catch (...) {
#pragma omp critical(fourcalc_sample_grid_error)
            if (i < error_index) {
                error_index = i;
                error = std::current_exception();
            }
        }
    }
    if (error) std::rethrow_exception(error);
    return values;
}

}  // namespace kernels

/// Grid point i of a `grid`-point equispaced grid over dom.
inline double grid_point(const Interval& dom, int grid, int i) {
    if (grid == 1) return dom.lo();
    return i == grid - 1 ? dom.hi() : dom.lo() + dom.width() * (static_cast<double>(i) / (grid - 1));
}

/// Σ f(t_i)(x_i - x_{i-1}); parallel over cells, fixed-order compensated fold.
double riemann_sum(const Expr& f, const Partition& p, const ParamEnv& env);

/// Single-threaded reference: one compensated pass over cells in order.
double riemann_sum_serial(const Expr& f, const Partition& p, const ParamEnv& env);

template <class F>
Bounds extreme_bounds_fn(const F& f, const Interval& dom, int grid, double widen = 1e-9) {
    if (grid < 2) throw ArgumentError("extreme_bounds needs grid >= 2");
    const auto values = kernels::sample_grid(f, dom.lo(), dom.hi(), grid);
    const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    Bounds b;
    b.m = *lo - widen * (1.0 + std::abs(*lo));
    b.M = *hi + widen * (1.0 + std::abs(*hi));
    b.grid = grid;
    return b;
}

Bounds extreme_bounds(const Expr& f, const Interval& dom, const ParamEnv& env, int grid, double widen = 1e-9);

/// Midpoint sums at n0, 2 n0, 4 n0, ... until successive sums differ by at
/// most tol or the doubling cap is hit (then converged = false). An empty
/// interval integrates to exactly 0 with no levels.
template <class F>
IntegralEstimate integrate_refine_fn(const F& f, const Interval& dom, const RefineOptions& options) {
    if (!(options.tol > 0)) throw ArgumentError("integration tolerance must be positive");
    if (options.n0 < 1) throw ArgumentError("initial cell count must be >= 1");
    IntegralEstimate est;
    if (dom.degenerate()) {
        est.converged = true;
        return est;
    }
    std::int64_t n = options.n0;
    double previous = kernels::midpoint_sum(f, dom.lo(), dom.hi(), n);
    est.value = previous;
    est.cells = n;
    for (int level = 1; level <= options.max_doublings; ++level) {
        n *= 2;
        const double current = kernels::midpoint_sum(f, dom.lo(), dom.hi(), n);
        est.levels = level;
        est.cells = n;
        est.value = current;
        est.last_delta = current - previous;
        if (std::abs(est.last_delta) <= options.tol) {
            est.converged = true;
            break;
        }
        previous = current;
    }
    if (options.bound_grid >= 2) est.bounds = extreme_bounds_fn(f, dom, options.bound_grid);
    return est;
}

IntegralEstimate integrate_refine(const Expr& f, const Interval& dom, const ParamEnv& env,
                                  const RefineOptions& options);

inline IntegralEstimate integrate_refine(const Expr& f, const Interval& dom, const ParamEnv& env, double tol,
                                         std::int64_t n0 = 16) {
    RefineOptions options;
    options.tol = tol;
    options.n0 = n0;
    return integrate_refine(f, dom, env, options);
}

/// Signed integral: ∫_a^b = -∫_b^a and ∫_a^a = 0.
IntegralEstimate integrate_signed(const Expr& f, double a, double b, const ParamEnv& env,
                                  const RefineOptions& options);

template <class F>
IntegralEstimate integrate_signed_fn(const F& f, double a, double b, const RefineOptions& options) {
    if (a <= b) return integrate_refine_fn(f, Interval(a, b), options);
    IntegralEstimate est = integrate_refine_fn(f, Interval(b, a), options);
    est.value = -est.value;
    est.last_delta = -est.last_delta;
    return est;
}

}  // namespace fourcalc
