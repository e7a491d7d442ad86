#include "fourcalc/riemann.hpp"

namespace fourcalc {

Partition::Partition(std::vector<double> points, std::vector<double> tags)
    : points_(std::move(points)), tags_(std::move(tags)) {
    if (points_.size() < 2) throw ArgumentError("partition needs at least one cell");
    if (tags_.size() != points_.size() - 1) throw ArgumentError("partition needs exactly one tag per cell");
    for (std::size_t i = 0; i + 1 < points_.size(); ++i) {
        if (!(points_[i] < points_[i + 1])) throw ArgumentError("partition points must be strictly increasing");
        if (!(points_[i] <= tags_[i] && tags_[i] <= points_[i + 1]))
            throw ArgumentError("tag " + std::to_string(i) + " lies outside its cell");
    }
}

Partition make_partition(const Interval& dom, std::int64_t n, TagRule rule) {
    if (n < 1) throw ArgumentError("partition needs n >= 1");
    if (!(dom.lo() < dom.hi())) throw ArgumentError("partition needs a non-degenerate interval");
    const double dn = static_cast<double>(n);
    std::vector<double> points(static_cast<std::size_t>(n) + 1);
    for (std::int64_t i = 0; i < n; ++i)
        points[static_cast<std::size_t>(i)] = dom.lo() + dom.width() * (static_cast<double>(i) / dn);
    points.back() = dom.hi();
    std::vector<double> tags(static_cast<std::size_t>(n));
    for (std::size_t i = 0; i < tags.size(); ++i) {
        switch (rule) {
            case TagRule::Left:
                tags[i] = points[i];
                break;
            case TagRule::Midpoint:
                tags[i] = 0.5 * (points[i] + points[i + 1]);
                break;
            case TagRule::Right:
                tags[i] = points[i + 1];
                break;
        }
    }
    return Partition(std::move(points), std::move(tags));
}

double riemann_sum(const Expr& f, const Partition& p, const ParamEnv& env) {
    const BoundExpr fb(f, env);
    const auto points = p.points();
    const auto tags = p.tags();
    return kernels::ordered_sum(static_cast<std::int64_t>(p.cells()), [&](std::int64_t i) {
        const auto k = static_cast<std::size_t>(i);
        try {
            return fb(tags[k]) * (points[k + 1] - points[k]);
        } catch (const EvalError&) {
            rethrow_with_context("subinterval " + std::to_string(i));
        }
    });
}

double riemann_sum_serial(const Expr& f, const Partition& p, const ParamEnv& env) {
    const auto points = p.points();
    const auto tags = p.tags();
    CompensatedSum sum;
    for (std::size_t i = 0; i < p.cells(); ++i) {
        try {
            sum.add(eval_expr(f, tags[i], env) * (points[i + 1] - points[i]));
        } catch (const EvalError&) {
            rethrow_with_context("subinterval " + std::to_string(i));
        }
    }
    return sum.value();
}

Bounds extreme_bounds(const Expr& f, const Interval& dom, const ParamEnv& env, int grid, double widen) {
    return extreme_bounds_fn(BoundExpr(f, env), dom, grid, widen);
}

IntegralEstimate integrate_refine(const Expr& f, const Interval& dom, const ParamEnv& env,
                                  const RefineOptions& options) {
    return integrate_refine_fn(BoundExpr(f, env), dom, options);
}

IntegralEstimate integrate_signed(const Expr& f, double a, double b, const ParamEnv& env,
                                  const RefineOptions& options) {
    return integrate_signed_fn(BoundExpr(f, env), a, b, options);
}

}  // namespace fourcalc
