#pragma once

#include "fourcalc/expr.hpp"

#include <random>

namespace testutil {

// Random trees over x and the parameters a, b. Integer powers stay small and
// non-negative so most trees are total.
inline fourcalc::Expr random_expr(std::mt19937_64& rng, int depth) {
    using fourcalc::Expr;
    std::uniform_int_distribution<int> pick(0, depth <= 0 ? 4 : 12);
    switch (pick(rng)) {
        case 0:
            return Expr::var();
        case 1:
            return Expr::param(std::uniform_int_distribution<int>(0, 1)(rng) ? "a" : "b");
        case 2:
            return Expr::integer(std::uniform_int_distribution<int>(-5, 9)(rng));
        case 3: {
            const int k = std::uniform_int_distribution<int>(0, 3)(rng);
            const double choices[] = {0.25, 1.5, 0.1, 2.75};
            return Expr::real(choices[k]);
        }
        case 4:
            return Expr::pi();
        case 5:
            return Expr::neg(random_expr(rng, depth - 1));
        case 6:
            return Expr::add(random_expr(rng, depth - 1), random_expr(rng, depth - 1));
        case 7:
            return Expr::sub(random_expr(rng, depth - 1), random_expr(rng, depth - 1));
        case 8:
            return Expr::mul(random_expr(rng, depth - 1), random_expr(rng, depth - 1));
        case 9:
            return Expr::div(random_expr(rng, depth - 1), random_expr(rng, depth - 1));
        case 10:
            return Expr::pow(random_expr(rng, depth - 1), std::uniform_int_distribution<int>(0, 3)(rng));
        case 11:
            return Expr::sin(random_expr(rng, depth - 1));
        default:
            return Expr::cos(random_expr(rng, depth - 1));
    }
}

}  // namespace testutil
