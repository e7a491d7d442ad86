// Serial reference vs OpenMP kernels, plus tree walk vs compiled evaluation.

#include "fourcalc/compiled.hpp"
#include "fourcalc/expr.hpp"
#include "fourcalc/riemann.hpp"

#include <benchmark/benchmark.h>

using namespace fourcalc;

namespace {

const Expr& integrand() {
    static const Expr e = parse_expr("sin(3*x)*cos(x) + x^2/(1 + x^2)");
    return e;
}

void BM_RiemannSerial(benchmark::State& state) {
    const auto p = make_partition(Interval(-3, 3), state.range(0), TagRule::Midpoint);
    for (auto _ : state) benchmark::DoNotOptimize(riemann_sum_serial(integrand(), p, {}));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_RiemannParallel(benchmark::State& state) {
    const auto p = make_partition(Interval(-3, 3), state.range(0), TagRule::Midpoint);
    for (auto _ : state) benchmark::DoNotOptimize(riemann_sum(integrand(), p, {}));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_GridTreeWalk(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    for (auto _ : state) {
        double acc = 0;
        for (int i = 0; i < n; ++i) acc += eval_expr(integrand(), -3 + 6.0 * i / n, {});
        benchmark::DoNotOptimize(acc);
    }
    state.SetItemsProcessed(state.iterations() * n);
}

void BM_GridCompiled(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const BoundExpr f(integrand(), {});
    for (auto _ : state) {
        double acc = 0;
        for (int i = 0; i < n; ++i) acc += f(-3 + 6.0 * i / n);
        benchmark::DoNotOptimize(acc);
    }
    state.SetItemsProcessed(state.iterations() * n);
}

}  // namespace

BENCHMARK(BM_RiemannSerial)->RangeMultiplier(16)->Range(1 << 12, 1 << 20)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_RiemannParallel)->RangeMultiplier(16)->Range(1 << 12, 1 << 20)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_GridTreeWalk)->Arg(1 << 14)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_GridCompiled)->Arg(1 << 14)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
