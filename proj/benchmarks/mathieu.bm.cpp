#include <benchmark/benchmark.h>

#include "solspec/mathieu.hpp"

using namespace solspec;

static void BM_MathieuSolve(benchmark::State & state)
{
    MathieuProblem p{double(state.range(0)), 1.0};
    for (auto _ : state)
        benchmark::DoNotOptimize(solve(p, 5, 1e-8, {false}));
}
BENCHMARK(BM_MathieuSolve)->Arg(1)->Arg(100)->Arg(10000)->Unit(benchmark::kMillisecond);

static void BM_MathieuSolveBelow(benchmark::State & state)
{
    MathieuProblem p{1.0, 0.9624236501192069};
    for (auto _ : state)
        benchmark::DoNotOptimize(solve_below(p, double(state.range(0)), 1e-9, {false}));
}
BENCHMARK(BM_MathieuSolveBelow)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
