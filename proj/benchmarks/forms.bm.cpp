#include <benchmark/benchmark.h>

#include "solspec/qforms.hpp"

using namespace solspec;

static void BM_Pell(benchmark::State & state)
{
    i64 d = state.range(0);
    for (auto _ : state)
        benchmark::DoNotOptimize(pell_fundamental(d));
}
BENCHMARK(BM_Pell)->Arg(5)->Arg(193)->Arg(1021);

static void BM_ClassNumber(benchmark::State & state)
{
    for (auto _ : state) {
        i64 total = 0;
        for (i64 d = 5; d <= state.range(0); ++d)
            if (is_valid_discriminant(d))
                total += class_number(d);
        benchmark::DoNotOptimize(total);
    }
}
BENCHMARK(BM_ClassNumber)->Arg(100)->Arg(1000);

static void BM_RepCountBruteforce(benchmark::State & state)
{
    QuadraticForm q{1, -1, -1};
    Mat2i a0 = automorph_generator(q);
    i64 n = state.range(0);
    for (auto _ : state)
        benchmark::DoNotOptimize(rep_count_bruteforce(q, n, a0));
}
BENCHMARK(BM_RepCountBruteforce)->Arg(121)->Arg(9999991);

BENCHMARK_MAIN();
