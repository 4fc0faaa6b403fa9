#include <benchmark/benchmark.h>

#include "solspec/spectrum.hpp"
#include "solspec/statistics.hpp"

using namespace solspec;

static Geometry cat()
{
    return geometry(GluingMap({2, 1, 1, 1}), FibreMetric(1.1, 0.2, 0.8));
}

static void BM_OrbitEnumerate(benchmark::State & state)
{
    Geometry g = cat();
    for (auto _ : state)
        benchmark::DoNotOptimize(orbit_enumerate(g, state.range(0)));
}
BENCHMARK(BM_OrbitEnumerate)->Arg(900)->Arg(8100)->Arg(100000)->Unit(benchmark::kMillisecond);

static void BM_Assemble(benchmark::State & state)
{
    Geometry g = cat();
    AssembleOptions opt;
    opt.threads = int(state.range(1));
    for (auto _ : state)
        benchmark::DoNotOptimize(assemble(g, double(state.range(0)), 1e-9, opt));
}
BENCHMARK(BM_Assemble)->Args({1000, 1})->Args({2000, 1})->Args({2000, 4})->UseRealTime()->Unit(benchmark::kMillisecond);

static void BM_WedgeSequence(benchmark::State & state)
{
    Geometry g = cat();
    Involution inv{{1, 0, -1, -1}, {1, -1, 0, -1}};
    for (auto _ : state)
        benchmark::DoNotOptimize(value_sequence(g, state.range(0), SymmetryMode::ExtraInvolution, inv));
}
BENCHMARK(BM_WedgeSequence)->Arg(8100)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
