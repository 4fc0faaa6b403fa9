#include <benchmark/benchmark.h>

#include "solspec/dynamics.hpp"

#include <cmath>

using namespace solspec;

static Geometry cat()
{
    return geometry(GluingMap({2, 1, 1, 1}), FibreMetric(1, 0, 1));
}

static void BM_Integrate(benchmark::State & state)
{
    Geometry g = cat();
    PhasePoint x{0, 0, 0, 0.6, 0.4, 0.5};
    double s = std::sqrt(hamiltonian(x, g));
    x.pu /= s;
    x.pv /= s;
    x.pz /= s;
    for (auto _ : state)
        benchmark::DoNotOptimize(integrate(x, g, double(state.range(0)), 1e-3, 1000));
}
BENCHMARK(BM_Integrate)->Arg(10)->Arg(100)->Unit(benchmark::kMillisecond);

static void BM_Transport(benchmark::State & state)
{
    Geometry g = cat();
    i64 qmax = state.range(0);
    auto pts = flower(g, qmax);
    LoopSpec loop;
    loop.radius = 0.55 * std::sqrt(double(qmax) / g.sqrtD);
    for (auto _ : state)
        benchmark::DoNotOptimize(monodromy_transport(pts, g, loop));
}
BENCHMARK(BM_Transport)->Arg(3600)->Arg(14400)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
