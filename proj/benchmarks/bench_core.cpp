#include <benchmark/benchmark.h>

#include "mdcf/kernel.hpp"
#include "mdcf/philox.hpp"
#include "mdcf/reliability.hpp"
#include "mdcf/simulator.hpp"

using namespace mdcf;

static void BM_PhiloxBlock(benchmark::State& state)
{
    rng::Counter ctr{0, 0, 0, 0};
    const rng::Key key = rng::key_from_seed(1);
    for (auto _ : state)
    {
        ++ctr[0];
        benchmark::DoNotOptimize(rng::philox4x32(ctr, key));
    }
}
BENCHMARK(BM_PhiloxBlock);

static void BM_CounterStreamDraw(benchmark::State& state)
{
    rng::CounterStream rng(1, rng::Purpose::base_wear, 0);
    for (auto _ : state)
        benchmark::DoNotOptimize(rng());
}
BENCHMARK(BM_CounterStreamDraw);

static void BM_SampleGamma(benchmark::State& state)
{
    rng::CounterStream rng(1, rng::Purpose::base_wear, 0);
    const GammaLaw law(static_cast<double>(state.range(0)) * 1e-3, 1.2);
    for (auto _ : state)
        benchmark::DoNotOptimize(sample_gamma(law, rng));
}
BENCHMARK(BM_SampleGamma)->Arg(5)->Arg(500)->Arg(5000);

static void BM_GammaCdf(benchmark::State& state)
{
    const GammaLaw law(2.0, 1.2);
    double x = 0.0;
    for (auto _ : state)
    {
        x = x > 10.0 ? 0.01 : x + 0.37;
        benchmark::DoNotOptimize(gamma_cdf(x, law));
    }
}
BENCHMARK(BM_GammaCdf);

static void BM_Replication(benchmark::State& state)
{
    const auto params = ModelParams::servo_valve();
    std::uint32_t r = 0;
    for (auto _ : state)
        benchmark::DoNotOptimize(simulate_replication(params, 20.0, 0.01, {1, r++}));
}
BENCHMARK(BM_Replication);

static void BM_AnalyticReliability(benchmark::State& state)
{
    auto params = ModelParams::servo_valve();
    params.shock.lambda0 = 0.5;
    params.shock.gamma_dep = 0.0;
    params.rate_change_enabled = false;
    for (auto _ : state)
        benchmark::DoNotOptimize(analytic_reliability(params, 8.0));
}
BENCHMARK(BM_AnalyticReliability);
BENCHMARK_MAIN();
