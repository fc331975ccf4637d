#include <benchmark/benchmark.h>

#include <cfinv/finite_conv.hpp>
#include <cfinv/model_catalog.hpp>
#include <cfinv/oracles.hpp>
#include <cfinv/zerofind.hpp>

#include <vector>

using namespace cfinv;

namespace {

void BM_LevyDensity(benchmark::State& state) {
    const auto s = density_series(levy_area(1.0));
    const double x = static_cast<double>(state.range(0)) / 100.0;
    for (auto _ : state) benchmark::DoNotOptimize(eval_density(s, x).value);
}
BENCHMARK(BM_LevyDensity)->Arg(5)->Arg(50)->Arg(200);

void BM_BridgeSurvival(benchmark::State& state) {
    const auto s = density_series(squared_bessel_bridge());
    for (auto _ : state) benchmark::DoNotOptimize(eval_survival(s, 0.05).value);
}
BENCHMARK(BM_BridgeSurvival);

void BM_ExpConv(benchmark::State& state) {
    std::vector<double> rates;
    for (int i = 1; i <= state.range(0); ++i) rates.push_back(i);
    for (auto _ : state) benchmark::DoNotOptimize(exp_conv(rates).density(1.0));
}
BENCHMARK(BM_ExpConv)->Arg(4)->Arg(16)->Arg(40);

void BM_BesselZeros(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(bessel_zeros(1.5, static_cast<std::size_t>(state.range(0))));
}
BENCHMARK(BM_BesselZeros)->Arg(100)->Arg(1000);

void BM_HestonZeros(benchmark::State& state) {
    for (auto _ : state) {
        const auto z = heston_zeros(2.0, 1.0, 1.0, 32);
        benchmark::DoNotOptimize(z.at(static_cast<std::size_t>(state.range(0))));
    }
}
BENCHMARK(BM_HestonZeros)->Arg(100)->Arg(1000);

void BM_PhiPartial(benchmark::State& state) {
    const auto m = bessel_fht(1.0, 1.0, 2.0);
    m.g_zeros().prefix(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(phi_partial(m, 1.0, static_cast<std::size_t>(state.range(0))));
}
BENCHMARK(BM_PhiPartial)->Arg(500)->Arg(5000);

void BM_GilPelaez(benchmark::State& state) {
    const auto m = levy_area(1.0);
    const CharFn phi = [&](double t) { return m.closed_phi(t); };
    for (auto _ : state) benchmark::DoNotOptimize(gil_pelaez_density(phi, 1.0, {64.0, 1e-10}));
}
BENCHMARK(BM_GilPelaez);

void BM_SampleBridge(benchmark::State& state) {
    const auto m = squared_bessel_bridge();
    const std::size_t n = sampling_factors(m, std::size_t{1} << 16);
    for (auto _ : state) benchmark::DoNotOptimize(sample_halfline(m, n, 4096, 0));
}
BENCHMARK(BM_SampleBridge)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
