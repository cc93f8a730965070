#include <benchmark/benchmark.h>

#include <vector>

#include "hyperwave/locsym.hpp"
#include "hyperwave/parallel.hpp"

using namespace hyperwave;

namespace {

// (t, r) sweep of the low-frequency kernel, the CLI's kernel command in miniature.
void omega0_sweep(benchmark::State& state, ExecutionMode mode) {
    const SpaceParams p = SpaceParams::hyperbolic(3);
    const auto ts = log_spaced(4.0, 64.0, static_cast<int>(state.range(0)));
    std::vector<double> rs;
    for (int i = 0; i < 8; ++i) rs.push_back(0.25 * i);
    const WaveParams base = WaveParams::low_defaults(p, 1.0);
    (void)inversion_constant(p);
    for (auto _ : state) {
        auto v = omega0_grid(p, base, ts, rs, cutoffs(), mode);
        benchmark::DoNotOptimize(v.data());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<long>(ts.size() * rs.size()));
    state.counters["threads"] = mode == ExecutionMode::parallel ? configured_threads() : 1;
}

void phi_sweep(benchmark::State& state, ExecutionMode mode) {
    const SpaceParams p = SpaceParams::hyperbolic(4);
    std::vector<double> lambdas, rs;
    for (int i = 0; i < state.range(0); ++i) lambdas.push_back(0.1 * i);
    for (int j = 1; j <= 16; ++j) rs.push_back(0.5 * j);
    for (auto _ : state) {
        auto v = phi_grid(p, lambdas, rs, mode);
        benchmark::DoNotOptimize(v.data());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<long>(lambdas.size() * rs.size()));
}

}  // namespace

BENCHMARK_CAPTURE(omega0_sweep, serial, ExecutionMode::serial)->Arg(4)->Arg(12)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(omega0_sweep, parallel, ExecutionMode::parallel)->Arg(4)->Arg(12)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(phi_sweep, serial, ExecutionMode::serial)->Arg(32)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(phi_sweep, parallel, ExecutionMode::parallel)->Arg(32)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
