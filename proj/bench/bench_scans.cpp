// Serial reference against the OpenMP kernels for the three grid scans.
// Argument 0 selects the serial path, 1 the parallel one.

#include <benchmark/benchmark.h>

#include "skf/scan.hpp"

using namespace skf;

namespace {

Exec exec_of(const benchmark::State& state) { return state.range(0) == 0 ? Exec::serial : Exec::parallel; }

void BM_ResidualGrid(benchmark::State& state) {
    const Axis beta{0.1, pi - 0.1, 24}, rho{1.05, 4.0, 24};
    for (auto _ : state) benchmark::DoNotOptimize(residual_grid(1.0, beta, rho, exec_of(state)));
    state.SetItemsProcessed(state.iterations() * beta.n * rho.n);
}

void BM_SignGrid(benchmark::State& state) {
    const Axis beta{0.1, pi - 0.1, 16}, rho{1.05, 4.0, 16};
    for (auto _ : state) benchmark::DoNotOptimize(sign_grid(1.2, SegmentId::circle_up, beta, rho, exec_of(state)));
    state.SetItemsProcessed(state.iterations() * beta.n * rho.n);
}

void BM_ResidueGrid(benchmark::State& state) {
    const Axis alpha{0.3, pi / 2, 4}, beta{0.3, 2.8, 4}, rho{1.2, 4.0, 4};
    for (auto _ : state) benchmark::DoNotOptimize(residue_grid(alpha, beta, rho, exec_of(state)));
    state.SetItemsProcessed(state.iterations() * alpha.n * beta.n * rho.n);
}

}  // namespace

BENCHMARK(BM_ResidualGrid)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_SignGrid)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_ResidueGrid)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
