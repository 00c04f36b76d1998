#include <benchmark/benchmark.h>

#include "qotto/dynamics.hpp"
#include "qotto/ltim.hpp"
#include "qotto/state.hpp"

using namespace qotto;

static void BM_BlockPropagator(benchmark::State& state) {
    double tau = static_cast<double>(state.range(0));
    RampProtocol ramp{10.0, 1.0, tau, 200};
    IntegratorOptions opts;
    opts.check = false;
    double k = 0.4;
    for (auto _ : state) benchmark::DoNotOptimize(block_propagator(k, ramp, nullptr, opts));
    state.SetItemsProcessed(state.iterations() *
                            static_cast<long>(tau * mode_gap(k, 10.0) / opts.theta));
}
BENCHMARK(BM_BlockPropagator)->Arg(5)->Arg(50)->Arg(500)->Arg(5000)->Unit(benchmark::kMillisecond);

static void BM_BlockPropagatorChecked(benchmark::State& state) {
    RampProtocol ramp{10.0, 1.0, 50.0, 200};
    for (auto _ : state)
        benchmark::DoNotOptimize(block_propagator(0.4, ramp, nullptr, IntegratorOptions{}));
}
BENCHMARK(BM_BlockPropagatorChecked)->Unit(benchmark::kMillisecond);

static void BM_StaPropagator(benchmark::State& state) {
    RampProtocol ramp{10.0, 1.0, 50.0, 200};
    IntegratorOptions opts;
    opts.check = false;
    StaDrive exact;
    for (auto _ : state) benchmark::DoNotOptimize(block_propagator(0.02, ramp, &exact, opts));
}
BENCHMARK(BM_StaPropagator)->Unit(benchmark::kMillisecond);

static void BM_TimedBathStroke(benchmark::State& state) {
    ModeState probe = thermal_state(0.7, 2.0, 5.0);
    BathSpec bath{1.0, 1.0, 0.0};
    for (auto _ : state)
        benchmark::DoNotOptimize(dissipative_stroke(probe, 0.7, 2.0, bath, 10.0));
}
BENCHMARK(BM_TimedBathStroke)->Unit(benchmark::kMillisecond);

static void BM_DensePropagator(benchmark::State& state) {
    LtimParams params{static_cast<int>(state.range(0)), 1.0, 1.0, Boundary::kOpen};
    int dim = 1 << params.L;
    Eigen::MatrixXcd rho = Eigen::MatrixXcd::Identity(dim, dim) / static_cast<double>(dim);
    RampProtocol ramp{10.0, 0.75, 50.0, 200};
    IntegratorOptions opts;
    opts.check = false;
    for (auto _ : state) benchmark::DoNotOptimize(evolve_dense(rho, params, ramp, opts));
}
BENCHMARK(BM_DensePropagator)->Arg(4)->Arg(6)->Arg(8)->Unit(benchmark::kMillisecond);
