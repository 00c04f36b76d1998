#include <benchmark/benchmark.h>

#include "qotto/cycle.hpp"
#include "qotto/ltim.hpp"

using namespace qotto;

namespace {

CycleConfig tim_config(int L) {
    CycleConfig c;
    c.L = L;
    c.h1 = 10.0;
    c.h2 = 1.0;
    c.T_hot = 20.0;
    c.T_cold = 1.0;
    c.tau1 = c.tau2 = 50.0;
    c.cutoff = {CutoffKind::kKzCritical, 1.0, 0.0, 0.0, 0.0, 6.5};
    return c;
}

}  // namespace

static void BM_RunCycleBare(benchmark::State& state) {
    CycleConfig c = tim_config(static_cast<int>(state.range(0)));
    c.variant = Variant::kBare;
    for (auto _ : state) benchmark::DoNotOptimize(run_cycle(c));
}
BENCHMARK(BM_RunCycleBare)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);

static void BM_RunCycleAdiabatic(benchmark::State& state) {
    CycleConfig c = tim_config(1000);
    c.variant = Variant::kAdiabatic;
    for (auto _ : state) benchmark::DoNotOptimize(run_cycle(c));
}
BENCHMARK(BM_RunCycleAdiabatic)->Unit(benchmark::kMillisecond);

static void BM_ClosedForm(benchmark::State& state) {
    CycleConfig c = tim_config(1000);
    for (auto _ : state) benchmark::DoNotOptimize(adiabatic_closed_form(c));
}
BENCHMARK(BM_ClosedForm)->Unit(benchmark::kMicrosecond);

static void BM_LtimCyclePair(benchmark::State& state) {
    CycleConfig c;
    c.model = Model::kLtim;
    c.L = 6;
    c.h1 = 10.0;
    c.h2 = 0.75;
    c.T_hot = 500.0;
    c.T_cold = 0.1;
    c.tau1 = c.tau2 = 50.0;
    c.cutoff = {CutoffKind::kKzCritical, 1.0, 0.0, 0.0, 0.0, 1.0};
    std::vector<Variant> variants{Variant::kBare, Variant::kBeqe};
    for (auto _ : state) benchmark::DoNotOptimize(run_ltim_cycle_batch(c, variants));
}
BENCHMARK(BM_LtimCyclePair)->Unit(benchmark::kMillisecond);
