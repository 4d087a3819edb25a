#include <benchmark/benchmark.h>

#include "robtherm/channels.hpp"
#include "robtherm/named.hpp"
#include "robtherm/random.hpp"

using namespace robtherm;

static void BM_StabilizerEnumeration(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(enumerate_stabilizer_states(n));
}
BENCHMARK(BM_StabilizerEnumeration)->DenseRange(1, 3)->Unit(benchmark::kMillisecond);

static void BM_GoldenCoherence(benchmark::State& state) {
    const Eigen::Index d = state.range(0);
    const DensityMatrix rho = DensityMatrix::from_pure(golden_state(d));
    const FreeSetSpec spec = FreeSetSpec::incoherent(d);
    for (auto _ : state) benchmark::DoNotOptimize(robustness_dual(rho, spec, 1e-8).value);
}
BENCHMARK(BM_GoldenCoherence)->RangeMultiplier(2)->Range(2, 16)->Unit(benchmark::kMillisecond);

static void BM_TStateMagic(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const DensityMatrix rho = DensityMatrix::from_pure(tensor_power(t_state(), n));
    const FreeSetSpec spec = FreeSetSpec::stabilizer(n);
    for (auto _ : state) benchmark::DoNotOptimize(robustness_dual(rho, spec, 1e-8).value);
}
BENCHMARK(BM_TStateMagic)->DenseRange(1, 3)->Unit(benchmark::kMillisecond);

static void BM_MixedStabilizer(benchmark::State& state) {
    Rng rng(1);
    const DensityMatrix rho = random_density_matrix(4, rng);
    const FreeSetSpec spec = FreeSetSpec::stabilizer(2);
    for (auto _ : state) benchmark::DoNotOptimize(robustness_dual(rho, spec, 1e-7).value);
}
BENCHMARK(BM_MixedStabilizer)->Unit(benchmark::kMillisecond);

static void BM_TGateChoi(benchmark::State& state) {
    const QuantumChannel t = QuantumChannel::unitary(t_gate());
    const FreeSetSpec spec = FreeSetSpec::stabilizer(2);
    for (auto _ : state) benchmark::DoNotOptimize(channel_robustness_lower(t, spec).value);
}
BENCHMARK(BM_TGateChoi)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
