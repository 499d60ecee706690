#include <benchmark/benchmark.h>

#include "roughstab/ensemble.hpp"
#include "roughstab/experiments.hpp"

using namespace roughstab;

namespace {

Execution mode(const benchmark::State& state) {
    return state.range(0) == 0 ? Execution::serial : Execution::parallel;
}

void label(benchmark::State& state) {
    state.SetLabel(state.range(0) == 0 ? "serial" : "parallel x" + std::to_string(worker_count()));
}

void BM_SdeEndpoints(benchmark::State& state) {
    const auto g = motivational_system();
    const Vec x0 = Vec::Ones(2);
    const EnsembleConfig cfg{1, static_cast<std::size_t>(state.range(1)), mode(state)};
    for (auto _ : state) {
        benchmark::DoNotOptimize(sde_endpoints(g, SdeMode::stratonovich, x0, 1.0, 1e-3, cfg));
    }
    state.SetItemsProcessed(state.iterations() * state.range(1));
    label(state);
}

void BM_GeneratorEstimate(benchmark::State& state) {
    const auto g = motivational_system();
    const auto v = quadratic_lyapunov();
    const EnsembleConfig cfg{1, static_cast<std::size_t>(state.range(1)), mode(state)};
    for (auto _ : state) {
        benchmark::DoNotOptimize(generator_estimate(v, g, Vec::Ones(2), 1e-3, cfg));
    }
    state.SetItemsProcessed(state.iterations() * state.range(1));
    label(state);
}

void BM_CheckAsir(benchmark::State& state) {
    const auto drift = limit_drift(motivational_system(), oscillatory_rate_matrix(3.0, 4.0));
    GridSpec spec;
    spec.directions = static_cast<std::size_t>(state.range(1));
    spec.shells = 200;
    for (auto _ : state) {
        benchmark::DoNotOptimize(check_asir(quadratic_lyapunov(), drift, 2, spec, mode(state)));
    }
    state.SetItemsProcessed(state.iterations() * state.range(1) * 200);
    label(state);
}

void BM_MaxExcursions(benchmark::State& state) {
    const auto g = example_1d_system();
    const EnsembleConfig cfg{1, static_cast<std::size_t>(state.range(1)), mode(state)};
    for (auto _ : state) {
        benchmark::DoNotOptimize(max_excursions(g, SdeMode::stratonovich, Vec::Zero(1), 1.0, 1e-3, cfg));
    }
    state.SetItemsProcessed(state.iterations() * state.range(1));
    label(state);
}

}  // namespace

BENCHMARK(BM_SdeEndpoints)->ArgsProduct({{0, 1}, {256}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_GeneratorEstimate)->ArgsProduct({{0, 1}, {10000}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CheckAsir)->ArgsProduct({{0, 1}, {24, 96}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MaxExcursions)->ArgsProduct({{0, 1}, {256}})->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
