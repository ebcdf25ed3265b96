#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "fgl/evolution.hpp"
#include "fgl/kernel_decay.hpp"
#include "fgl/spectral.hpp"
#include "fgl/weights.hpp"

namespace {

fgl::FieldState gaussian(std::size_t n) {
    const auto g = fgl::make_grid(20, n);
    return fgl::sample(g, [](double x) { return fgl::cplx(std::exp(-x * x)); });
}

void BM_AbsDerivative(benchmark::State& state) {
    const auto f = gaussian(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(fgl::apply_abs_derivative(f));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_AbsDerivative)->RangeMultiplier(4)->Range(256, 16384)->Complexity(benchmark::oNLogN);

void BM_StrangStep(benchmark::State& state) {
    auto f = gaussian(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(fgl::strang_step(f, 1e-3, 2.0));
}
BENCHMARK(BM_StrangStep)->RangeMultiplier(4)->Range(256, 16384);

void BM_Commutator(benchmark::State& state) {
    const auto f = gaussian(static_cast<std::size_t>(state.range(0)));
    const fgl::WeightSpec w{1, 1};
    for (auto _ : state) benchmark::DoNotOptimize(fgl::apply_commutator(w, f.grid, f));
}
BENCHMARK(BM_Commutator)->RangeMultiplier(4)->Range(256, 16384);

void BM_EstimateKappa(benchmark::State& state) {
    const auto g = fgl::make_grid(32, static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(fgl::estimate_kappa({1, 1}, g).kappa);
}
BENCHMARK(BM_EstimateKappa)->Arg(512)->Arg(2048)->Unit(benchmark::kMillisecond);

void BM_KernelOperator(benchmark::State& state) {
    const auto f = gaussian(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(fgl::apply_kernel_operator({1, 1}, f.grid, f));
}
BENCHMARK(BM_KernelOperator)->Arg(512)->Arg(2048);

void BM_KernelTransform(benchmark::State& state) {
    std::vector<double> x(static_cast<std::size_t>(state.range(0)));
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = 10.0 + 0.05 * static_cast<double>(i);
    for (auto _ : state) benchmark::DoNotOptimize(fgl::kernel_values(x));
}
BENCHMARK(BM_KernelTransform)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
