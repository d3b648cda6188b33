#include <benchmark/benchmark.h>

#include "scatlab/evolve.hpp"
#include "scatlab/operators.hpp"
#include "scatlab/oracle.hpp"

using namespace scatlab;

namespace {

WaveFunction bench_packet(const RadialGrid& g) {
    WaveFunction u = WaveFunction::sample(g, [&](double r) {
        return r * std::exp(-(r - 0.2 * g.r_max) * (r - 0.2 * g.r_max) / 8.0) *
               std::exp(Complex(0.0, 1.5 * r));
    });
    u.values /= u.norm();
    return u;
}

void BM_SineTransformRoundTrip(benchmark::State& state) {
    const RadialGrid g = make_grid(static_cast<int>(state.range(0)), 100.0);
    WaveFunction u = bench_packet(g);
    for (auto _ : state) {
        auto c = sine_transform(u);
        benchmark::DoNotOptimize(inverse_sine_transform(c).values.data());
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_SineTransformRoundTrip)->RangeMultiplier(4)->Range(256, 16384)->Complexity();

void BM_StrangStep(benchmark::State& state) {
    const RadialGrid g = make_grid(static_cast<int>(state.range(0)), 100.0);
    auto model = make_saturated(3.0, 2.0);
    WaveFunction u = bench_packet(g);
    const double dt = dt_max(model, g);
    double t = 0.0;
    for (auto _ : state) {
        u = step(u, t, dt, model);
        t += dt;
    }
}
BENCHMARK(BM_StrangStep)->RangeMultiplier(4)->Range(256, 4096);

void BM_DilationCalculusLog(benchmark::State& state) {
    const RadialGrid g = make_grid(static_cast<int>(state.range(0)), 100.0);
    WaveFunction u = bench_packet(g);
    for (auto _ : state) {
        auto w = smooth_projection_pm(+1, 8.0, std::sqrt(8.0), u);
        benchmark::DoNotOptimize(w.values.data());
    }
}
BENCHMARK(BM_DilationCalculusLog)->RangeMultiplier(4)->Range(256, 4096);

void BM_DenseDiagonalize(benchmark::State& state) {
    const RadialGrid g = make_grid(static_cast<int>(state.range(0)), 64.0);
    DenseOperator H = dense_hamiltonian([](double r) { return -3.0 * std::exp(-r); }, g);
    for (auto _ : state) {
        auto sd = diagonalize(H);
        benchmark::DoNotOptimize(sd.eigenvalues.data());
    }
}
BENCHMARK(BM_DenseDiagonalize)->Arg(128)->Arg(256)->Arg(512)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
