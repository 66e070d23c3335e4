#include <benchmark/benchmark.h>

#include <random>

#include "gravattn/dynamics.hpp"
#include "gravattn/features.hpp"
#include "gravattn/gravity.hpp"
#include "gravattn/synthetic.hpp"

using namespace gravattn;

namespace {

Frame blobs(std::size_t n) {
    const double s = static_cast<double>(n);
    return make_blob_frame({n, n}, {Blob{{0.3 * s, 0.4 * s}, s / 40, {1, 1, 1}},
                                    Blob{{0.7 * s, 0.6 * s}, s / 40, {1, 0.3, 0.3}}});
}

MassField random_mass(std::size_t n) {
    std::mt19937 rng(1);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    GrayMap m({n, n});
    for (double& v : m.values()) v = u(rng);
    return MassField(m);
}

void BM_FieldGrid(benchmark::State& state) {
    const MassField mu = random_mass(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(field_grid(mu));
}
BENCHMARK(BM_FieldGrid)->Arg(64)->Arg(224)->Arg(512)->Unit(benchmark::kMillisecond);

void BM_FieldDirect(benchmark::State& state) {
    const MassField mu = random_mass(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(field_at_point(mu, {10.3, 20.7}));
}
BENCHMARK(BM_FieldDirect)->Arg(64)->Arg(224)->Unit(benchmark::kMicrosecond);

void BM_BasicFeatures(benchmark::State& state) {
    const Frame f = blobs(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(basic_stack(f));
}
BENCHMARK(BM_BasicFeatures)->Arg(224)->Unit(benchmark::kMillisecond);

void BM_IttiSaliency(benchmark::State& state) {
    const Frame f = blobs(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(itti_saliency(f));
}
BENCHMARK(BM_IttiSaliency)->Arg(224)->Unit(benchmark::kMillisecond);

void BM_Simulate(benchmark::State& state) {
    const Frame f = blobs(224);
    const FeatureStack s = basic_stack(f);
    SimConfig c;
    c.lambda = 20.0;
    c.duration = static_cast<double>(state.range(0)) / 1000.0;
    c.time_scale = 50.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(simulate(f, s, GravityParams{{}, 1e8}, IorParams{0.1, 14.0, true}, c));
    }
}
BENCHMARK(BM_Simulate)->Arg(1000)->Arg(3000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
