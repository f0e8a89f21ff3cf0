#include <benchmark/benchmark.h>

#include <random>
#include <string>
#include <vector>

#include "csf/csf.hpp"

namespace {

csf::PlanarCurve corpus(const std::string& generator, std::size_t n) {
    csf::InitialCurveSpec spec;
    spec.generator = generator;
    spec.n = n;
    spec.angle_a = 3.141592653589793;
    spec.angle_b = 1.5707963267948966;
    spec.pin_radius = 8.0;
    spec.seed = 20240917;
    return csf::build_initial_curve(spec);
}

void BM_SweptAreaPrefix(benchmark::State& state) {
    const auto c = corpus("spiral", static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(csf::swept_area_prefix(c).S.back());
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_SweptAreaPrefix)->RangeMultiplier(4)->Range(1 << 10, 1 << 18)->Complexity(benchmark::oN);

void BM_PairExtremaScan(benchmark::State& state) {
    std::mt19937_64 rng(7);
    std::normal_distribution<double> step;
    std::vector<double> g(static_cast<std::size_t>(state.range(0)));
    for (std::size_t i = 1; i < g.size(); ++i) g[i] = g[i - 1] + step(rng);
    for (auto _ : state) benchmark::DoNotOptimize(csf::pair_extrema(g).max);
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_PairExtremaScan)->RangeMultiplier(4)->Range(1 << 10, 1 << 20)->Complexity(benchmark::oN);

void BM_TangentLiftAndCurvature(benchmark::State& state) {
    const auto c = corpus("random_wiggle", static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        const auto lift = csf::tangent_lift(c);
        benchmark::DoNotOptimize(csf::discrete_curvature(c, lift).kappa.back());
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_TangentLiftAndCurvature)->RangeMultiplier(4)->Range(1 << 10, 1 << 16)->Complexity(benchmark::oN);

void BM_SemiImplicitStep(benchmark::State& state) {
    const auto s = csf::make_snapshot(0.0, corpus("spiral", static_cast<std::size_t>(state.range(0))));
    for (auto _ : state) benchmark::DoNotOptimize(csf::step(s, 1e-3).curve.size());
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_SemiImplicitStep)->RangeMultiplier(4)->Range(1 << 9, 1 << 15)->Complexity(benchmark::oN);

void BM_Embeddedness(benchmark::State& state, const char* generator) {
    const auto c = corpus(generator, static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(csf::embeddedness_check(c).ok);
    state.SetComplexityN(state.range(0));
}
BENCHMARK_CAPTURE(BM_Embeddedness, spiral, "spiral")->RangeMultiplier(4)->Range(1 << 10, 1 << 16)->Complexity();
BENCHMARK_CAPTURE(BM_Embeddedness, zigzag, "zigzag")->RangeMultiplier(4)->Range(1 << 10, 1 << 16)->Complexity();

void BM_CorpusRun(benchmark::State& state) {
    const auto c = corpus("wedge", 2001);
    csf::FlowConfig cfg;
    cfg.dt = 1e-3;
    cfg.t_end = 0.25;
    cfg.pin_radius = 8.0;
    for (auto _ : state) benchmark::DoNotOptimize(csf::run(c, cfg).snapshots.size());
}
BENCHMARK(BM_CorpusRun)->Unit(benchmark::kMillisecond);

void BM_HarnackCheck(benchmark::State& state) {
    csf::FlowConfig cfg;
    cfg.dt = 1e-3;
    cfg.t_end = 0.5;
    cfg.pin_radius = 8.0;
    cfg.record_times = {0.25, 0.5};
    const auto trace = csf::run(corpus("random_wiggle", 1001), cfg);
    for (auto _ : state) benchmark::DoNotOptimize(csf::check_harnack_bounds(trace).max_violation);
}
BENCHMARK(BM_HarnackCheck)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
