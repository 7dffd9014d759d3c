#include <benchmark/benchmark.h>

#include "kroner/bgg.hpp"
#include "kroner/diffcalc.hpp"
#include "kroner/elasticity.hpp"
#include "kroner/pathintegral.hpp"
#include "kroner/probes.hpp"
#include "kroner/suites.hpp"

using namespace kroner;

static void BM_PolyMultiply(benchmark::State& state) {
    SplitMix64 rng(1);
    const int deg = int(state.range(0));
    const Poly a = random_poly(3, deg, rng), b = random_poly(3, deg, rng);
    for (auto _ : state) benchmark::DoNotOptimize(a * b);
}
BENCHMARK(BM_PolyMultiply)->Arg(2)->Arg(4)->Arg(6);

static void BM_Inc(benchmark::State& state) {
    SplitMix64 rng(2);
    const TensorField e = random_symmetric_field(3, int(state.range(0)), rng);
    for (auto _ : state) benchmark::DoNotOptimize(inc_op(e));
}
BENCHMARK(BM_Inc)->Arg(2)->Arg(4)->Arg(6);

static void BM_P1(benchmark::State& state) {
    (void)resolved_signs();
    SplitMix64 rng(3);
    const TensorField e = def_op(random_vector_field(3, int(state.range(0)) + 1, rng));
    for (auto _ : state) benchmark::DoNotOptimize(p1(e));
}
BENCHMARK(BM_P1)->Arg(2)->Arg(4)->Arg(6);

static void BM_P2(benchmark::State& state) {
    (void)resolved_signs();
    SplitMix64 rng(4);
    const TensorField e = random_symmetric_field(3, int(state.range(0)), rng);
    for (auto _ : state) benchmark::DoNotOptimize(p2(e));
}
BENCHMARK(BM_P2)->Arg(2)->Arg(4)->Arg(6);

static void BM_P3(benchmark::State& state) {
    (void)resolved_signs();
    SplitMix64 rng(5);
    const TensorField u = random_vector_field(3, int(state.range(0)), rng);
    for (auto _ : state) benchmark::DoNotOptimize(p3(u));
}
BENCHMARK(BM_P3)->Arg(2)->Arg(4)->Arg(6);

static void BM_DerivedP1(benchmark::State& state) {
    SplitMix64 rng(6);
    const auto ops = derived_elasticity_ops(3);
    const TensorField e = def_op(random_vector_field(3, int(state.range(0)) + 1, rng));
    for (auto _ : state) benchmark::DoNotOptimize(ops.p[0](e));
}
BENCHMARK(BM_DerivedP1)->Arg(2)->Arg(4);

static void BM_CesaroVolterra(benchmark::State& state) {
    SplitMix64 rng(7);
    const auto src = StrainSource::polynomial(def_op(random_vector_field(3, 5, rng)));
    const PathSpec path({{0, 0, 0}, {0.5, -0.3, 0.2}, {1, 1, 1}});
    const QuadSpec quad{int(state.range(0)), 1};
    for (auto _ : state) benchmark::DoNotOptimize(cesaro_volterra(src, path, quad));
}
BENCHMARK(BM_CesaroVolterra)->Arg(4)->Arg(8)->Arg(16);

BENCHMARK_MAIN();
