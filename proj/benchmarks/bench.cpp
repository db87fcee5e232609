#include "tdg/barrier_geometry.hpp"
#include "tdg/simulator.hpp"
#include "tdg/strategies.hpp"

#include <benchmark/benchmark.h>

using namespace tdg;

namespace {

Vec vec3(double a, double b, double c) {
    Vec v(3);
    v << a, b, c;
    return v;
}

const GameConfig kCfg = GameConfig::make(3, 0.5);
const Vec kXp = vec3(-0.8, 0, 0.5);

TargetSet ellipsoid() { return TargetSet::ellipsoid(Vec::Zero(3), vec3(0.8, 0.4, 0.4)); }

void BM_EllipsoidProjection(benchmark::State& state) {
    const TargetSet ell = ellipsoid();
    const Vec x = vec3(1.3, -0.7, 0.9);
    for (auto _ : state) benchmark::DoNotOptimize(ell.project(x));
}
BENCHMARK(BM_EllipsoidProjection);

void BM_Barrier(benchmark::State& state) {
    const TargetSet ell = ellipsoid();
    const GameState s{kXp, vec3(0.2, 0.4, 0.9), 0.0};
    for (auto _ : state) benchmark::DoNotOptimize(barrier(kCfg, s, ell).value);
}
BENCHMARK(BM_Barrier);

void BM_CapturePlan(benchmark::State& state) {
    const TargetSet ell = ellipsoid();
    const GameState s{kXp, vec3(0.2, 0.4, 0.9), 0.0};
    for (auto _ : state) benchmark::DoNotOptimize(capture_plan(kCfg, s, ell).value);
}
BENCHMARK(BM_CapturePlan);

void BM_AttackPlan(benchmark::State& state) {
    const TargetSet ell = ellipsoid();
    const GameState s{kXp, vec3(0.2, 0.2, 0.7), 0.0};
    for (auto _ : state) benchmark::DoNotOptimize(attack_plan(kCfg, s, ell, 1).value);
}
BENCHMARK(BM_AttackPlan);

void BM_MapBoundaryToPbs(benchmark::State& state) {
    const TargetSet ell = ellipsoid();
    const Vec p = ell.project(vec3(1.0, 0.7, 0.4));
    for (auto _ : state) benchmark::DoNotOptimize(map_boundary_to_pbs(p, ell, kXp, kCfg).pbs_point);
}
BENCHMARK(BM_MapBoundaryToPbs);

void BM_SimulateCapture(benchmark::State& state) {
    const Scenario sc{kCfg,  ellipsoid(),       kXp,
                      vec3(0.2, 0.4, 0.9),      Policy::optimal(), Policy::optimal(),
                      1e-2,  50.0, 1e-3, 0};
    for (auto _ : state) benchmark::DoNotOptimize(simulate(sc).t_f);
}
BENCHMARK(BM_SimulateCapture);

}  // namespace

BENCHMARK_MAIN();
