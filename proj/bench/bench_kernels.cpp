// Serial reference vs OpenMP kernels. Thread count follows OMP_NUM_THREADS.
#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "sweep/harness.hpp"
#include "sweep/kernels.hpp"

namespace {

using sweep::Vector;

std::vector<Vector> cloud(std::size_t n, std::uint64_t seed) {
    sweep::Rng rng(seed);
    std::vector<Vector> pts;
    for (std::size_t i = 0; i < n; ++i) pts.push_back(rng.in_region(sweep::Region::cube(Vector::Zero(2), 3.0)));
    return pts;
}

sweep::ProxSet hexagon() {
    std::vector<sweep::HalfSpace> faces;
    for (int k = 0; k < 6; ++k) {
        const double a = k * M_PI / 3.0;
        faces.push_back({(Vector(2) << std::cos(a), std::sin(a)).finished(), 1.0});
    }
    return sweep::ProxSet::polytope(faces);
}

void BM_MaxDistanceSerial(benchmark::State& state) {
    const auto set = hexagon();
    const auto pts = cloud(static_cast<std::size_t>(state.range(0)), 7);
    for (auto _ : state) benchmark::DoNotOptimize(sweep::kernels::max_distance_serial(set, pts).value);
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_MaxDistanceParallel(benchmark::State& state) {
    const auto set = hexagon();
    const auto pts = cloud(static_cast<std::size_t>(state.range(0)), 7);
    for (auto _ : state) benchmark::DoNotOptimize(sweep::kernels::max_distance(set, pts).value);
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_NormalDefectSerial(benchmark::State& state) {
    const auto z = cloud(static_cast<std::size_t>(state.range(0)), 11);
    const Vector x = Vector::Zero(2);
    const Vector n = Vector::Unit(2, 0);
    for (auto _ : state) benchmark::DoNotOptimize(sweep::kernels::max_normal_defect_serial(x, n, 1.0, z).value);
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_NormalDefectParallel(benchmark::State& state) {
    const auto z = cloud(static_cast<std::size_t>(state.range(0)), 11);
    const Vector x = Vector::Zero(2);
    const Vector n = Vector::Unit(2, 0);
    for (auto _ : state) benchmark::DoNotOptimize(sweep::kernels::max_normal_defect(x, n, 1.0, z).value);
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

// Convergence study of the moving obstacle: level solves plus sup-norm differences.
void BM_ConvergeSerial(benchmark::State& state) {
    const auto s = sweep::load_scenario("moving_obstacle");
    const auto sched = sweep::schedule_for(s, static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(sweep::converge_study_serial(s.family, s.y0, sched).sup_diffs);
}

void BM_ConvergeParallel(benchmark::State& state) {
    const auto s = sweep::load_scenario("moving_obstacle");
    const auto sched = sweep::schedule_for(s, static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(sweep::converge_study(s.family, s.y0, sched).sup_diffs);
}

void BM_CertifySerial(benchmark::State& state) {
    const auto s = sweep::load_scenario("polytope_rotation");
    const auto sched = sweep::schedule_for(s, 4);
    const auto traj = sweep::solve(s.family, s.y0, sched.grids.back(), sched.eps.back());
    for (auto _ : state) benchmark::DoNotOptimize(sweep::certify_steps_serial(s.family, traj, 64, 1).size());
}

void BM_CertifyParallel(benchmark::State& state) {
    const auto s = sweep::load_scenario("polytope_rotation");
    const auto sched = sweep::schedule_for(s, 4);
    const auto traj = sweep::solve(s.family, s.y0, sched.grids.back(), sched.eps.back());
    for (auto _ : state) benchmark::DoNotOptimize(sweep::certify_steps(s.family, traj, 64, 1).size());
}

}  // namespace

BENCHMARK(BM_MaxDistanceSerial)->Arg(1 << 12)->Arg(1 << 16);
BENCHMARK(BM_MaxDistanceParallel)->Arg(1 << 12)->Arg(1 << 16);
BENCHMARK(BM_NormalDefectSerial)->Arg(1 << 12)->Arg(1 << 18);
BENCHMARK(BM_NormalDefectParallel)->Arg(1 << 12)->Arg(1 << 18);
BENCHMARK(BM_ConvergeSerial)->Arg(5)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ConvergeParallel)->Arg(5)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CertifySerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CertifyParallel)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
