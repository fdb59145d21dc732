#include <benchmark/benchmark.h>

#include "trackctl/lyapunov.hpp"
#include "trackctl/matrix.hpp"
#include "trackctl/models.hpp"
#include "trackctl/simulate.hpp"
#include "trackctl/synthesis.hpp"
#include "trackctl/tolerance.hpp"

namespace {

using namespace trackctl;

PlantModel bench_plant() {
    PlantModel plant;
    plant.a = Matrix{{2.0, -3.0}, {0.0, 2.0}};
    plant.b = Matrix{{1.0, -2.0}, {9.0, -1.0}};
    plant.c = Matrix{{0.5, 1.0}};
    plant.x0 = Matrix{{0.0}, {1.0}};
    return plant;
}

ReferenceModel bench_reference() {
    ReferenceModel ref;
    ref.am = Matrix{{0.9, 1.0, 1.0}, {0.0, 0.9, 1.0}, {0.0, 0.0, 0.9}};
    ref.cm = Matrix{{1.0, 0.9, 0.9}};
    ref.x0m = Matrix{{0.0}, {1.0}, {0.1}};
    return ref;
}

Matrix bench_target() { return Matrix{{-0.9, 0.0}, {0.0, 0.8}}; }

/// Dense stable test matrix of size n: contraction of a fixed mixing matrix.
Matrix stable_dense(std::size_t n) {
    Matrix a(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            a(i, j) = (i == j) ? 0.5 : 0.3 / static_cast<double>(n);
        }
    }
    return a;
}

void BM_lyapunov_direct(benchmark::State& state) {
    const std::size_t n = static_cast<std::size_t>(state.range(0));
    const Matrix a_cl = stable_dense(n);
    const Matrix q = Matrix::identity(n);
    for (auto _ : state) {
        benchmark::DoNotOptimize(solve_direct(a_cl, q));
    }
}
BENCHMARK(BM_lyapunov_direct)->Arg(2)->Arg(4)->Arg(8);

void BM_lyapunov_iterative(benchmark::State& state) {
    const std::size_t n = static_cast<std::size_t>(state.range(0));
    const Matrix a_cl = stable_dense(n);
    const Matrix q = Matrix::identity(n);
    for (auto _ : state) {
        benchmark::DoNotOptimize(solve_iterative(a_cl, q));
    }
}
BENCHMARK(BM_lyapunov_iterative)->Arg(2)->Arg(4)->Arg(8);

void BM_place_gain(benchmark::State& state) {
    const PlantModel plant = bench_plant();
    const Matrix target = bench_target();
    for (auto _ : state) {
        benchmark::DoNotOptimize(place_gain(plant, target));
    }
}
BENCHMARK(BM_place_gain);

void BM_tracking_gains(benchmark::State& state) {
    const PlantModel plant = bench_plant();
    const ReferenceModel reference = bench_reference();
    const Matrix k = place_gain(plant, bench_target());
    const Matrix q = Matrix::identity(2);
    for (auto _ : state) {
        benchmark::DoNotOptimize(tracking_gains(plant, reference, k, q));
    }
}
BENCHMARK(BM_tracking_gains);

void BM_simulate(benchmark::State& state) {
    const PlantModel plant = bench_plant();
    const ReferenceModel reference = bench_reference();
    const TrackingGains gains =
        tracking_gains(plant, reference, place_gain(plant, bench_target()), Matrix::identity(2));
    const int horizon = static_cast<int>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(simulate(plant, reference, gains, horizon));
    }
}
BENCHMARK(BM_simulate)->Arg(200)->Arg(1000);

void BM_minimal_tolerance_time(benchmark::State& state) {
    const PlantModel plant = bench_plant();
    ReferenceModel reference;
    reference.am = Matrix{{0.9, 1.0}, {0.0, 0.9}};
    reference.cm = Matrix{{1.0, 0.9}};
    reference.x0m = Matrix{{0.0}, {1.0}};
    const TrackingGains gains =
        tracking_gains(plant, reference, place_gain(plant, bench_target()), Matrix::identity(2));
    const Disturbance d{2.0, Matrix{{0.3}, {0.5}}};
    const Trajectory traj = simulate_perturbed(plant, reference, gains, d, 200);
    for (auto _ : state) {
        benchmark::DoNotOptimize(minimal_tolerance_time(traj, 0.5));
    }
}
BENCHMARK(BM_minimal_tolerance_time);

}  // namespace

BENCHMARK_MAIN();
