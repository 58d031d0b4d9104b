// Timing harness for the window-partition methods and their building blocks.
// Clouds are drawn from the clustered synthetic family so locality-sensitive
// hashing has structure to exploit, matching how the methods are compared in
// the evaluation tooling.

#include <benchmark/benchmark.h>

#include <cstdint>

#include "lahreg/io/synth.hpp"
#include "lahreg/lsh/baselines.hpp"
#include "lahreg/lsh/hash.hpp"
#include "lahreg/lsh/partition.hpp"
#include "lahreg/util/rng.hpp"

namespace {

using namespace lahreg;

constexpr std::int64_t kWindowPoints = 64;

geom::PointCloud make_cloud(std::int64_t n) {
    return io::sample_surface(io::SurfaceKind::gaussian_mixture, n,
                              util::derive_seed(42, std::uint64_t(n)));
}

void BM_HashPoints(benchmark::State& state) {
    const auto cloud = make_cloud(state.range(0));
    const auto proj = lsh::sample_projection({64, state.range(1), 0});
    for (auto _ : state) benchmark::DoNotOptimize(lsh::hash_points(cloud, proj));
    state.SetItemsProcessed(state.iterations() * cloud.size());
}

void BM_LshPartition(benchmark::State& state) {
    const auto cloud = make_cloud(state.range(0));
    const lsh::HashConfig config{64, state.range(1), 0};
    for (auto _ : state)
        benchmark::DoNotOptimize(lsh::lsh_window_partition(cloud, config, kWindowPoints));
    state.SetItemsProcessed(state.iterations() * cloud.size());
}

void BM_KnnPartition(benchmark::State& state) {
    const auto cloud = make_cloud(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(lsh::knn_partition(cloud, kWindowPoints));
    state.SetItemsProcessed(state.iterations() * cloud.size());
}

void BM_ZorderPartition(benchmark::State& state) {
    const auto cloud = make_cloud(state.range(0));
    for (auto _ : state)
        benchmark::DoNotOptimize(lsh::octree_zorder_partition(cloud, kWindowPoints, 10));
    state.SetItemsProcessed(state.iterations() * cloud.size());
}

void BM_VoxelPartition(benchmark::State& state) {
    const auto cloud = make_cloud(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(lsh::voxel_partition(cloud, 0.1));
    state.SetItemsProcessed(state.iterations() * cloud.size());
}

BENCHMARK(BM_HashPoints)->Args({10000, 4})->Args({100000, 4})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_LshPartition)
    ->Args({10000, 1})
    ->Args({10000, 4})
    ->Args({100000, 1})
    ->Args({100000, 4})
    ->Unit(benchmark::kMillisecond);
BENCHMARK(BM_KnnPartition)->Arg(10000)->Arg(30000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ZorderPartition)->Arg(10000)->Arg(100000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_VoxelPartition)->Arg(10000)->Arg(100000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
