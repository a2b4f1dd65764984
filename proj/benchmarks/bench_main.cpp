#include <stratspace/harness.hpp>
#include <stratspace/oracle.hpp>

#include <benchmark/benchmark.h>

using namespace stratspace;

namespace {

const Region kSquare = Region::rectangle({0, 0, 1, 1});

void BM_UniformPointPolygon(benchmark::State& state) {
  const Region r = Region::polygon({{{0, 0}, {3, 0.4}, {4, 2}, {2.6, 2.2}, {2.2, 3.5}, {0.4, 3}, {0.8, 1.6}}, {}});
  RandomStream s(1);
  for (auto _ : state) benchmark::DoNotOptimize(uniform_point(r, s));
}
BENCHMARK(BM_UniformPointPolygon);

void BM_IntersectionLength(benchmark::State& state) {
  const Region c = Region::disjoint_union({Region::disk({0, 0}, 1), Region::disk({3, 0}, 1)});
  double x = -2;
  for (auto _ : state) {
    benchmark::DoNotOptimize(intersection_length(Segment{{x, 0.1}, 2, 0.3}, c));
    x = x > 5 ? -2 : x + 0.01;
  }
}
BENCHMARK(BM_IntersectionLength);

void BM_EqualAreaPartition(benchmark::State& state) {
  PartitionParams p;
  p.resolution = 128;
  for (auto _ : state) benchmark::DoNotOptimize(equal_area_compact_partition(kSquare, static_cast<int>(state.range(0)), p));
}
BENCHMARK(BM_EqualAreaPartition)->Arg(16)->Arg(50)->Unit(benchmark::kMillisecond);

void BM_Moments(benchmark::State& state) {
  const auto f = builtin_field("smooth_sine", {}, kSquare);
  const auto g = grid_partition(kSquare, 16);
  for (auto _ : state) benchmark::DoNotOptimize(moments(f, g, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_Moments)->Arg(256)->Arg(512)->Unit(benchmark::kMillisecond);

void BM_ReplicateSs1(benchmark::State& state) {
  const auto f = builtin_field("linear", {}, kSquare);
  const Design d = grid_design(Scheme::ss1, kSquare, 64);
  ReplicationConfig c;
  c.replications = 10000;
  c.seed = 1;
  c.threads = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(replicate(f, d, c));
}
BENCHMARK(BM_ReplicateSs1)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();

}  // namespace

BENCHMARK_MAIN();
