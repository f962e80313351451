#include <benchmark/benchmark.h>

#include <string>
#include <vector>

#include "mosample/estimator.hpp"
#include "mosample/multi_sampler.hpp"
#include "mosample/serialize.hpp"
#include "mosample/single_sampler.hpp"
#include "mosample/universal_sampler.hpp"

namespace {

using namespace mosample;

Dataset synthetic(std::int64_t n) {
  Dataset d;
  d.elements.reserve(static_cast<std::size_t>(n));
  for (std::int64_t i = 0; i < n; ++i) {
    Key key = "k" + std::to_string(i);
    const double w = 1.0 + static_cast<double>(keyed_hash(12345, key) % 1000);
    d.elements.push_back({std::move(key), w});
  }
  return d;
}

const RandSource kRand{271828, RankMode::Ppswor};

void BM_PpsBuild(benchmark::State& state) {
  const Dataset d = synthetic(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(pps_build(d, StatFn::sum(), 64, kRand));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_PpsBuild)->Range(1 << 10, 1 << 17);

void BM_BotkBuild(benchmark::State& state) {
  const Dataset d = synthetic(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(botk_build(d, StatFn::sum(), 64, kRand));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_BotkBuild)->Range(1 << 10, 1 << 17);

void BM_MultiBotkBuild(benchmark::State& state) {
  const Dataset d = synthetic(state.range(0));
  const std::vector<Objective> objectives = {{StatFn::sum(), 64},
                                             {StatFn::count(), 64},
                                             {StatFn::cap(100.0), 64},
                                             {StatFn::threshold(500.0), 64}};
  for (auto _ : state) {
    benchmark::DoNotOptimize(mo_botk_build(d, objectives, kRand));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_MultiBotkBuild)->Range(1 << 10, 1 << 17);

void BM_UniversalMonotoneBuild(benchmark::State& state) {
  const Dataset d = synthetic(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(universal_monotone_by_weight(d, 64, kRand));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_UniversalMonotoneBuild)->Range(1 << 10, 1 << 17);

void BM_UniversalCappingBuild(benchmark::State& state) {
  const Dataset d = synthetic(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(universal_capping_build(d, 64, kRand));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_UniversalCappingBuild)->Range(1 << 10, 1 << 17);

void BM_EstimateSegmentSum(benchmark::State& state) {
  const Dataset d = synthetic(state.range(0));
  const BottomKSample s = botk_build(d, StatFn::sum(), 256, kRand);
  const StatFn g = StatFn::cap(100.0);
  const Segment segment = Segment::all();
  for (auto _ : state) {
    benchmark::DoNotOptimize(estimate_segment_sum(s, g, segment));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(s.entries.size()));
}
BENCHMARK(BM_EstimateSegmentSum)->Range(1 << 10, 1 << 17);

void BM_SerializeSample(benchmark::State& state) {
  const Dataset d = synthetic(state.range(0));
  const AnySample s = botk_build(d, StatFn::sum(), 256, kRand);
  for (auto _ : state) {
    benchmark::DoNotOptimize(serialize_sample(s));
  }
}
BENCHMARK(BM_SerializeSample)->Range(1 << 10, 1 << 17);

}  // namespace

BENCHMARK_MAIN();
