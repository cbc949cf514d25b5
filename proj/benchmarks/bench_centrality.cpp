#include <map>

#include <benchmark/benchmark.h>

#include "fixtures.hpp"
#include "volnet/centrality.hpp"
#include "volnet/routing.hpp"

using namespace volnet;

namespace {

// Multilevel grid with n x n nodes per floor and three floors.
const Network& multilevel(int n) {
  static std::map<int, Network> cache;
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, build_network(test::multilevel_links(7, 3, n))).first;
  return it->second;
}

Metric metric_arg(std::int64_t k) {
  switch (k) {
    case 0: return Metric::angular();
    case 1: return Metric::euclidean();
    case 2: return Metric::hybrid(0.5);
    default: return Metric::topological();
  }
}

void BM_GeodesicSearch(benchmark::State& state) {
  const Network& net = multilevel(static_cast<int>(state.range(0)));
  const TraversalGraph graph(net, metric_arg(state.range(1)));
  GeodesicSearch search(graph);
  LinkIndex origin = 0;
  for (auto _ : state) {
    search.run(origin);
    benchmark::DoNotOptimize(search.settle_order().size());
    origin = (origin + 97) % static_cast<LinkIndex>(net.link_count());
  }
  state.counters["links"] = static_cast<double>(net.link_count());
}
BENCHMARK(BM_GeodesicSearch)->ArgsProduct({{20, 40}, {0, 1, 2, 3}})->Unit(benchmark::kMicrosecond);

void BM_ReachQuery(benchmark::State& state) {
  const Network& net = multilevel(40);
  const TraversalGraph graph(net, Metric::euclidean());
  ReachQuery query(graph, RadiusMode::network);
  LinkIndex origin = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(query.find(origin, static_cast<double>(state.range(0))).size());
    origin = (origin + 97) % static_cast<LinkIndex>(net.link_count());
  }
}
BENCHMARK(BM_ReachQuery)->Arg(100)->Arg(500)->Unit(benchmark::kMicrosecond);

void BM_Analyze(benchmark::State& state) {
  const Network& net = multilevel(static_cast<int>(state.range(0)));
  const double radius = state.range(1) == 0 ? kUnboundedRadius : static_cast<double>(state.range(1));
  CentralityOptions options;
  options.threads = 1;
  for (auto _ : state) {
    const auto table = analyze(net, Metric::angular(), radius, options);
    benchmark::DoNotOptimize(table.betweenness.data());
  }
  state.counters["links"] = static_cast<double>(net.link_count());
}
BENCHMARK(BM_Analyze)->Args({12, 0})->Args({20, 100})->Args({20, 500})->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
