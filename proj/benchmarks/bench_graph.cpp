#include <benchmark/benchmark.h>

#include "sbw/simulator.hpp"

namespace {

sbw::GeneratedNetwork make_network(std::size_t n) {
  sbw::GeneratorConfig cfg;
  cfg.n_nodes = n;
  cfg.catalog_size = 4 * n;
  cfg.group_count = std::max<std::size_t>(20, n / 50);
  cfg.seed = 7;
  return sbw::generate_network(cfg);
}

}  // namespace

static void BM_GenerateNetwork(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    auto net = make_network(n);
    benchmark::DoNotOptimize(net.graph.node_count());
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_GenerateNetwork)->Arg(1000)->Arg(4000)->Arg(16000)->Unit(benchmark::kMillisecond)->Complexity();

static void BM_Distance2Candidates(benchmark::State& state) {
  const auto net = make_network(static_cast<std::size_t>(state.range(0)));
  const auto nodes = net.graph.nodes();
  std::size_t i = 0;
  for (auto _ : state) {
    auto candidates = net.graph.distance2_out_candidates(nodes[i++ % nodes.size()]);
    benchmark::DoNotOptimize(candidates.size());
  }
}
BENCHMARK(BM_Distance2Candidates)->Arg(4000)->Arg(16000);

static void BM_ComputeStats(benchmark::State& state) {
  const auto net = make_network(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    auto stats = net.graph.compute_stats(sbw::Layer::social);
    benchmark::DoNotOptimize(stats.gscc_size);
  }
}
BENCHMARK(BM_ComputeStats)->Arg(4000)->Arg(16000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
