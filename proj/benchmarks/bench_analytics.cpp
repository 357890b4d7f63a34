#include <benchmark/benchmark.h>

#include "sbw/linkpred.hpp"
#include "sbw/metrics.hpp"
#include "sbw/polarization.hpp"
#include "sbw/simulator.hpp"

namespace {

const sbw::GeneratedNetwork& network() {
  static const sbw::GeneratedNetwork net = [] {
    sbw::GeneratorConfig cfg;
    cfg.n_nodes = 10000;
    cfg.catalog_size = 40000;
    cfg.group_count = 200;
    cfg.seed = 7;
    return sbw::generate_network(cfg);
  }();
  return net;
}

}  // namespace

static void BM_Pagerank(benchmark::State& state) {
  const auto& net = network();
  for (auto _ : state) {
    auto result = sbw::pagerank(net.graph, sbw::Layer::social);
    benchmark::DoNotOptimize(result.iterations);
  }
}
BENCHMARK(BM_Pagerank)->Unit(benchmark::kMillisecond);

static void BM_Hits(benchmark::State& state) {
  const auto& net = network();
  for (auto _ : state) {
    auto result = sbw::hits(net.graph, sbw::Layer::social);
    benchmark::DoNotOptimize(result.iterations);
  }
}
BENCHMARK(BM_Hits)->Unit(benchmark::kMillisecond);

static void BM_ExtractFeatures(benchmark::State& state) {
  const auto& net = network();
  const auto nodes = net.graph.nodes();
  std::size_t i = 1;
  for (auto _ : state) {
    const sbw::UserId u = nodes[i % nodes.size()];
    const sbw::UserId v = nodes[(i * 7919) % nodes.size()];
    ++i;
    if (u == v) continue;
    auto features = sbw::extract_features(net.graph, net.profiles, u, v);
    benchmark::DoNotOptimize(features.common_neighbors);
  }
}
BENCHMARK(BM_ExtractFeatures);

static void BM_TrainForest(benchmark::State& state) {
  sbw::GeneratorConfig cfg;
  cfg.n_nodes = 4000;
  cfg.catalog_size = 16000;
  cfg.group_count = 80;
  cfg.seed = 7;
  const sbw::Snapshots snaps = sbw::grow_snapshots(cfg);
  const sbw::TrainingSet set =
      sbw::build_training_set(snaps.t0, snaps.t1, snaps.profiles, 4000, 3);
  for (auto _ : state) {
    auto model = sbw::train(set.pairs, static_cast<int>(state.range(0)), 5);
    benchmark::DoNotOptimize(model.tree_count());
  }
}
BENCHMARK(BM_TrainForest)->Arg(10)->Arg(50)->Unit(benchmark::kMillisecond);

static void BM_RewireNullModel(benchmark::State& state) {
  const auto& net = network();
  std::uint64_t seed = 1;
  for (auto _ : state) {
    auto rewired = sbw::rewire_preserve_outdegree(net.graph, sbw::Layer::social, seed++);
    benchmark::DoNotOptimize(rewired.node_count());
  }
}
BENCHMARK(BM_RewireNullModel)->Unit(benchmark::kMillisecond);

static void BM_DetectCommunities(benchmark::State& state) {
  const auto& net = network();
  std::uint64_t seed = 1;
  for (auto _ : state) {
    auto clusters = sbw::detect_communities(net.graph, sbw::Layer::social, seed++);
    benchmark::DoNotOptimize(clusters.size());
  }
}
BENCHMARK(BM_DetectCommunities)->Unit(benchmark::kMillisecond);
