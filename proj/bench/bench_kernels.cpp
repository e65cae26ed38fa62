// Serial reference kernels against their OpenMP counterparts.
#include <benchmark/benchmark.h>

#include <map>

#include "dhgp/baselines.hpp"
#include "dhgp/coarsen.hpp"
#include "dhgp/driver.hpp"
#include "dhgp/generator.hpp"
#include "dhgp/refine.hpp"

namespace {

using namespace dhgp;

const Hypergraph& graphOf(std::size_t nodes) {
  static std::map<std::size_t, Hypergraph> cache;
  auto it = cache.find(nodes);
  if (it == cache.end()) {
    GeneratorOptions opts;
    opts.nodes = nodes;
    opts.edges = nodes;
    opts.maxPins = 5;
    opts.seed = 42;
    it = cache.emplace(nodes, generateHypergraph(opts)).first;
  }
  return it->second;
}

constexpr Constraints kLimits{32, 200};

Exec execOf(const benchmark::State& state) { return state.range(1) ? Exec::Parallel : Exec::Serial; }

void BM_Neighbors(benchmark::State& state) {
  const auto& g = graphOf(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(materializeNeighbors(g, execOf(state)));
}

void BM_Candidates(benchmark::State& state) {
  const auto& g = graphOf(state.range(0));
  const auto nbrs = materializeNeighbors(g);
  for (auto _ : state) benchmark::DoNotOptimize(selectCandidates(g, nbrs, kLimits, 32, execOf(state)));
}

void BM_Contract(benchmark::State& state) {
  const auto& g = graphOf(state.range(0));
  const auto nbrs = materializeNeighbors(g);
  auto forest = selectCandidates(g, nbrs, kLimits, 32);
  matchNodes(forest);
  for (auto _ : state) benchmark::DoNotOptimize(contract(g, nbrs, forest, execOf(state)));
}

void BM_RefineRound(benchmark::State& state) {
  const auto& g = graphOf(state.range(0));
  const auto start = onePass(g, kLimits);
  for (auto _ : state) {
    auto p = start;
    benchmark::DoNotOptimize(refineOnce(g, p, kLimits, execOf(state)));
  }
}

void BM_Partition(benchmark::State& state) {
  const auto& g = graphOf(state.range(0));
  Config cfg;
  cfg.constraints = kLimits;
  cfg.exec = execOf(state);
  for (auto _ : state) benchmark::DoNotOptimize(partition(g, cfg));
}

void sizes(benchmark::internal::Benchmark* b) {
  for (long n : {20000L, 100000L}) {
    b->Args({n, 0});
    b->Args({n, 1});
  }
  b->ArgNames({"nodes", "parallel"})->Unit(benchmark::kMillisecond);
}

BENCHMARK(BM_Neighbors)->Apply(sizes);
BENCHMARK(BM_Candidates)->Apply(sizes);
BENCHMARK(BM_Contract)->Apply(sizes);
BENCHMARK(BM_RefineRound)->Apply(sizes);
BENCHMARK(BM_Partition)->Apply(sizes);

}  // namespace

BENCHMARK_MAIN();
