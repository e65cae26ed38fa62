#include "dhgp/driver.hpp"

#include <chrono>
#include <numeric>
#include <stdexcept>

namespace dhgp {
namespace {

using Clock = std::chrono::steady_clock;

double msSince(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

LevelStats describe(const Hypergraph& g) {
  return {g.numNodes(), g.numEdges(), g.numPins(), 0};
}

struct Level {
  Hypergraph graph;
  ClusterMap toCoarser;  // empty for the coarsest level
};

}  // namespace

PartitionResult partition(const Hypergraph& input, const Config& cfg) {
  if (cfg.maxRounds == 0 || cfg.batchSize == 0 || cfg.maxLevels == 0) {
    throw std::invalid_argument("config values must be positive");
  }
  requireFeasible(input, cfg.constraints);
  const auto startTotal = Clock::now();
  PartitionResult result;
  RunStats& stats = result.stats;

  const std::uint64_t fineNodes = input.numNodes();
  const std::uint64_t target = (fineNodes + cfg.constraints.maxSize - 1) / cfg.constraints.maxSize;

  std::vector<Level> levels;
  levels.push_back({input, {}});
  stats.levels.push_back(describe(input));

  auto start = Clock::now();
  NeighborSets nbrs = materializeNeighbors(input, cfg.exec);
  stats.phases.neighborsMs = msSince(start);

  start = Clock::now();
  while (levels.back().graph.numNodes() > target) {
    if (levels.size() > cfg.maxLevels) throw std::runtime_error("coarsening exceeded the level cap");
    const Hypergraph& g = levels.back().graph;
    PairingForest forest = selectCandidates(g, nbrs, cfg.constraints, cfg.batchSize, cfg.exec);
    matchNodes(forest, cfg.exec);
    if (cfg.onCoarsenLevel) cfg.onCoarsenLevel(levels.size() - 1, g, nbrs, forest);
    const std::size_t pairs = countMatchedPairs(forest);
    if (pairs == 0) break;
    stats.levels.back().matchedPairs = pairs;

    Contraction next = contract(g, nbrs, forest, cfg.exec);
    levels.back().toCoarser = std::move(next.clusters);
    nbrs = std::move(next.neighbors);
    stats.levels.push_back(describe(next.coarse));
    levels.push_back({std::move(next.coarse), {}});
  }
  nbrs = NeighborSets{};
  stats.phases.coarsenMs = msSince(start);

  // Coarsest nodes become the initial partitions.
  start = Clock::now();
  Partitioning current;
  current.numParts = levels.back().graph.numNodes();
  current.assign.resize(current.numParts);
  std::iota(current.assign.begin(), current.assign.end(), PartId{0});

  stats.connectivityTrace.resize(levels.size());
  for (std::size_t l = levels.size(); l-- > 0;) {
    const Hypergraph& g = levels[l].graph;
    if (l + 1 < levels.size()) current = project(current, levels[l].toCoarser);
    auto& trace = stats.connectivityTrace[l];
    trace.push_back(connectivity(g, current));
    for (std::size_t round = 0; round < cfg.maxRounds; ++round) {
      const Partitioning before = current;
      RefineRound outcome = refineOnce(g, current, cfg.constraints, cfg.exec);
      if (cfg.onRefineRound) cfg.onRefineRound(l, g, before, outcome);
      if (outcome.selection.applyCount == 0) break;
      trace.push_back(connectivity(g, current));
    }
  }
  stats.phases.refineMs = msSince(start);

  result.partitioning = compactPartitioning(current);
  if (!isValid(input, result.partitioning, cfg.constraints)) {
    throw InvariantError("partitioner produced an invalid partitioning");
  }
  stats.numPartitions = result.partitioning.numParts;
  stats.connectivity = connectivity(input, result.partitioning);
  stats.phases.totalMs = msSince(startTotal);
  return result;
}

}  // namespace dhgp
