#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "dhgp/coarsen.hpp"
#include "dhgp/hypergraph.hpp"
#include "dhgp/refine.hpp"

namespace dhgp {

struct Config {
  Constraints constraints;
  std::size_t maxRounds = 8;   // refinement rounds per level
  std::size_t batchSize = 32;  // neighbors per histogram batch
  std::uint64_t seed = 0;      // reserved, the pipeline is deterministic
  std::size_t maxLevels = 4096;
  Exec exec = Exec::Parallel;

  // Optional observers, called after candidate matching of every coarsening
  // level and after every refinement round.
  std::function<void(std::size_t level, const Hypergraph&, const NeighborSets&, const PairingForest&)>
      onCoarsenLevel;
  std::function<void(std::size_t level, const Hypergraph&, const Partitioning& before, const RefineRound&)>
      onRefineRound;
};

struct LevelStats {
  std::size_t nodes = 0;
  std::size_t edges = 0;
  std::size_t pins = 0;
  std::size_t matchedPairs = 0;  // pairs merged into the next coarser level
};

struct PhaseTimes {
  double neighborsMs = 0;
  double coarsenMs = 0;
  double refineMs = 0;
  double totalMs = 0;
};

struct RunStats {
  std::vector<LevelStats> levels;  // index 0 is the input hypergraph
  // Per level: connectivity before refinement, then after each applied round.
  std::vector<std::vector<Weight>> connectivityTrace;
  PhaseTimes phases;
  std::size_t numPartitions = 0;
  Weight connectivity = 0;
};

struct PartitionResult {
  Partitioning partitioning;
  RunStats stats;
};

// Coarsens until ⌈|N|/Ω⌉ nodes remain or no pair can merge, adopts the
// coarsest nodes as partitions, then projects back level by level refining
// at each one (the coarsest included). Throws InfeasibleError on inputs no
// partitioning can satisfy.
PartitionResult partition(const Hypergraph& g, const Config& cfg);

}  // namespace dhgp
