#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "dhgp/hypergraph.hpp"
#include "dhgp/refine.hpp"

namespace dhgp {

// Scans nodes in id order, appending each to the open partition while both
// constraints hold, else opening a new one.
Partitioning onePass(const Hypergraph& g, const Constraints& c);

// Seeds a partition with the smallest unassigned node, then repeatedly adds
// the feasible unassigned node sharing the most hyperedges with the
// partition's incident set (smaller id on ties). When no feasible node
// overlaps, the smallest feasible unassigned node fills the remaining room;
// when nothing fits, the next partition is seeded.
Partitioning overlapGreedy(const Hypergraph& g, const Constraints& c);

inline constexpr std::size_t kBruteForceMaxNodes = 10;

struct OptimalPartitioning {
  Partitioning partitioning;
  Weight connectivity = 0;
};

// Exhaustive search over set partitions (restricted growth strings, so
// partitions are numbered by smallest member). Ties keep the
// lexicographically smallest assignment. Throws std::length_error beyond
// kBruteForceMaxNodes nodes.
OptimalPartitioning bruteForceOptimal(const Hypergraph& g, const Constraints& c);

struct SequenceStep {
  std::int64_t violations = 0;  // violated (partition, constraint) pairs
  Weight connectivity = 0;
};

// Applies moves one at a time from rho0, recomputing sizes, inbound sets and
// connectivity from scratch after each. Entry j describes the state after
// the first j moves; moves may not repeat a node.
std::vector<SequenceStep> simulateSequence(const Hypergraph& g, const Partitioning& rho0,
                                           std::span<const Move> moves, const Constraints& c);

}  // namespace dhgp
