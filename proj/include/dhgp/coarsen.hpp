#pragma once

#include <span>
#include <string>
#include <vector>

#include "dhgp/hypergraph.hpp"

namespace dhgp {

// Segment n holds the sorted unique neighbors of n, n itself excluded.
using NeighborSets = CsrSets<NodeId>;

// Per-node candidate (pair, score) and the resulting matching.
//
// pair[n] == kNoNode when n has no valid candidate. After matchNodes, match is
// an involution; unmatched nodes have match[n] == n.
struct PairingForest {
  std::vector<NodeId> pair;
  std::vector<Weight> score;
  std::vector<NodeId> match;

  std::size_t size() const { return pair.size(); }
};

// gamma maps fine nodes to coarse ids. Coarse ids ascend with the smallest
// fine id of each cluster.
struct ClusterMap {
  std::vector<NodeId> gamma;
  std::size_t numCoarse = 0;
};

struct Contraction {
  Hypergraph coarse;
  NeighborSets neighbors;
  ClusterMap clusters;
};

NeighborSets materializeNeighbors(const Hypergraph& g, Exec exec = Exec::Parallel);

// |a ∪ b| for strictly increasing inputs: |a| plus members of b not found in a.
std::size_t unionInboundSize(std::span<const EdgeId> a, std::span<const EdgeId> b);

// Whether n and m may form one cluster under c.
bool pairIsValid(const Hypergraph& g, NodeId n, NodeId m, const Constraints& c);

// Best valid neighbor per node by accumulated shared edge weight, larger id on
// ties. Neighbors are histogrammed batchSize at a time and constraint checks
// run only on extracted maxima that could still beat the best so far, so the
// result does not depend on batchSize.
PairingForest selectCandidates(const Hypergraph& g, const NeighborSets& nbrs, const Constraints& c,
                               std::size_t batchSize, Exec exec = Exec::Parallel);

// Claim-with-max matching over the pairing pseudo-forest. Walking up from the
// leaves every node claims its candidate, the highest (score, id) claim
// winning; two-cycles match outright. Walking back down, a node locks onto its
// candidate iff its claim still stands. Throws InvariantError when the pairing
// graph has a cycle longer than two.
void matchNodes(PairingForest& forest, Exec exec = Exec::Parallel);

std::size_t countMatchedPairs(const PairingForest& forest);

ClusterMap clusterMap(const PairingForest& forest, Exec exec = Exec::Parallel);

Contraction contract(const Hypergraph& g, const NeighborSets& nbrs, const PairingForest& forest,
                     Exec exec = Exec::Parallel);

// Empty when the forest satisfies: out-degree <= 1 with no self pairs, score
// monotonicity along pair edges, every cycle of length two, match an
// involution agreeing with pair, matched pairs valid under c. Otherwise the
// first problem found.
std::string checkPairingForest(const Hypergraph& g, const PairingForest& forest, const Constraints& c);

}  // namespace dhgp
