#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "dhgp/coarsen.hpp"
#include "dhgp/hypergraph.hpp"

namespace dhgp {

struct PinEntry {
  PartId part;
  std::uint32_t pins;    // pins of the edge in this partition
  std::uint32_t pinsIn;  // of which destinations
};

// pins(p, e) and pinsIn(p, e), stored per edge as the sorted list of
// partitions the edge touches. Absent entries are zero.
class PinsMatrix {
 public:
  PinsMatrix() = default;
  PinsMatrix(CsrSets<PinEntry> rows, std::size_t numParts) : rows_(std::move(rows)), numParts_(numParts) {}

  std::uint32_t pins(PartId p, EdgeId e) const {
    const auto* entry = find(p, e);
    return entry ? entry->pins : 0;
  }
  std::uint32_t pinsIn(PartId p, EdgeId e) const {
    const auto* entry = find(p, e);
    return entry ? entry->pinsIn : 0;
  }
  std::span<const PinEntry> row(EdgeId e) const { return rows_[e]; }
  std::size_t numParts() const { return numParts_; }
  std::size_t numEdges() const { return rows_.numSegments(); }

  // |{e : pinsIn(p, e) > 0}| per partition.
  std::vector<std::uint64_t> distinctInbound() const;

 private:
  const PinEntry* find(PartId p, EdgeId e) const {
    const auto r = rows_[e];
    const auto it = std::lower_bound(r.begin(), r.end(), p,
                                     [](const PinEntry& x, PartId q) { return x.part < q; });
    return (it != r.end() && it->part == p) ? &*it : nullptr;
  }

  CsrSets<PinEntry> rows_;
  std::size_t numParts_ = 0;
};

struct Move {
  NodeId node;
  PartId from;
  PartId to;
  Weight gainIso = 0;
  Weight gainSeq = 0;
  std::uint32_t seqIndex = 0;
};

struct PrefixSelection {
  std::size_t applyCount = 0;
  Weight totalGain = 0;
  // activeViolations[j]: violated (partition, constraint) tracks after the
  // first j moves. Size moves + 1.
  std::vector<std::int64_t> activeViolations;
  // cumulativeGain[j]: Σ gainSeq of the first j moves.
  std::vector<Weight> cumulativeGain;
};

PinsMatrix computePins(const Hypergraph& g, std::span<const PartId> assign, std::size_t numParts,
                       Exec exec = Exec::Parallel);

std::vector<std::uint64_t> partitionSizes(const Hypergraph& g, std::span<const PartId> assign,
                                          std::size_t numParts);

// Each node's best in-isolation move, if its gain is positive. Targets that
// would exceed the size limit are skipped; ties go to the smaller partition id.
std::vector<Move> proposeMoves(const Hypergraph& g, std::span<const PartId> assign, const PinsMatrix& pins,
                               std::span<const std::uint64_t> partSizes, const Constraints& c,
                               Exec exec = Exec::Parallel);

// Descending gainIso, smaller node first on ties; assigns seqIndex.
void sortMoves(std::vector<Move>& moves, Exec exec = Exec::Parallel);

// gainSeq of every move assuming all earlier moves of the sequence applied.
void inSequenceGains(const Hypergraph& g, std::vector<Move>& moves, const PinsMatrix& pins,
                     Exec exec = Exec::Parallel);

// Event pipeline: per-prefix validity from sparse size / inbound deltas and
// the best valid prefix by cumulative in-sequence gain (smallest on ties).
PrefixSelection buildEventsAndSelect(const Hypergraph& g, std::span<const Move> moves, const PinsMatrix& pins,
                                     std::span<const std::uint64_t> partSizes,
                                     std::span<const std::uint64_t> partInbound, const Constraints& c,
                                     Exec exec = Exec::Parallel);

Partitioning applyMoves(const Partitioning& p, std::span<const Move> moves, std::size_t count);

// Fine node n takes the partition of its cluster gamma[n].
Partitioning project(const Partitioning& coarse, const ClusterMap& clusters);

struct RefineRound {
  std::vector<Move> moves;  // sorted, with gainSeq
  PrefixSelection selection;
};

// One propose / sequence / select / apply round; updates p in place.
RefineRound refineOnce(const Hypergraph& g, Partitioning& p, const Constraints& c, Exec exec = Exec::Parallel);

}  // namespace dhgp
