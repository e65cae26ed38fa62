#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "dhgp/csr.hpp"
#include "dhgp/types.hpp"

namespace dhgp {

struct Constraints {
  std::uint64_t maxSize = 1;     // fine nodes per partition
  std::uint64_t maxInbound = 1;  // distinct inbound hyperedges per partition
};

// Weighted directed hypergraph in compressed sparse form.
//
// src/dst segments are sorted sets. A node may be a source and a destination
// of the same edge; it is then a single pin of that edge.
class Hypergraph {
 public:
  Hypergraph() = default;

  // Builds in/out incidence by transposing src/dst. nodeSize defaults to all ones.
  Hypergraph(std::size_t numNodes, std::vector<Weight> edgeWeight, CsrSets<NodeId> edgeSrc,
             CsrSets<NodeId> edgeDst, std::vector<std::uint32_t> nodeSize = {});

  // Takes every structure as given (used by contraction, which builds
  // incidence through cluster unions).
  static Hypergraph fromParts(std::size_t numNodes, std::vector<Weight> edgeWeight,
                              CsrSets<NodeId> edgeSrc, CsrSets<NodeId> edgeDst,
                              CsrSets<EdgeId> nodeIn, CsrSets<EdgeId> nodeOut,
                              std::vector<std::uint32_t> nodeSize);

  std::size_t numNodes() const { return numNodes_; }
  std::size_t numEdges() const { return edgeWeight_.size(); }
  std::size_t numPins() const;

  Weight weight(EdgeId e) const { return edgeWeight_[e]; }
  std::span<const NodeId> src(EdgeId e) const { return edgeSrc_[e]; }
  std::span<const NodeId> dst(EdgeId e) const { return edgeDst_[e]; }
  std::span<const EdgeId> in(NodeId n) const { return nodeIn_[n]; }
  std::span<const EdgeId> out(NodeId n) const { return nodeOut_[n]; }
  std::uint32_t nodeSize(NodeId n) const { return nodeSize_[n]; }

  const std::vector<Weight>& edgeWeights() const { return edgeWeight_; }
  const CsrSets<NodeId>& edgeSrc() const { return edgeSrc_; }
  const CsrSets<NodeId>& edgeDst() const { return edgeDst_; }
  const CsrSets<EdgeId>& nodeIn() const { return nodeIn_; }
  const CsrSets<EdgeId>& nodeOut() const { return nodeOut_; }
  const std::vector<std::uint32_t>& nodeSizes() const { return nodeSize_; }
  std::uint64_t totalNodeSize() const;

  // Visits src(e) ∪ dst(e) once each, ascending.
  template <class Fn>
  void forEachPin(EdgeId e, Fn&& fn) const {
    mergeUnique(src(e), dst(e), fn);
  }
  // Visits in(n) ∪ out(n) once each, ascending.
  template <class Fn>
  void forEachIncident(NodeId n, Fn&& fn) const {
    mergeUnique(in(n), out(n), fn);
  }
  std::size_t numUniquePins(EdgeId e) const;

  // Full cross-scan of src/dst against in/out plus structural checks.
  // Returns an empty string when consistent, else a description.
  std::string checkConsistency() const;

 private:
  template <class Id, class Fn>
  static void mergeUnique(std::span<const Id> a, std::span<const Id> b, Fn& fn) {
    std::size_t i = 0, j = 0;
    while (i < a.size() || j < b.size()) {
      if (j == b.size() || (i < a.size() && a[i] < b[j])) {
        fn(a[i++]);
      } else if (i == a.size() || b[j] < a[i]) {
        fn(b[j++]);
      } else {
        fn(a[i]);
        ++i;
        ++j;
      }
    }
  }

  std::size_t numNodes_ = 0;
  std::vector<Weight> edgeWeight_;
  CsrSets<NodeId> edgeSrc_;
  CsrSets<NodeId> edgeDst_;
  CsrSets<EdgeId> nodeIn_;
  CsrSets<EdgeId> nodeOut_;
  std::vector<std::uint32_t> nodeSize_;
};

struct Partitioning {
  std::vector<PartId> assign;  // node -> partition
  std::size_t numParts = 0;

  bool operator==(const Partitioning&) const = default;
};

// Builds a Partitioning from an assignment; numParts = max id + 1.
Partitioning makePartitioning(std::vector<PartId> assign);

// Relabels partition ids to drop empty partitions, keeping relative order.
Partitioning compactPartitioning(const Partitioning& p);

// Σ_e ω(e) · (λ(e) − 1), λ(e) = number of partitions touched by e's pins.
Weight connectivity(const Hypergraph& g, std::span<const PartId> assign);
inline Weight connectivity(const Hypergraph& g, const Partitioning& p) {
  return connectivity(g, p.assign);
}

enum class ViolationKind { Size, Inbound };

struct Violation {
  PartId part;
  ViolationKind kind;
  std::uint64_t actual;
  std::uint64_t limit;

  bool operator==(const Violation&) const = default;
};

const char* toString(ViolationKind kind);

// Per-partition size (Σ nodeSize) and distinct-inbound (|⋃ in(n)|) checks,
// ordered by partition then kind. Empty list iff both constraints hold.
std::vector<Violation> checkValidity(const Hypergraph& g, const Partitioning& p, const Constraints& c);

// checkValidity is empty and every partition id below numParts is used.
bool isValid(const Hypergraph& g, const Partitioning& p, const Constraints& c);

// Throws InfeasibleError when a single node cannot fit in any partition.
void requireFeasible(const Hypergraph& g, const Constraints& c);

}  // namespace dhgp
