#include "dhgp/baselines.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace dhgp {
namespace {

constexpr std::uint32_t kUnassigned = std::numeric_limits<std::uint32_t>::max();

// Size and distinct-inbound bookkeeping of the partition being filled.
class OpenPartition {
 public:
  explicit OpenPartition(const Hypergraph& g) : g_(g), inboundStamp_(g.numEdges(), kUnassigned) {}

  void reset(PartId id) {
    id_ = id;
    size_ = 0;
    inbound_ = 0;
  }

  bool fits(NodeId n, const Constraints& c) const {
    if (size_ + g_.nodeSize(n) > c.maxSize) return false;
    std::uint64_t added = 0;
    for (EdgeId e : g_.in(n)) added += inboundStamp_[e] != id_;
    return inbound_ + added <= c.maxInbound;
  }

  void add(NodeId n) {
    size_ += g_.nodeSize(n);
    for (EdgeId e : g_.in(n)) {
      if (inboundStamp_[e] != id_) {
        inboundStamp_[e] = id_;
        ++inbound_;
      }
    }
  }

  PartId id() const { return id_; }

 private:
  const Hypergraph& g_;
  std::vector<PartId> inboundStamp_;
  PartId id_ = 0;
  std::uint64_t size_ = 0;
  std::uint64_t inbound_ = 0;
};

}  // namespace

Partitioning onePass(const Hypergraph& g, const Constraints& c) {
  requireFeasible(g, c);
  std::vector<PartId> assign(g.numNodes());
  OpenPartition open(g);
  open.reset(0);
  bool empty = true;
  for (NodeId n = 0; n < g.numNodes(); ++n) {
    if (!empty && !open.fits(n, c)) {
      open.reset(open.id() + 1);
      empty = true;
    }
    open.add(n);
    empty = false;
    assign[n] = open.id();
  }
  return makePartitioning(std::move(assign));
}

Partitioning overlapGreedy(const Hypergraph& g, const Constraints& c) {
  requireFeasible(g, c);
  const std::size_t numNodes = g.numNodes();
  std::vector<PartId> assign(numNodes, kUnassigned);
  std::vector<std::uint64_t> overlap(numNodes, 0);
  std::vector<PartId> overlapStamp(numNodes, kUnassigned);
  std::vector<PartId> excludedStamp(numNodes, kUnassigned);
  std::vector<PartId> incidentStamp(g.numEdges(), kUnassigned);
  std::vector<NodeId> touched;
  OpenPartition open(g);

  auto add = [&](NodeId n) {
    const PartId q = open.id();
    assign[n] = q;
    open.add(n);
    g.forEachIncident(n, [&](EdgeId e) {
      if (incidentStamp[e] == q) return;
      incidentStamp[e] = q;
      g.forEachPin(e, [&](NodeId m) {
        if (assign[m] != kUnassigned) return;
        if (overlapStamp[m] != q) {
          overlapStamp[m] = q;
          overlap[m] = 0;
          touched.push_back(m);
        }
        ++overlap[m];
      });
    });
  };

  NodeId seedCursor = 0;
  PartId nextPart = 0;
  while (true) {
    while (seedCursor < numNodes && assign[seedCursor] != kUnassigned) ++seedCursor;
    if (seedCursor == numNodes) break;
    const PartId q = nextPart++;
    open.reset(q);
    touched.clear();
    add(seedCursor);
    NodeId fillCursor = seedCursor;

    while (true) {
      NodeId chosen = kNoNode;
      // Best overlapping candidate; infeasible ones stay infeasible for this
      // partition since its sets only grow.
      while (true) {
        NodeId best = kNoNode;
        for (NodeId m : touched) {
          if (assign[m] != kUnassigned || excludedStamp[m] == q) continue;
          if (best == kNoNode || overlap[m] > overlap[best] || (overlap[m] == overlap[best] && m < best)) {
            best = m;
          }
        }
        if (best == kNoNode) break;
        if (open.fits(best, c)) {
          chosen = best;
          break;
        }
        excludedStamp[best] = q;
      }
      if (chosen == kNoNode) {
        while (fillCursor < numNodes) {
          if (assign[fillCursor] == kUnassigned && excludedStamp[fillCursor] != q) {
            if (open.fits(fillCursor, c)) {
              chosen = fillCursor;
              break;
            }
            excludedStamp[fillCursor] = q;
          }
          ++fillCursor;
        }
      }
      if (chosen == kNoNode) break;
      add(chosen);
      touched.erase(std::remove_if(touched.begin(), touched.end(),
                                   [&](NodeId m) { return assign[m] != kUnassigned; }),
                    touched.end());
    }
  }
  return makePartitioning(std::move(assign));
}

OptimalPartitioning bruteForceOptimal(const Hypergraph& g, const Constraints& c) {
  const std::size_t numNodes = g.numNodes();
  if (numNodes > kBruteForceMaxNodes) {
    throw std::length_error("brute force is limited to " + std::to_string(kBruteForceMaxNodes) + " nodes");
  }
  requireFeasible(g, c);

  OptimalPartitioning best;
  bool found = false;
  std::vector<PartId> assign(numNodes, 0);
  std::vector<std::uint64_t> blockSize(numNodes + 1, 0);

  // Restricted growth strings in lexicographic order; size pruned on the way
  // down, inbound checked at the leaves.
  auto recurse = [&](auto&& self, std::size_t n, PartId usedBlocks) -> void {
    if (n == numNodes) {
      Partitioning p{assign, usedBlocks};
      if (!checkValidity(g, p, c).empty()) return;
      const Weight conn = connectivity(g, p);
      if (!found || conn < best.connectivity) {
        found = true;
        best.connectivity = conn;
        best.partitioning = std::move(p);
      }
      return;
    }
    const auto node = static_cast<NodeId>(n);
    for (PartId b = 0; b <= usedBlocks; ++b) {
      if (blockSize[b] + g.nodeSize(node) > c.maxSize) continue;
      assign[n] = b;
      blockSize[b] += g.nodeSize(node);
      self(self, n + 1, b == usedBlocks ? usedBlocks + 1 : usedBlocks);
      blockSize[b] -= g.nodeSize(node);
    }
  };
  recurse(recurse, 0, 0);
  if (!found) throw InfeasibleError("no valid partitioning exists");
  return best;
}

std::vector<SequenceStep> simulateSequence(const Hypergraph& g, const Partitioning& rho0,
                                           std::span<const Move> moves, const Constraints& c) {
  Partitioning state = rho0;
  for (const Move& mv : moves) state.numParts = std::max<std::size_t>(state.numParts, mv.to + std::size_t{1});
  std::vector<char> moved(g.numNodes(), 0);

  auto snapshot = [&] {
    return SequenceStep{static_cast<std::int64_t>(checkValidity(g, state, c).size()), connectivity(g, state)};
  };
  std::vector<SequenceStep> steps;
  steps.reserve(moves.size() + 1);
  steps.push_back(snapshot());
  for (const Move& mv : moves) {
    if (moved[mv.node]) throw std::invalid_argument("node moved twice in one sequence");
    moved[mv.node] = 1;
    state.assign[mv.node] = mv.to;
    steps.push_back(snapshot());
  }
  return steps;
}

}  // namespace dhgp
