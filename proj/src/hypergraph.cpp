#include "dhgp/hypergraph.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <utility>

namespace dhgp {
namespace {

CsrSets<EdgeId> transpose(std::size_t numNodes, const CsrSets<NodeId>& edgePins) {
  std::vector<std::uint64_t> offsets(numNodes + 1, 0);
  for (NodeId n : edgePins.data()) ++offsets[n + 1];
  std::partial_sum(offsets.begin(), offsets.end(), offsets.begin());
  std::vector<EdgeId> data(edgePins.totalSize());
  std::vector<std::uint64_t> cursor(offsets.begin(), offsets.end() - 1);
  // Ascending edge order keeps every segment sorted.
  for (std::size_t e = 0; e < edgePins.numSegments(); ++e) {
    for (NodeId n : edgePins[e]) data[cursor[n]++] = static_cast<EdgeId>(e);
  }
  return CsrSets<EdgeId>(std::move(offsets), std::move(data));
}

}  // namespace

Hypergraph::Hypergraph(std::size_t numNodes, std::vector<Weight> edgeWeight, CsrSets<NodeId> edgeSrc,
                       CsrSets<NodeId> edgeDst, std::vector<std::uint32_t> nodeSize)
    : numNodes_(numNodes),
      edgeWeight_(std::move(edgeWeight)),
      edgeSrc_(std::move(edgeSrc)),
      edgeDst_(std::move(edgeDst)),
      nodeSize_(std::move(nodeSize)) {
  nodeIn_ = transpose(numNodes_, edgeDst_);
  nodeOut_ = transpose(numNodes_, edgeSrc_);
  if (nodeSize_.empty()) nodeSize_.assign(numNodes_, 1);
}

Hypergraph Hypergraph::fromParts(std::size_t numNodes, std::vector<Weight> edgeWeight,
                                 CsrSets<NodeId> edgeSrc, CsrSets<NodeId> edgeDst,
                                 CsrSets<EdgeId> nodeIn, CsrSets<EdgeId> nodeOut,
                                 std::vector<std::uint32_t> nodeSize) {
  Hypergraph g;
  g.numNodes_ = numNodes;
  g.edgeWeight_ = std::move(edgeWeight);
  g.edgeSrc_ = std::move(edgeSrc);
  g.edgeDst_ = std::move(edgeDst);
  g.nodeIn_ = std::move(nodeIn);
  g.nodeOut_ = std::move(nodeOut);
  g.nodeSize_ = std::move(nodeSize);
  return g;
}

std::size_t Hypergraph::numPins() const {
  std::size_t total = 0;
  for (EdgeId e = 0; e < numEdges(); ++e) total += numUniquePins(e);
  return total;
}

std::size_t Hypergraph::numUniquePins(EdgeId e) const {
  std::size_t count = 0;
  forEachPin(e, [&](NodeId) { ++count; });
  return count;
}

std::uint64_t Hypergraph::totalNodeSize() const {
  return std::accumulate(nodeSize_.begin(), nodeSize_.end(), std::uint64_t{0});
}

std::string Hypergraph::checkConsistency() const {
  std::ostringstream err;
  if (edgeSrc_.numSegments() != numEdges() || edgeDst_.numSegments() != numEdges()) {
    return "edge segment count mismatch";
  }
  if (nodeIn_.numSegments() != numNodes_ || nodeOut_.numSegments() != numNodes_ ||
      nodeSize_.size() != numNodes_) {
    return "node segment count mismatch";
  }
  if (!edgeSrc_.wellFormed(true) || !edgeDst_.wellFormed(true)) return "edge pins not sorted sets";
  if (!nodeIn_.wellFormed(true) || !nodeOut_.wellFormed(true)) return "incidence not sorted sets";

  for (EdgeId e = 0; e < numEdges(); ++e) {
    if (src(e).empty() && dst(e).empty()) {
      err << "edge " << e << " has no pins";
      return err.str();
    }
    if (!(edgeWeight_[e] >= 0)) {
      err << "edge " << e << " has negative weight";
      return err.str();
    }
    for (NodeId n : dst(e)) {
      if (n >= numNodes_ || !std::binary_search(in(n).begin(), in(n).end(), e)) {
        err << "edge " << e << " dst " << n << " missing from in()";
        return err.str();
      }
    }
    for (NodeId n : src(e)) {
      if (n >= numNodes_ || !std::binary_search(out(n).begin(), out(n).end(), e)) {
        err << "edge " << e << " src " << n << " missing from out()";
        return err.str();
      }
    }
  }
  for (NodeId n = 0; n < numNodes_; ++n) {
    for (EdgeId e : in(n)) {
      if (e >= numEdges() || !std::binary_search(dst(e).begin(), dst(e).end(), n)) {
        err << "node " << n << " in-edge " << e << " lacks it as destination";
        return err.str();
      }
    }
    for (EdgeId e : out(n)) {
      if (e >= numEdges() || !std::binary_search(src(e).begin(), src(e).end(), n)) {
        err << "node " << n << " out-edge " << e << " lacks it as source";
        return err.str();
      }
    }
  }
  return {};
}

Partitioning makePartitioning(std::vector<PartId> assign) {
  Partitioning p;
  p.numParts = assign.empty() ? 0 : *std::max_element(assign.begin(), assign.end()) + std::size_t{1};
  p.assign = std::move(assign);
  return p;
}

Partitioning compactPartitioning(const Partitioning& p) {
  std::vector<PartId> relabel(p.numParts, 0);
  std::vector<char> used(p.numParts, 0);
  for (PartId q : p.assign) used[q] = 1;
  PartId next = 0;
  for (std::size_t q = 0; q < p.numParts; ++q) {
    if (used[q]) relabel[q] = next++;
  }
  Partitioning out;
  out.numParts = next;
  out.assign.reserve(p.assign.size());
  for (PartId q : p.assign) out.assign.push_back(relabel[q]);
  return out;
}

Weight connectivity(const Hypergraph& g, std::span<const PartId> assign) {
  Weight total = 0;
  std::vector<PartId> touched;
  for (EdgeId e = 0; e < g.numEdges(); ++e) {
    touched.clear();
    g.forEachPin(e, [&](NodeId n) { touched.push_back(assign[n]); });
    std::sort(touched.begin(), touched.end());
    const auto lambda = std::unique(touched.begin(), touched.end()) - touched.begin();
    if (lambda > 1) total += g.weight(e) * static_cast<Weight>(lambda - 1);
  }
  return total;
}

const char* toString(ViolationKind kind) {
  return kind == ViolationKind::Size ? "size" : "inbound";
}

std::vector<Violation> checkValidity(const Hypergraph& g, const Partitioning& p, const Constraints& c) {
  std::vector<std::uint64_t> size(p.numParts, 0);
  for (NodeId n = 0; n < g.numNodes(); ++n) size[p.assign[n]] += g.nodeSize(n);

  std::vector<std::pair<PartId, EdgeId>> inbound;
  for (NodeId n = 0; n < g.numNodes(); ++n) {
    for (EdgeId e : g.in(n)) inbound.emplace_back(p.assign[n], e);
  }
  std::sort(inbound.begin(), inbound.end());
  inbound.erase(std::unique(inbound.begin(), inbound.end()), inbound.end());
  std::vector<std::uint64_t> distinct(p.numParts, 0);
  for (const auto& [q, e] : inbound) ++distinct[q];

  std::vector<Violation> out;
  for (PartId q = 0; q < p.numParts; ++q) {
    if (size[q] > c.maxSize) out.push_back({q, ViolationKind::Size, size[q], c.maxSize});
    if (distinct[q] > c.maxInbound) out.push_back({q, ViolationKind::Inbound, distinct[q], c.maxInbound});
  }
  return out;
}

bool isValid(const Hypergraph& g, const Partitioning& p, const Constraints& c) {
  if (p.assign.size() != g.numNodes()) return false;
  std::vector<char> used(p.numParts, 0);
  for (PartId q : p.assign) {
    if (q >= p.numParts) return false;
    used[q] = 1;
  }
  if (std::find(used.begin(), used.end(), 0) != used.end()) return false;
  return checkValidity(g, p, c).empty();
}

void requireFeasible(const Hypergraph& g, const Constraints& c) {
  if (c.maxSize < 1) throw InfeasibleError("max size must be at least 1");
  for (NodeId n = 0; n < g.numNodes(); ++n) {
    if (g.nodeSize(n) > c.maxSize) {
      throw InfeasibleError("node " + std::to_string(n) + " alone exceeds max size");
    }
    if (g.in(n).size() > c.maxInbound) {
      throw InfeasibleError("node " + std::to_string(n) + " has " + std::to_string(g.in(n).size()) +
                            " inbound edges, above the limit of " + std::to_string(c.maxInbound));
    }
  }
}

}  // namespace dhgp
