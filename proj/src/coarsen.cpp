#include "dhgp/coarsen.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace dhgp {
namespace {

struct Candidate {
  Weight value;
  NodeId id;
};

// Lexicographic (value, id): larger value first, larger id on ties.
bool beats(const Candidate& a, const Candidate& b) {
  if (a.value != b.value) return a.value > b.value;
  return a.id > b.id;
}

// Children lists of the pairing graph (reverse pair edges), ascending ids.
CsrSets<NodeId> pairChildren(const PairingForest& f) {
  const std::size_t n = f.size();
  std::vector<std::uint64_t> offsets(n + 1, 0);
  for (NodeId v = 0; v < n; ++v) {
    if (f.pair[v] != kNoNode) ++offsets[f.pair[v] + 1];
  }
  std::partial_sum(offsets.begin(), offsets.end(), offsets.begin());
  std::vector<NodeId> data(offsets.back());
  std::vector<std::uint64_t> cursor(offsets.begin(), offsets.end() - 1);
  for (NodeId v = 0; v < n; ++v) {
    if (f.pair[v] != kNoNode) data[cursor[f.pair[v]]++] = v;
  }
  return CsrSets<NodeId>(std::move(offsets), std::move(data));
}

bool isTwoCycle(const PairingForest& f, NodeId v) {
  const NodeId p = f.pair[v];
  return p != kNoNode && f.pair[p] == v;
}

}  // namespace

NeighborSets materializeNeighbors(const Hypergraph& g, Exec exec) {
  return NeighborSets::build(exec, g.numNodes(), [&](std::size_t s, std::vector<NodeId>& out) {
    const auto n = static_cast<NodeId>(s);
    g.forEachIncident(n, [&](EdgeId e) {
      g.forEachPin(e, [&](NodeId m) {
        if (m != n) out.push_back(m);
      });
    });
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
  });
}

std::size_t unionInboundSize(std::span<const EdgeId> a, std::span<const EdgeId> b) {
  std::size_t missing = 0;
  for (EdgeId e : b) {
    if (!std::binary_search(a.begin(), a.end(), e)) ++missing;
  }
  return a.size() + missing;
}

bool pairIsValid(const Hypergraph& g, NodeId n, NodeId m, const Constraints& c) {
  if (std::uint64_t{g.nodeSize(n)} + g.nodeSize(m) > c.maxSize) return false;
  return unionInboundSize(g.in(n), g.in(m)) <= c.maxInbound;
}

PairingForest selectCandidates(const Hypergraph& g, const NeighborSets& nbrs, const Constraints& c,
                               std::size_t batchSize, Exec exec) {
  if (batchSize == 0) throw std::invalid_argument("batch size must be positive");
  const std::size_t numNodes = g.numNodes();
  PairingForest forest;
  forest.pair.assign(numNodes, kNoNode);
  forest.score.assign(numNodes, 0.0);
  forest.match.resize(numNodes);
  std::iota(forest.match.begin(), forest.match.end(), NodeId{0});

  par::forEachIndex(exec, numNodes, [&](std::size_t s) {
    const auto n = static_cast<NodeId>(s);
    const auto neighbors = nbrs[n];
    if (neighbors.empty()) return;

    std::vector<EdgeId> incident;
    g.forEachIncident(n, [&](EdgeId e) { incident.push_back(e); });

    std::vector<Weight> bins;
    std::vector<std::uint32_t> order;
    Candidate best{0.0, kNoNode};
    for (std::size_t lo = 0; lo < neighbors.size(); lo += batchSize) {
      const auto batch = neighbors.subspan(lo, std::min(batchSize, neighbors.size() - lo));
      bins.assign(batch.size(), 0.0);
      // Incident edges in ascending id order: identical summation order for
      // hist(n, m) and hist(m, n), and for every batch size.
      for (EdgeId e : incident) {
        g.forEachPin(e, [&](NodeId m) {
          const auto it = std::lower_bound(batch.begin(), batch.end(), m);
          if (it != batch.end() && *it == m) bins[it - batch.begin()] += g.weight(e);
        });
      }
      order.resize(batch.size());
      std::iota(order.begin(), order.end(), 0u);
      std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
        return beats({bins[a], batch[a]}, {bins[b], batch[b]});
      });
      for (std::uint32_t i : order) {
        const Candidate cand{bins[i], batch[i]};
        if (best.id != kNoNode && !beats(cand, best)) break;
        if (pairIsValid(g, n, cand.id, c)) {
          best = cand;
          break;
        }
      }
    }
    if (best.id != kNoNode) {
      forest.pair[n] = best.id;
      forest.score[n] = best.value;
    }
  });
  return forest;
}

void matchNodes(PairingForest& f, Exec exec) {
  const std::size_t numNodes = f.size();
  for (NodeId v = 0; v < numNodes; ++v) {
    if (f.pair[v] == v || (f.pair[v] != kNoNode && f.pair[v] >= numNodes)) {
      throw InvariantError("pair of node " + std::to_string(v) + " is not a valid neighbor");
    }
  }
  const auto children = pairChildren(f);

  // A claim whose score exceeds the claimed node's own score breaks the
  // monotonicity the walk relies on; such an edge counts as a lost claim.
  auto claims = [&](NodeId child) {
    const NodeId p = f.pair[child];
    return f.pair[p] == kNoNode || f.score[child] <= f.score[p];
  };

  // Upward pass. The winner of every atomic-max race is the claimant with the
  // highest (score, id), independent of arrival order.
  std::vector<NodeId> match(numNodes);
  par::forEachIndex(exec, numNodes, [&](std::size_t s) {
    const auto v = static_cast<NodeId>(s);
    Candidate best{0.0, kNoNode};
    for (NodeId child : children[v]) {
      if (!claims(child)) continue;
      const Candidate cand{f.score[child], child};
      if (best.id == kNoNode || beats(cand, best)) best = cand;
    }
    match[v] = best.id == kNoNode ? v : best.id;
    if (isTwoCycle(f, v)) match[v] = f.pair[v];
  });

  // Downward pass, one depth level at a time from the roots (two-cycles and
  // nodes without candidate). Every node at depth d reads only match slots of
  // depth d-1, which are final by then.
  std::vector<NodeId> frontier;
  for (NodeId v = 0; v < numNodes; ++v) {
    if (f.pair[v] == kNoNode || isTwoCycle(f, v)) frontier.push_back(v);
  }
  std::size_t reached = frontier.size();
  std::vector<NodeId> next;
  while (!frontier.empty()) {
    next.clear();
    for (NodeId v : frontier) {
      for (NodeId child : children[v]) {
        if (!isTwoCycle(f, child)) next.push_back(child);
      }
    }
    par::forEachIndex(exec, next.size(), [&](std::size_t i) {
      const NodeId v = next[i];
      const NodeId p = f.pair[v];
      if (match[p] == v) match[v] = p;
    });
    reached += next.size();
    frontier.swap(next);
  }
  if (reached != numNodes) {
    throw InvariantError("pairing graph has a cycle longer than two");
  }
  f.match = std::move(match);
}

std::size_t countMatchedPairs(const PairingForest& f) {
  std::size_t pairs = 0;
  for (NodeId v = 0; v < f.size(); ++v) {
    if (f.match[v] > v) ++pairs;
  }
  return pairs;
}

ClusterMap clusterMap(const PairingForest& f, Exec exec) {
  const std::size_t numNodes = f.size();
  ClusterMap map;
  std::vector<std::uint64_t> leader(numNodes);
  for (NodeId v = 0; v < numNodes; ++v) leader[v] = f.match[v] >= v ? 1 : 0;
  map.numCoarse = par::exclusiveScan(exec, std::span<std::uint64_t>(leader));
  map.gamma.resize(numNodes);
  par::forEachIndex(exec, numNodes, [&](std::size_t v) {
    const NodeId first = std::min<NodeId>(static_cast<NodeId>(v), f.match[v]);
    map.gamma[v] = static_cast<NodeId>(leader[first]);
  });
  return map;
}

Contraction contract(const Hypergraph& g, const NeighborSets& nbrs, const PairingForest& f, Exec exec) {
  Contraction out;
  out.clusters = clusterMap(f, exec);
  const auto& gamma = out.clusters.gamma;
  const std::size_t numCoarse = out.clusters.numCoarse;

  std::vector<NodeId> firstMember(numCoarse);
  for (NodeId v = 0; v < g.numNodes(); ++v) {
    if (f.match[v] >= v) firstMember[gamma[v]] = v;
  }

  auto mapPins = [&](std::span<const NodeId> pins, std::vector<NodeId>& into) {
    for (NodeId v : pins) into.push_back(gamma[v]);
    std::sort(into.begin(), into.end());
    into.erase(std::unique(into.begin(), into.end()), into.end());
  };
  auto coarseSrc = CsrSets<NodeId>::build(exec, g.numEdges(), [&](std::size_t e, std::vector<NodeId>& into) {
    mapPins(g.src(static_cast<EdgeId>(e)), into);
  });
  auto coarseDst = CsrSets<NodeId>::build(exec, g.numEdges(), [&](std::size_t e, std::vector<NodeId>& into) {
    mapPins(g.dst(static_cast<EdgeId>(e)), into);
  });

  // Cluster incidence is the union of member incidence; edge ids are kept.
  auto unionOfMembers = [&](const CsrSets<EdgeId>& sets) {
    return CsrSets<EdgeId>::build(exec, numCoarse, [&](std::size_t c, std::vector<EdgeId>& into) {
      const NodeId a = firstMember[c];
      const NodeId b = f.match[a];
      if (a == b) {
        into.assign(sets[a].begin(), sets[a].end());
      } else {
        std::set_union(sets[a].begin(), sets[a].end(), sets[b].begin(), sets[b].end(),
                       std::back_inserter(into));
      }
    });
  };
  auto coarseIn = unionOfMembers(g.nodeIn());
  auto coarseOut = unionOfMembers(g.nodeOut());

  out.neighbors = NeighborSets::build(exec, numCoarse, [&](std::size_t c, std::vector<NodeId>& into) {
    const NodeId a = firstMember[c];
    const NodeId b = f.match[a];
    for (NodeId v : nbrs[a]) into.push_back(gamma[v]);
    if (b != a) {
      for (NodeId v : nbrs[b]) into.push_back(gamma[v]);
    }
    std::sort(into.begin(), into.end());
    into.erase(std::unique(into.begin(), into.end()), into.end());
    const auto self = std::lower_bound(into.begin(), into.end(), static_cast<NodeId>(c));
    if (self != into.end() && *self == c) into.erase(self);
  });

  std::vector<std::uint32_t> sizes(numCoarse, 0);
  for (NodeId v = 0; v < g.numNodes(); ++v) sizes[gamma[v]] += g.nodeSize(v);

  out.coarse = Hypergraph::fromParts(numCoarse, g.edgeWeights(), std::move(coarseSrc), std::move(coarseDst),
                                     std::move(coarseIn), std::move(coarseOut), std::move(sizes));
  return out;
}

std::string checkPairingForest(const Hypergraph& g, const PairingForest& f, const Constraints& c) {
  std::ostringstream err;
  const std::size_t numNodes = f.size();
  if (f.score.size() != numNodes || f.match.size() != numNodes) return "size mismatch";
  for (NodeId v = 0; v < numNodes; ++v) {
    const NodeId p = f.pair[v];
    if (p == kNoNode) continue;
    if (p == v || p >= numNodes) {
      err << "node " << v << " has invalid pair " << p;
      return err.str();
    }
    if (f.pair[p] != kNoNode && f.score[p] < f.score[v]) {
      err << "score monotonicity broken on " << v << " -> " << p;
      return err.str();
    }
  }
  // Walk each path; with out-degree one it must end at a pairless node or a
  // two-cycle within numNodes steps.
  std::vector<char> state(numNodes, 0);  // 0 unseen, 1 on stack, 2 done
  std::vector<NodeId> path;
  for (NodeId start = 0; start < numNodes; ++start) {
    path.clear();
    NodeId v = start;
    while (v != kNoNode && state[v] == 0) {
      state[v] = 1;
      path.push_back(v);
      v = f.pair[v];
    }
    if (v != kNoNode && state[v] == 1) {
      const auto it = std::find(path.begin(), path.end(), v);
      const auto length = path.end() - it;
      if (length != 2) {
        err << "pairing cycle of length " << length << " through node " << v;
        return err.str();
      }
    }
    for (NodeId u : path) state[u] = 2;
  }
  for (NodeId v = 0; v < numNodes; ++v) {
    const NodeId m = f.match[v];
    if (m >= numNodes || f.match[m] != v) {
      err << "match is not an involution at node " << v;
      return err.str();
    }
    if (m == v) continue;
    if (f.pair[v] != m && f.pair[m] != v) {
      err << "matched nodes " << v << " and " << m << " are not a pair edge";
      return err.str();
    }
    if (!pairIsValid(g, v, m, c)) {
      err << "matched nodes " << v << " and " << m << " violate constraints";
      return err.str();
    }
  }
  return {};
}

}  // namespace dhgp
