#include "dhgp/refine.hpp"

#include <algorithm>
#include <numeric>
#include <tuple>

namespace dhgp {
namespace {

constexpr std::uint32_t kNoMove = std::numeric_limits<std::uint32_t>::max();

struct SizeEvent {
  PartId part;
  std::uint32_t idx;
  std::int64_t delta;
};

struct PinEvent {
  PartId part;
  EdgeId edge;
  std::uint32_t idx;
  std::int64_t delta;
};

struct CountEvent {
  PartId part;
  std::uint32_t idx;
  std::int64_t delta;
};

struct ViolationEvent {
  std::uint32_t idx;
  std::int64_t delta;
};

template <class Event>
std::vector<std::int64_t> deltasOf(const std::vector<Event>& events) {
  std::vector<std::int64_t> out(events.size());
  for (std::size_t i = 0; i < events.size(); ++i) out[i] = events[i].delta;
  return out;
}

// Keeps events[i] where keep[i] != 0, preserving order (flag, scan, scatter).
template <class Event>
std::vector<Event> compact(Exec exec, const std::vector<Event>& events, const std::vector<std::uint64_t>& keep) {
  std::vector<std::uint64_t> slot(keep);
  const auto total = par::exclusiveScan(exec, std::span<std::uint64_t>(slot));
  std::vector<Event> out(total);
  par::forEachIndex(exec, events.size(), [&](std::size_t i) {
    if (keep[i]) out[slot[i]] = events[i];
  });
  return out;
}

// Walks one constraint track: per-partition cumulative deltas (sorted by
// (part, idx), one entry per (part, idx)) against a limit, emitting +1 on
// valid -> invalid and -1 on invalid -> valid.
template <class Event>
std::vector<ViolationEvent> trackViolations(Exec exec, const std::vector<Event>& events,
                                            const std::vector<std::int64_t>& cumulative,
                                            std::span<const std::uint64_t> base, std::uint64_t limit) {
  std::vector<ViolationEvent> emitted(events.size());
  std::vector<std::uint64_t> keep(events.size(), 0);
  par::forEachIndex(exec, events.size(), [&](std::size_t i) {
    const PartId p = events[i].part;
    const auto baseValue = static_cast<std::int64_t>(base[p]);
    const bool headOfPart = i == 0 || events[i - 1].part != p;
    const std::int64_t before = baseValue + (headOfPart ? 0 : cumulative[i - 1]);
    const std::int64_t after = baseValue + cumulative[i];
    const bool validBefore = before <= static_cast<std::int64_t>(limit);
    const bool validAfter = after <= static_cast<std::int64_t>(limit);
    if (validBefore != validAfter) {
      emitted[i] = {events[i].idx, validAfter ? -1 : +1};
      keep[i] = 1;
    }
  });
  return compact(exec, emitted, keep);
}

}  // namespace

std::vector<std::uint64_t> PinsMatrix::distinctInbound() const {
  std::vector<std::uint64_t> out(numParts_, 0);
  for (const PinEntry& entry : rows_.data()) {
    if (entry.pinsIn > 0) ++out[entry.part];
  }
  return out;
}

PinsMatrix computePins(const Hypergraph& g, std::span<const PartId> assign, std::size_t numParts, Exec exec) {
  auto rows = CsrSets<PinEntry>::build(exec, g.numEdges(), [&](std::size_t s, std::vector<PinEntry>& out) {
    const auto e = static_cast<EdgeId>(s);
    g.forEachPin(e, [&](NodeId n) { out.push_back({assign[n], 1, 0}); });
    std::sort(out.begin(), out.end(), [](const PinEntry& a, const PinEntry& b) { return a.part < b.part; });
    std::size_t w = 0;
    for (std::size_t r = 0; r < out.size(); ++r) {
      if (w > 0 && out[w - 1].part == out[r].part) {
        ++out[w - 1].pins;
      } else {
        out[w++] = out[r];
      }
    }
    out.resize(w);
    // pinsIn = pins minus the outbound-only pins.
    for (auto& entry : out) entry.pinsIn = entry.pins;
    const auto dst = g.dst(e);
    for (NodeId n : g.src(e)) {
      if (std::binary_search(dst.begin(), dst.end(), n)) continue;
      auto it = std::lower_bound(out.begin(), out.end(), assign[n],
                                 [](const PinEntry& x, PartId q) { return x.part < q; });
      --it->pinsIn;
    }
  });
  return PinsMatrix(std::move(rows), numParts);
}

std::vector<std::uint64_t> partitionSizes(const Hypergraph& g, std::span<const PartId> assign,
                                          std::size_t numParts) {
  std::vector<std::uint64_t> sizes(numParts, 0);
  for (NodeId n = 0; n < g.numNodes(); ++n) sizes[assign[n]] += g.nodeSize(n);
  return sizes;
}

std::vector<Move> proposeMoves(const Hypergraph& g, std::span<const PartId> assign, const PinsMatrix& pins,
                               std::span<const std::uint64_t> partSizes, const Constraints& c, Exec exec) {
  const std::size_t numNodes = g.numNodes();
  std::vector<Move> proposal(numNodes);
  std::vector<std::uint64_t> keep(numNodes, 0);

  par::forEachIndex(exec, numNodes, [&](std::size_t s) {
    const auto n = static_cast<NodeId>(s);
    const PartId from = assign[n];
    std::vector<EdgeId> incident;
    g.forEachIncident(n, [&](EdgeId e) { incident.push_back(e); });

    Weight saving = 0;
    std::vector<PartId> targets;
    for (EdgeId e : incident) {
      if (pins.pins(from, e) == 1) saving += g.weight(e);
      for (const PinEntry& entry : pins.row(e)) targets.push_back(entry.part);
    }
    // Partitions sharing no edge with n cost every incident edge, so their
    // gain is never positive; only adjacent ones are candidates.
    std::sort(targets.begin(), targets.end());
    targets.erase(std::unique(targets.begin(), targets.end()), targets.end());

    Weight bestGain = 0;
    PartId bestPart = from;
    for (PartId to : targets) {
      if (to == from || partSizes[to] + g.nodeSize(n) > c.maxSize) continue;
      Weight loss = 0;
      for (EdgeId e : incident) {
        if (pins.pins(to, e) == 0) loss += g.weight(e);
      }
      const Weight gain = saving - loss;
      if (gain > bestGain) {
        bestGain = gain;
        bestPart = to;
      }
    }
    if (bestPart != from) {
      proposal[n] = {n, from, bestPart, bestGain, bestGain, 0};
      keep[n] = 1;
    }
  });
  return compact(exec, proposal, keep);
}

void sortMoves(std::vector<Move>& moves, Exec exec) {
  par::sort(exec, moves, [](const Move& a, const Move& b) {
    if (a.gainIso != b.gainIso) return a.gainIso > b.gainIso;
    return a.node < b.node;
  });
  for (std::size_t i = 0; i < moves.size(); ++i) moves[i].seqIndex = static_cast<std::uint32_t>(i);
}

void inSequenceGains(const Hypergraph& g, std::vector<Move>& moves, const PinsMatrix& pins, Exec exec) {
  std::vector<std::uint32_t> moveOf(g.numNodes(), kNoMove);
  for (std::size_t i = 0; i < moves.size(); ++i) moveOf[moves[i].node] = static_cast<std::uint32_t>(i);

  par::forEachIndex(exec, moves.size(), [&](std::size_t i) {
    Move& mv = moves[i];
    const PartId ps = mv.from, pd = mv.to;
    Weight gain = mv.gainIso;
    g.forEachIncident(mv.node, [&](EdgeId e) {
      // Earlier movers of e leaving / entering the source and target of mv.
      std::int64_t leaveSrc = 0, enterSrc = 0, leaveDst = 0, enterDst = 0;
      g.forEachPin(e, [&](NodeId m) {
        const auto j = moveOf[m];
        if (m == mv.node || j == kNoMove || j >= i) return;
        const Move& prior = moves[j];
        leaveSrc += prior.from == ps;
        enterSrc += prior.to == ps;
        leaveDst += prior.from == pd;
        enterDst += prior.to == pd;
      });
      const auto pinsSrc = static_cast<std::int64_t>(pins.pins(ps, e));
      const auto pinsDst = static_cast<std::int64_t>(pins.pins(pd, e));
      // Target emptied by earlier moves: entering it now cuts e again.
      if (pinsDst > 0 && leaveDst - enterDst == pinsDst) gain -= g.weight(e);
      // Target reached by earlier moves: entering it is free.
      else if (enterDst > 0 && pinsDst == 0) gain += g.weight(e);
      // Earlier arrivals at a source mv.node held alone: the saving disappears.
      if (enterSrc > 0 && pinsSrc == 1) gain -= g.weight(e);
      // Earlier departures left mv.node alone in its source: leaving saves e.
      else if (pinsSrc > 1 && leaveSrc - enterSrc == pinsSrc - 1) gain += g.weight(e);
    });
    mv.gainSeq = gain;
  });
}

PrefixSelection buildEventsAndSelect(const Hypergraph& g, std::span<const Move> moves, const PinsMatrix& pins,
                                     std::span<const std::uint64_t> partSizes,
                                     std::span<const std::uint64_t> partInbound, const Constraints& c,
                                     Exec exec) {
  const std::size_t m = moves.size();

  // Size events: (p, idx, ±nodeSize) sorted by (p, idx), scanned per p.
  std::vector<SizeEvent> sizeEvents(2 * m);
  par::forEachIndex(exec, m, [&](std::size_t i) {
    const auto idx = static_cast<std::uint32_t>(i);
    const auto w = static_cast<std::int64_t>(g.nodeSize(moves[i].node));
    sizeEvents[2 * i] = {moves[i].from, idx, -w};
    sizeEvents[2 * i + 1] = {moves[i].to, idx, +w};
  });
  par::sort(exec, sizeEvents, [](const SizeEvent& a, const SizeEvent& b) {
    return std::tie(a.part, a.idx) < std::tie(b.part, b.idx);
  });
  auto sizeCumulative = deltasOf(sizeEvents);
  par::segmentedInclusiveScan(exec, std::span<std::int64_t>(sizeCumulative), [&](std::size_t a, std::size_t b) {
    return sizeEvents[a].part == sizeEvents[b].part;
  });

  // Pin events: (p, e, idx, ±1) per inbound edge of every mover.
  std::vector<std::uint64_t> pinOffset(m + 1, 0);
  for (std::size_t i = 0; i < m; ++i) pinOffset[i] = 2 * g.in(moves[i].node).size();
  pinOffset[m] = par::exclusiveScan(exec, std::span<std::uint64_t>(pinOffset.data(), m));
  std::vector<PinEvent> pinEvents(pinOffset[m]);
  par::forEachIndex(exec, m, [&](std::size_t i) {
    const auto idx = static_cast<std::uint32_t>(i);
    auto slot = pinOffset[i];
    for (EdgeId e : g.in(moves[i].node)) {
      pinEvents[slot++] = {moves[i].from, e, idx, -1};
      pinEvents[slot++] = {moves[i].to, e, idx, +1};
    }
  });
  par::sort(exec, pinEvents, [](const PinEvent& a, const PinEvent& b) {
    return std::tie(a.part, a.edge, a.idx) < std::tie(b.part, b.edge, b.idx);
  });
  auto pinRunning = deltasOf(pinEvents);
  par::segmentedInclusiveScan(exec, std::span<std::int64_t>(pinRunning), [&](std::size_t a, std::size_t b) {
    return pinEvents[a].part == pinEvents[b].part && pinEvents[a].edge == pinEvents[b].edge;
  });

  // 1 -> 0 and 0 -> 1 transitions of pinsIn(p, e) become distinct events.
  std::vector<CountEvent> distinctEvents(pinEvents.size());
  std::vector<std::uint64_t> keep(pinEvents.size(), 0);
  par::forEachIndex(exec, pinEvents.size(), [&](std::size_t i) {
    const PinEvent& ev = pinEvents[i];
    const std::int64_t now = static_cast<std::int64_t>(pins.pinsIn(ev.part, ev.edge)) + pinRunning[i];
    const std::int64_t before = now - ev.delta;
    if (before == 1 && now == 0) {
      distinctEvents[i] = {ev.part, ev.idx, -1};
      keep[i] = 1;
    } else if (before == 0 && now == 1) {
      distinctEvents[i] = {ev.part, ev.idx, +1};
      keep[i] = 1;
    }
  });
  distinctEvents = compact(exec, distinctEvents, keep);
  par::sort(exec, distinctEvents, [](const CountEvent& a, const CountEvent& b) {
    return std::tie(a.part, a.idx, a.delta) < std::tie(b.part, b.idx, b.delta);
  });
  auto distinctCumulative = deltasOf(distinctEvents);
  par::segmentedInclusiveScan(exec, std::span<std::int64_t>(distinctCumulative),
                              [&](std::size_t a, std::size_t b) {
                                return distinctEvents[a].part == distinctEvents[b].part;
                              });
  // Reduce to the last event of every (p, idx).
  keep.assign(distinctEvents.size(), 0);
  par::forEachIndex(exec, distinctEvents.size(), [&](std::size_t i) {
    const bool last = i + 1 == distinctEvents.size() || distinctEvents[i + 1].part != distinctEvents[i].part ||
                      distinctEvents[i + 1].idx != distinctEvents[i].idx;
    keep[i] = last ? 1 : 0;
  });
  const auto reducedEvents = compact(exec, distinctEvents, keep);
  const auto reducedCumulative = compact(exec, distinctCumulative, keep);

  // Validity flips per (partition, constraint) track.
  auto violations = trackViolations(exec, sizeEvents, sizeCumulative, partSizes, c.maxSize);
  auto inboundViolations = trackViolations(exec, reducedEvents, reducedCumulative, partInbound, c.maxInbound);
  violations.insert(violations.end(), inboundViolations.begin(), inboundViolations.end());
  par::sort(exec, violations, [](const ViolationEvent& a, const ViolationEvent& b) {
    return std::tie(a.idx, a.delta) < std::tie(b.idx, b.delta);
  });

  std::int64_t initial = 0;
  for (std::size_t p = 0; p < partSizes.size(); ++p) {
    initial += partSizes[p] > c.maxSize;
    initial += partInbound[p] > c.maxInbound;
  }
  // Reduce by idx, then prefix-sum: activeViolations[j] holds the count after
  // moves [0, j).
  PrefixSelection sel;
  sel.activeViolations.assign(m + 1, 0);
  for (const ViolationEvent& ev : violations) sel.activeViolations[ev.idx + 1] += ev.delta;
  sel.activeViolations[0] = initial;
  for (std::size_t j = 1; j <= m; ++j) sel.activeViolations[j] += sel.activeViolations[j - 1];

  sel.cumulativeGain.assign(m + 1, 0.0);
  for (std::size_t j = 1; j <= m; ++j) sel.cumulativeGain[j] = sel.cumulativeGain[j - 1] + moves[j - 1].gainSeq;

  // Filtered max: the empty prefix is always eligible.
  sel.applyCount = 0;
  sel.totalGain = 0.0;
  for (std::size_t j = 1; j <= m; ++j) {
    if (sel.activeViolations[j] == 0 && sel.cumulativeGain[j] > sel.totalGain) {
      sel.applyCount = j;
      sel.totalGain = sel.cumulativeGain[j];
    }
  }
  return sel;
}

Partitioning applyMoves(const Partitioning& p, std::span<const Move> moves, std::size_t count) {
  Partitioning out = p;
  for (std::size_t i = 0; i < count; ++i) out.assign[moves[i].node] = moves[i].to;
  return out;
}

Partitioning project(const Partitioning& coarse, const ClusterMap& clusters) {
  Partitioning fine;
  fine.numParts = coarse.numParts;
  fine.assign.resize(clusters.gamma.size());
  for (std::size_t n = 0; n < clusters.gamma.size(); ++n) fine.assign[n] = coarse.assign[clusters.gamma[n]];
  return fine;
}

RefineRound refineOnce(const Hypergraph& g, Partitioning& p, const Constraints& c, Exec exec) {
  RefineRound round;
  const auto pins = computePins(g, p.assign, p.numParts, exec);
  const auto sizes = partitionSizes(g, p.assign, p.numParts);
  const auto inbound = pins.distinctInbound();
  round.moves = proposeMoves(g, p.assign, pins, sizes, c, exec);
  sortMoves(round.moves, exec);
  inSequenceGains(g, round.moves, pins, exec);
  round.selection = buildEventsAndSelect(g, round.moves, pins, sizes, inbound, c, exec);
  p = applyMoves(p, round.moves, round.selection.applyCount);
  return round;
}

}  // namespace dhgp
