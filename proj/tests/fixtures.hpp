#pragma once

#include <algorithm>
#include <numeric>
#include <sstream>
#include <string>

#include "dhgp/generator.hpp"
#include "dhgp/hypergraph.hpp"
#include "dhgp/io.hpp"

namespace dhgp::testing {

inline Hypergraph fromText(const std::string& text) {
  std::istringstream in(text);
  return parseDhg(in);
}

// e0: src{0} dst{1,2} w1; e1: src{1} dst{2} w2; e2: src{3} dst{0} w1.
inline Hypergraph h1() { return fromText("3 4\n1 1 2 0 1 2\n2 1 1 1 2\n1 1 1 3 0\n"); }

inline std::size_t maxInDegree(const Hypergraph& g) {
  std::size_t best = 0;
  for (NodeId n = 0; n < g.numNodes(); ++n) best = std::max(best, g.in(n).size());
  return best;
}

struct Instance {
  Hypergraph graph;
  Constraints constraints;
};

// Generator options plus the draws that fix the constraints once the graph
// exists. Δ is drawn between the largest single in-set and a multiple of Ω
// times the mean in-degree, so the inbound limit binds on a good share of
// instances.
struct InstanceSpec {
  GeneratorOptions opts;
  std::uint64_t maxSize = 1;
  double inboundFactor = 1.0;
};

inline InstanceSpec randomSpec(std::uint64_t seed, std::size_t minNodes, std::size_t maxNodes,
                               std::uint64_t minSize = 4, std::uint64_t maxSize = 64) {
  std::uint64_t state = seed * 0x9E3779B97F4A7C15ull + 0x632BE59BD9B4E019ull;
  auto draw = [&](std::uint64_t bound) {
    state ^= state >> 33;
    state *= 0xFF51AFD7ED558CCDull;
    state ^= state >> 33;
    return bound == 0 ? 0 : state % bound;
  };
  InstanceSpec spec;
  spec.opts.nodes = minNodes + draw(maxNodes - minNodes + 1);
  spec.opts.edges = spec.opts.nodes + draw(spec.opts.nodes + 1);
  spec.opts.maxPins = 2 + draw(6);
  spec.opts.seed = seed;
  spec.opts.locality = 0.6 + 0.05 * static_cast<double>(draw(7));
  spec.maxSize = minSize + draw(maxSize - minSize + 1);
  spec.inboundFactor = 0.3 + 0.1 * static_cast<double>(draw(8));
  return spec;
}

inline Constraints constraintsFor(const Hypergraph& g, const InstanceSpec& spec) {
  Constraints c;
  c.maxSize = spec.maxSize;
  const double meanIn = static_cast<double>(g.nodeIn().totalSize()) /
                        static_cast<double>(std::max<std::size_t>(1, g.numNodes()));
  const auto scaled = static_cast<std::uint64_t>(spec.inboundFactor * meanIn * static_cast<double>(c.maxSize));
  c.maxInbound = std::max<std::uint64_t>({maxInDegree(g), scaled, 1});
  return c;
}

inline Instance randomInstance(std::uint64_t seed, std::size_t minNodes, std::size_t maxNodes,
                               std::uint64_t minSize = 4, std::uint64_t maxSize = 64) {
  const auto spec = randomSpec(seed, minNodes, maxNodes, minSize, maxSize);
  Instance inst{generateHypergraph(spec.opts), {}};
  inst.constraints = constraintsFor(inst.graph, spec);
  return inst;
}

}  // namespace dhgp::testing
