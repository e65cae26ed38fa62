#include "dhgp/generator.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <stdexcept>
#include <vector>

namespace dhgp {
namespace {

// std distributions are implementation-defined; these helpers are not.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  std::uint64_t below(std::uint64_t bound) { return engine_() % bound; }
  double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace

Hypergraph generateHypergraph(const GeneratorOptions& opts) {
  if (opts.maxPins == 0) throw std::invalid_argument("max pins must be positive");
  if (opts.edges > 0 && opts.nodes == 0) throw std::invalid_argument("edges need nodes");
  Rng rng(opts.seed);
  const std::size_t n = opts.nodes;

  // position[v] is v's slot in the hidden order; communities are slot blocks.
  std::vector<NodeId> atSlot(n);
  std::iota(atSlot.begin(), atSlot.end(), NodeId{0});
  for (std::size_t i = n; i > 1; --i) std::swap(atSlot[i - 1], atSlot[rng.below(i)]);
  std::vector<std::size_t> position(n);
  for (std::size_t i = 0; i < n; ++i) position[atSlot[i]] = i;
  const std::size_t block = std::max<std::size_t>(1, opts.communitySize);

  auto nearby = [&](NodeId v) {
    const std::size_t lo = position[v] / block * block;
    const std::size_t hi = std::min(lo + block, n);
    return atSlot[lo + rng.below(hi - lo)];
  };

  std::vector<Weight> weights;
  std::vector<std::uint64_t> srcOff{0}, dstOff{0};
  std::vector<NodeId> src, dst;
  std::vector<NodeId> pins;
  const std::size_t minPins = std::min<std::size_t>(2, opts.maxPins);
  for (std::size_t e = 0; e < opts.edges; ++e) {
    const auto source = static_cast<NodeId>(rng.below(n));
    const std::size_t k = minPins + rng.below(opts.maxPins - minPins + 1);
    weights.push_back(static_cast<Weight>(1 + rng.below(4)));

    pins.assign(1, source);
    if (k >= 3 && rng.unit() < 0.1) pins.push_back(nearby(source));
    std::sort(pins.begin(), pins.end());
    pins.erase(std::unique(pins.begin(), pins.end()), pins.end());
    const std::size_t srcBegin = src.size();
    src.insert(src.end(), pins.begin(), pins.end());

    pins.clear();
    for (std::size_t i = src.size() - srcBegin; i < k; ++i) {
      const NodeId d = rng.unit() < opts.locality ? nearby(source) : static_cast<NodeId>(rng.below(n));
      // Rarely a source is also a destination of its own edge.
      if (d == source && rng.unit() >= 0.05) continue;
      pins.push_back(d);
    }
    std::sort(pins.begin(), pins.end());
    pins.erase(std::unique(pins.begin(), pins.end()), pins.end());
    dst.insert(dst.end(), pins.begin(), pins.end());

    srcOff.push_back(src.size());
    dstOff.push_back(dst.size());
  }
  return Hypergraph(n, std::move(weights), CsrSets<NodeId>(std::move(srcOff), std::move(src)),
                    CsrSets<NodeId>(std::move(dstOff), std::move(dst)));
}

}  // namespace dhgp
