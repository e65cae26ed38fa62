#pragma once

#include <cstdint>

#include "dhgp/hypergraph.hpp"

namespace dhgp {

struct GeneratorOptions {
  std::size_t nodes = 100;
  std::size_t edges = 100;
  std::size_t maxPins = 4;       // pins per edge drawn from [min(2, maxPins), maxPins]
  std::uint64_t seed = 0;
  double locality = 0.85;        // chance a destination comes from the source's community
  std::size_t communitySize = 12;
};

// Seeded random directed hypergraph with planted communities hidden behind a
// random id permutation. Each edge has one source (two with small
// probability) and integer weights in [1, 4]. Depends only on the options
// and the mt19937_64 sequence, so output is reproducible across platforms.
Hypergraph generateHypergraph(const GeneratorOptions& opts);

}  // namespace dhgp
