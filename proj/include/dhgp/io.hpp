#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "dhgp/hypergraph.hpp"

namespace dhgp {

// .dhg text format:
//   <numEdges> <numNodes>
//   <weight> <kSrc> <kDst> <src ids ...> <dst ids ...>     (numEdges lines)
// Ids are 0-based. Throws ParseError naming the offending line.
Hypergraph parseDhg(std::istream& in);
Hypergraph readDhgFile(const std::filesystem::path& path);
void writeDhg(const Hypergraph& g, std::ostream& out);

// hMETIS .hgr (1-based pins, optional edge weights with fmt 1). The first pin
// of each edge becomes its source and the rest its destinations.
Hypergraph parseHgr(std::istream& in);

// One partition id per line, line i holding node i.
void writePartition(const Partitioning& p, std::ostream& out);
Partitioning parsePartition(std::istream& in);
Partitioning readPartitionFile(const std::filesystem::path& path);

// Shortest decimal text that round-trips the double.
std::string formatWeight(Weight w);

}  // namespace dhgp
