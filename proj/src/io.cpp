#include "dhgp/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string_view>
#include <vector>

namespace dhgp {
namespace {

class LineTokens {
 public:
  LineTokens(std::string_view line, std::size_t lineNo) : rest_(line), lineNo_(lineNo) {}

  bool done() {
    skipSpace();
    return rest_.empty();
  }

  std::string_view next(const char* what) {
    skipSpace();
    if (rest_.empty()) throw ParseError(lineNo_, std::string("missing ") + what);
    const auto end = rest_.find_first_of(" \t\r");
    auto tok = rest_.substr(0, end);
    rest_.remove_prefix(tok.size());
    return tok;
  }

  std::uint64_t unsignedValue(const char* what) {
    const auto tok = next(what);
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc{} || ptr != tok.data() + tok.size()) {
      throw ParseError(lineNo_, std::string("bad ") + what + " '" + std::string(tok) + "'");
    }
    return v;
  }

  double realValue(const char* what) {
    const auto tok = next(what);
    double v = 0;
    const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc{} || ptr != tok.data() + tok.size() || !std::isfinite(v)) {
      throw ParseError(lineNo_, std::string("bad ") + what + " '" + std::string(tok) + "'");
    }
    return v;
  }

  void expectEnd() {
    if (!done()) throw ParseError(lineNo_, "trailing tokens");
  }

 private:
  void skipSpace() {
    while (!rest_.empty() && (rest_.front() == ' ' || rest_.front() == '\t' || rest_.front() == '\r')) {
      rest_.remove_prefix(1);
    }
  }

  std::string_view rest_;
  std::size_t lineNo_;
};

// Reads the next line that is not blank (and, for hgr, not a % comment).
bool nextLine(std::istream& in, std::string& line, std::size_t& lineNo, bool skipComments) {
  while (std::getline(in, line)) {
    ++lineNo;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    if (skipComments && line[first] == '%') continue;
    return true;
  }
  return false;
}

// Sorts and checks for repeated ids within one pin list.
void sortPinSet(std::vector<NodeId>& pins, std::size_t begin, std::size_t lineNo, const char* role) {
  std::sort(pins.begin() + static_cast<std::ptrdiff_t>(begin), pins.end());
  if (std::adjacent_find(pins.begin() + static_cast<std::ptrdiff_t>(begin), pins.end()) != pins.end()) {
    throw ParseError(lineNo, std::string("duplicate ") + role + " id");
  }
}

}  // namespace

Hypergraph parseDhg(std::istream& in) {
  std::string line;
  std::size_t lineNo = 0;
  if (!nextLine(in, line, lineNo, false)) throw ParseError(1, "missing header");
  LineTokens header(line, lineNo);
  const auto numEdges = header.unsignedValue("edge count");
  const auto numNodes = header.unsignedValue("node count");
  header.expectEnd();
  if (numNodes >= kNoNode || numEdges >= kNoNode) throw ParseError(lineNo, "counts exceed 32-bit ids");

  std::vector<Weight> weights;
  weights.reserve(numEdges);
  std::vector<std::uint64_t> srcOff{0}, dstOff{0};
  std::vector<NodeId> src, dst;
  for (std::uint64_t e = 0; e < numEdges; ++e) {
    if (!nextLine(in, line, lineNo, false)) {
      throw ParseError(lineNo + 1, "expected " + std::to_string(numEdges) + " edge lines, got " +
                                       std::to_string(e));
    }
    LineTokens tok(line, lineNo);
    const double w = tok.realValue("weight");
    if (w < 0) throw ParseError(lineNo, "negative weight");
    const auto kSrc = tok.unsignedValue("source count");
    const auto kDst = tok.unsignedValue("destination count");
    if (kSrc + kDst == 0) throw ParseError(lineNo, "edge has no pins");
    auto readPins = [&](std::vector<NodeId>& into, std::uint64_t k, const char* role) {
      const std::size_t begin = into.size();
      for (std::uint64_t i = 0; i < k; ++i) {
        const auto id = tok.unsignedValue(role);
        if (id >= numNodes) {
          throw ParseError(lineNo, std::string(role) + " id " + std::to_string(id) + " out of range");
        }
        into.push_back(static_cast<NodeId>(id));
      }
      sortPinSet(into, begin, lineNo, role);
    };
    readPins(src, kSrc, "source");
    readPins(dst, kDst, "destination");
    tok.expectEnd();
    weights.push_back(w);
    srcOff.push_back(src.size());
    dstOff.push_back(dst.size());
  }
  if (nextLine(in, line, lineNo, false)) throw ParseError(lineNo, "unexpected content after last edge");

  return Hypergraph(numNodes, std::move(weights), CsrSets<NodeId>(std::move(srcOff), std::move(src)),
                    CsrSets<NodeId>(std::move(dstOff), std::move(dst)));
}

Hypergraph readDhgFile(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return parseDhg(in);
}

std::string formatWeight(Weight w) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), w);
  return std::string(buf, ptr);
}

void writeDhg(const Hypergraph& g, std::ostream& out) {
  out << g.numEdges() << ' ' << g.numNodes() << '\n';
  for (EdgeId e = 0; e < g.numEdges(); ++e) {
    out << formatWeight(g.weight(e)) << ' ' << g.src(e).size() << ' ' << g.dst(e).size();
    for (NodeId n : g.src(e)) out << ' ' << n;
    for (NodeId n : g.dst(e)) out << ' ' << n;
    out << '\n';
  }
}

Hypergraph parseHgr(std::istream& in) {
  std::string line;
  std::size_t lineNo = 0;
  if (!nextLine(in, line, lineNo, true)) throw ParseError(1, "missing header");
  LineTokens header(line, lineNo);
  const auto numEdges = header.unsignedValue("edge count");
  const auto numNodes = header.unsignedValue("node count");
  std::uint64_t fmt = 0;
  if (!header.done()) fmt = header.unsignedValue("format");
  header.expectEnd();
  if (fmt != 0 && fmt != 1) throw ParseError(lineNo, "node weights (fmt 10/11) are not supported");
  if (numNodes >= kNoNode || numEdges >= kNoNode) throw ParseError(lineNo, "counts exceed 32-bit ids");

  std::vector<Weight> weights;
  std::vector<std::uint64_t> srcOff{0}, dstOff{0};
  std::vector<NodeId> src, dst;
  std::vector<NodeId> pins;
  for (std::uint64_t e = 0; e < numEdges; ++e) {
    if (!nextLine(in, line, lineNo, true)) throw ParseError(lineNo + 1, "missing edge line");
    LineTokens tok(line, lineNo);
    weights.push_back(fmt == 1 ? tok.realValue("weight") : 1.0);
    if (weights.back() < 0) throw ParseError(lineNo, "negative weight");
    pins.clear();
    while (!tok.done()) {
      const auto id = tok.unsignedValue("pin");
      if (id == 0 || id > numNodes) throw ParseError(lineNo, "pin " + std::to_string(id) + " out of range");
      pins.push_back(static_cast<NodeId>(id - 1));
    }
    if (pins.empty()) throw ParseError(lineNo, "edge has no pins");
    src.push_back(pins.front());
    const std::size_t begin = dst.size();
    for (std::size_t i = 1; i < pins.size(); ++i) {
      if (pins[i] != pins.front()) dst.push_back(pins[i]);
    }
    std::sort(dst.begin() + static_cast<std::ptrdiff_t>(begin), dst.end());
    dst.erase(std::unique(dst.begin() + static_cast<std::ptrdiff_t>(begin), dst.end()), dst.end());
    srcOff.push_back(src.size());
    dstOff.push_back(dst.size());
  }
  return Hypergraph(numNodes, std::move(weights), CsrSets<NodeId>(std::move(srcOff), std::move(src)),
                    CsrSets<NodeId>(std::move(dstOff), std::move(dst)));
}

void writePartition(const Partitioning& p, std::ostream& out) {
  for (PartId q : p.assign) out << q << '\n';
}

Partitioning parsePartition(std::istream& in) {
  std::vector<PartId> assign;
  std::string line;
  std::size_t lineNo = 0;
  while (nextLine(in, line, lineNo, false)) {
    LineTokens tok(line, lineNo);
    const auto q = tok.unsignedValue("partition id");
    tok.expectEnd();
    if (q >= kNoNode) throw ParseError(lineNo, "partition id out of range");
    assign.push_back(static_cast<PartId>(q));
  }
  return makePartitioning(std::move(assign));
}

Partitioning readPartitionFile(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return parsePartition(in);
}

}  // namespace dhgp
