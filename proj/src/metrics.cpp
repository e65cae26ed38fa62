#include "dhgp/metrics.hpp"

namespace dhgp {

nlohmann::json evaluationJson(const Hypergraph& g, const Partitioning& p, const Constraints& c) {
  nlohmann::json violations = nlohmann::json::array();
  for (const Violation& v : checkValidity(g, p, c)) {
    violations.push_back({{"part", v.part}, {"kind", toString(v.kind)}, {"actual", v.actual}, {"limit", v.limit}});
  }
  return {{"connectivity", connectivity(g, p)},
          {"num_partitions", p.numParts},
          {"valid", isValid(g, p, c)},
          {"violations", std::move(violations)}};
}

nlohmann::json runStatsJson(const RunStats& stats, bool includeTimings) {
  nlohmann::json levels = nlohmann::json::array();
  for (std::size_t l = 0; l < stats.levels.size(); ++l) {
    const LevelStats& s = stats.levels[l];
    levels.push_back({{"level", l},
                      {"nodes", s.nodes},
                      {"edges", s.edges},
                      {"pins", s.pins},
                      {"matched_pairs", s.matchedPairs}});
  }
  nlohmann::json trace = nlohmann::json::array();
  for (std::size_t l = 0; l < stats.connectivityTrace.size(); ++l) {
    trace.push_back({{"level", l}, {"trace", stats.connectivityTrace[l]}});
  }
  nlohmann::json phases = nlohmann::json::object();
  if (includeTimings) {
    phases = {{"neighbors", stats.phases.neighborsMs},
              {"coarsen", stats.phases.coarsenMs},
              {"refine", stats.phases.refineMs},
              {"total", stats.phases.totalMs}};
  }
  return {{"levels", std::move(levels)},
          {"connectivity_trace", std::move(trace)},
          {"phase_ms", std::move(phases)},
          {"num_partitions", stats.numPartitions}};
}

}  // namespace dhgp
