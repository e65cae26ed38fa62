#pragma once

#include <json.hpp>

#include "dhgp/driver.hpp"
#include "dhgp/hypergraph.hpp"

namespace dhgp {

// {"connectivity", "num_partitions", "valid", "violations": [...]}
nlohmann::json evaluationJson(const Hypergraph& g, const Partitioning& p, const Constraints& c);

// {"levels", "connectivity_trace", "phase_ms", "num_partitions"}. Wall times
// are filled only when includeTimings is set; otherwise phase_ms is empty so
// that repeated runs produce identical documents.
nlohmann::json runStatsJson(const RunStats& stats, bool includeTimings);

}  // namespace dhgp
