#pragma once

// End-to-end run of a scenario: CSV series, snapshots, invariant checks.

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "hrf/config.hpp"
#include "hrf/flow.hpp"
#include "hrf/monitor.hpp"

namespace hrf {

struct ScenarioOutcome {
  RunSummary summary;
  std::vector<MonitorRow> rows;
  std::optional<double> bochner;
  std::vector<std::string> snapshots;  ///< paths written, in order
};

/// Runs the scenario, streaming the CSV (header + one row per sample) to
/// `csv`. Snapshots go to config.snapshot_dir when `write_snapshots` is set:
/// snapshot_<k>.hrfs at each requested time and final.hrfs at the end. On
/// FlowAbort, abort.hrfs is written (if enabled) and the exception rethrown.
ScenarioOutcome run_scenario(const ScenarioConfig& config, std::ostream& csv, bool write_snapshots = true);

/// Invariant suite for a single state: FlowState invariants plus the Jensen
/// and Gauss-Bonnet side checks. Empty when all hold.
std::vector<std::string> check_invariants(const FlowState& state);

}  // namespace hrf
