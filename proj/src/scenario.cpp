#include "hrf/scenario.hpp"

#include <cmath>
#include <filesystem>
#include <sstream>

#include "hrf/snapshot.hpp"

namespace hrf {

ScenarioOutcome run_scenario(const ScenarioConfig& config, std::ostream& csv, bool write_snapshots) {
  const FlowState initial = build_initial(config);
  ScenarioOutcome out;
  out.bochner = bochner_bound(initial, initial.alpha.lower(), initial.alpha.upper(), initial.phi.target());

  namespace fs = std::filesystem;
  const fs::path dir(config.snapshot_dir);
  if (write_snapshots) fs::create_directories(dir);
  auto save = [&](const FlowState& s, const std::string& name) {
    const std::string path = (dir / name).string();
    write_snapshot(path, s);
    out.snapshots.push_back(path);
  };

  csv << csv_header() << '\n';
  RunObserver observer;
  observer.on_sample = [&](const FlowState& s) {
    out.rows.push_back(sample(s, out.bochner));
    csv << csv_row(out.rows.back()) << '\n';
  };
  if (write_snapshots) {
    observer.on_snapshot = [&](const FlowState& s) {
      save(s, "snapshot_" + std::to_string(out.snapshots.size()) + ".hrfs");
    };
  }

  try {
    out.summary = run(initial, run_options(config), observer);
  } catch (const FlowAbort& e) {
    if (write_snapshots) save(e.last_valid(), "abort.hrfs");
    csv.flush();
    throw;
  }
  if (write_snapshots) save(out.summary.final_state, "final.hrfs");
  csv.flush();
  return out;
}

std::vector<std::string> check_invariants(const FlowState& state) {
  std::vector<std::string> out = state.invariant_violations();
  auto fmt = [](const char* what, double value) {
    std::ostringstream os;
    os.precision(3);
    os << what << " = " << std::scientific << value;
    return os.str();
  };
  const double mean_u = jensen_check(state.u, state.g0);
  if (!(mean_u <= 1e-8)) out.push_back(fmt("mean_g0(u)", mean_u));
  const double total_k = curvature_stats(state.u, state.g0).total;
  if (!(std::abs(total_k) < 1e-8)) out.push_back(fmt("|int K_g dmu_g|", std::abs(total_k)));
  return out;
}

}  // namespace hrf
