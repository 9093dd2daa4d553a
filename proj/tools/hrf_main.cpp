// hrf: batch front end.
//
//   hrf run <config.yaml> [--override key=value]...
//   hrf collar --ell 0.5,1.0
//   hrf check <snapshot.hrfs>
//
// Exit codes: 0 ok, 1 invariant violated (check), 2 usage/config error,
// 3 numerical abort.

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>

#include "hrf/collar.hpp"
#include "hrf/config.hpp"
#include "hrf/monitor.hpp"
#include "hrf/scenario.hpp"
#include "hrf/snapshot.hpp"

namespace {

constexpr int exit_ok = 0;
constexpr int exit_invalid = 1;
constexpr int exit_config = 2;
constexpr int exit_abort = 3;

int cmd_run(const std::string& path, const std::vector<std::string>& overrides) {
  hrf::ScenarioConfig cfg;
  try {
    cfg = hrf::load_config(path, overrides);
  } catch (const hrf::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return exit_config;
  }
  std::ofstream csv(cfg.csv_path, std::ios::binary);
  if (!csv) {
    std::cerr << "cannot open '" << cfg.csv_path << "' for writing\n";
    return exit_config;
  }
  try {
    const auto outcome = hrf::run_scenario(cfg, csv);
    std::cerr << "done: " << outcome.summary.steps << " steps, " << outcome.rows.size() << " samples, t = "
              << outcome.summary.final_state.t << '\n';
  } catch (const hrf::FlowAbort& e) {
    std::cerr << "numerical abort: " << e.what() << "\nlast valid state at t = " << e.last_valid().t
              << " written to " << cfg.snapshot_dir << "/abort.hrfs\n";
    return exit_abort;
  } catch (const hrf::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return exit_config;
  }
  return exit_ok;
}

int cmd_collar(const std::vector<double>& ells) {
  std::printf("%-12s %-22s %-22s %-22s %-10s\n", "ell", "Y", "8piY", "quadrature", "rel_diff");
  for (double ell : ells) {
    try {
      const double y = hrf::collar::halfwidth(ell);
      const double closed = hrf::collar::dz2_l1_norm(ell);
      const double quad = hrf::collar::dz2_l1_norm_quadrature(ell);
      std::printf("%-12.6g %-22.16g %-22.16g %-22.16g %-10.3e\n", ell, y, closed, quad,
                  std::abs(quad - closed) / closed);
    } catch (const hrf::collar::OutOfRange& e) {
      std::cerr << "collar error: " << e.what() << '\n';
      return exit_config;
    }
  }
  return exit_ok;
}

int cmd_check(const std::string& path) {
  hrf::FlowState state;
  try {
    state = hrf::read_snapshot(path);
  } catch (const hrf::SnapshotError& e) {
    std::cerr << "snapshot error: " << e.what() << '\n';
    return exit_config;
  }
  const auto row = hrf::sample(state, std::nullopt);
  std::cout << hrf::csv_header() << '\n' << hrf::csv_row(row) << '\n';
  const auto violations = hrf::check_invariants(state);
  for (const auto& v : violations) std::cerr << "violated: " << v << '\n';
  if (!violations.empty()) return exit_invalid;
  std::cerr << "all invariants hold\n";
  return exit_ok;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Harmonic Ricci Flow on the flat torus"};
  app.require_subcommand(1);

  std::string config_path;
  std::vector<std::string> overrides;
  auto* run = app.add_subcommand("run", "run a scenario config");
  run->add_option("config", config_path, "YAML scenario")->required();
  run->add_option("--override", overrides, "dotted.key=value, repeatable");

  std::vector<double> ells;
  auto* collar = app.add_subcommand("collar", "collar half-width table");
  collar->add_option("--ell", ells, "comma-separated lengths")->required()->delimiter(',');

  std::string snapshot_path;
  auto* check = app.add_subcommand("check", "invariant suite on a snapshot");
  check->add_option("snapshot", snapshot_path, "snapshot file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? exit_ok : exit_config;
  }

  try {
    if (*run) return cmd_run(config_path, overrides);
    if (*collar) return cmd_collar(ells);
    if (*check) return cmd_check(snapshot_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_config;
  }
  return exit_config;
}
