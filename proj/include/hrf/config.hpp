#pragma once

// Scenario configuration (YAML) and construction of initial data.
//
// Every key is optional; see README.md for the schema and defaults.

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "hrf/flow.hpp"

namespace hrf {

/// Invalid scenario: unknown key, bad value or violated invariant. The
/// message starts with the dotted key path.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& key, const std::string& message)
      : std::runtime_error(key + ": " + message), key_(key) {}
  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

struct FieldPreset {
  FieldPreset() = default;
  explicit FieldPreset(std::string name, double amp = 0.0, std::uint64_t s = 0)
      : preset(std::move(name)), amplitude(amp), seed(s) {}

  std::string preset;            ///< u: zero | constant | sine | random_smooth;
                                 ///< phi: constant | equator_wrap | random_smooth
  double amplitude = 0.0;
  std::uint64_t seed = 0;
  int modes = 3;                 ///< max |k_i| of random_smooth
  std::array<int, 2> wave{1, 0}; ///< sine mode / equator_wrap winding
  std::vector<double> point;     ///< phi constant value (empty: default point)
};

struct ScenarioConfig {
  int n = 64;
  Target target = Target::sphere(2, 1.0);
  AlphaSchedule alpha = AlphaSchedule::constant(1.0);
  FieldPreset u{"zero"};
  FieldPreset phi{"constant"};
  Sym2 g0{1.0, 0.0, 1.0};
  double t_end = 1.0;
  double sample_dt = 0.01;
  double cfl = 0.4;
  std::optional<double> dt;
  std::vector<double> snapshot_times;
  std::string csv_path = "series.csv";
  std::string snapshot_dir = ".";
};

/// Parses YAML text. `overrides` are "dotted.key=value" strings applied on top
/// of the document before validation.
ScenarioConfig parse_config(const std::string& text, const std::vector<std::string>& overrides = {});
ScenarioConfig load_config(const std::string& path, const std::vector<std::string>& overrides = {});

/// Smooth periodic field sum_k (a_k cos + b_k sin)(2 pi k.x) / (1 + |k|^2)
/// over 0 < max|k_i| <= modes, scaled to max-abs `amplitude`. Deterministic in
/// the seed on every platform.
ScalarField random_smooth_field(const GridPtr& grid, double amplitude, std::uint64_t seed, int modes = 3);

/// Initial state: g0 renormalized to det 1, u shifted to unit volume, phi on
/// the target.
FlowState build_initial(const ScenarioConfig& config);

/// Run options implied by the scenario.
RunOptions run_options(const ScenarioConfig& config);

}  // namespace hrf
