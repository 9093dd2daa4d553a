#include "hrf/config.hpp"

#include <yaml-cpp/yaml.h>

#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <set>
#include <sstream>

#include "hrf/geometry.hpp"

namespace hrf {

namespace {

using Keys = std::set<std::string>;

std::string join(const std::string& prefix, const std::string& key) {
  return prefix.empty() ? key : prefix + "." + key;
}

void require_map(const YAML::Node& node, const std::string& path) {
  if (!node.IsMap()) throw ConfigError(path.empty() ? "<root>" : path, "expected a mapping");
}

void reject_unknown(const YAML::Node& node, const std::string& path, const Keys& allowed) {
  for (const auto& kv : node) {
    const auto key = kv.first.as<std::string>();
    if (!allowed.contains(key)) throw ConfigError(join(path, key), "unknown key");
  }
}

template <class T>
T scalar(const YAML::Node& node, const std::string& path) {
  try {
    return node.as<T>();
  } catch (const YAML::Exception&) {
    throw ConfigError(path, "invalid value '" + YAML::Dump(node) + "'");
  }
}

double finite(const YAML::Node& node, const std::string& path) {
  const auto v = scalar<double>(node, path);
  if (!std::isfinite(v)) throw ConfigError(path, "must be finite");
  return v;
}

double positive(const YAML::Node& node, const std::string& path) {
  const double v = finite(node, path);
  if (!(v > 0.0)) throw ConfigError(path, "must be positive");
  return v;
}

std::vector<double> number_list(const YAML::Node& node, const std::string& path) {
  if (!node.IsSequence()) throw ConfigError(path, "expected a list of numbers");
  std::vector<double> out;
  for (std::size_t k = 0; k < node.size(); ++k) out.push_back(finite(node[k], path + "[" + std::to_string(k) + "]"));
  return out;
}

void set_path(YAML::Node node, const std::vector<std::string>& keys, std::size_t idx, const YAML::Node& value) {
  if (idx + 1 == keys.size()) {
    node[keys[idx]] = value;
    return;
  }
  YAML::Node child = node[keys[idx]];
  if (!child.IsDefined() || child.IsNull()) {
    node[keys[idx]] = YAML::Node(YAML::NodeType::Map);
    child = node[keys[idx]];
  }
  set_path(child, keys, idx + 1, value);
}

void apply_override(YAML::Node& root, const std::string& spec) {
  const auto eq = spec.find('=');
  if (eq == std::string::npos || eq == 0) throw ConfigError(spec, "override must look like key=value");
  const std::string key = spec.substr(0, eq);
  std::vector<std::string> keys;
  std::stringstream ss(key);
  for (std::string part; std::getline(ss, part, '.');) {
    if (part.empty()) throw ConfigError(key, "empty component in override key");
    keys.push_back(part);
  }
  YAML::Node value;
  try {
    value = YAML::Load(spec.substr(eq + 1));
  } catch (const YAML::Exception& e) {
    throw ConfigError(key, std::string("cannot parse override value: ") + e.what());
  }
  if (!root.IsDefined() || root.IsNull()) root = YAML::Node(YAML::NodeType::Map);
  set_path(root, keys, 0, value);
}

FieldPreset parse_preset(const YAML::Node& node, const std::string& path, bool is_map_field) {
  require_map(node, path);
  reject_unknown(node, path, {"preset", "amplitude", "seed", "modes", "wave", "point"});
  FieldPreset p;
  p.preset = node["preset"] ? scalar<std::string>(node["preset"], join(path, "preset")) : (is_map_field ? "constant" : "zero");
  const Keys allowed = is_map_field ? Keys{"constant", "equator_wrap", "random_smooth"}
                                    : Keys{"zero", "constant", "sine", "random_smooth"};
  if (!allowed.contains(p.preset)) throw ConfigError(join(path, "preset"), "unknown preset '" + p.preset + "'");
  if (node["amplitude"]) p.amplitude = finite(node["amplitude"], join(path, "amplitude"));
  if (node["seed"]) p.seed = scalar<std::uint64_t>(node["seed"], join(path, "seed"));
  if (node["modes"]) {
    p.modes = scalar<int>(node["modes"], join(path, "modes"));
    if (p.modes < 1) throw ConfigError(join(path, "modes"), "must be >= 1");
  }
  if (node["wave"]) {
    const auto w = number_list(node["wave"], join(path, "wave"));
    if (w.size() != 2 || w[0] != std::round(w[0]) || w[1] != std::round(w[1])) {
      throw ConfigError(join(path, "wave"), "expected two integers");
    }
    p.wave = {static_cast<int>(w[0]), static_cast<int>(w[1])};
  }
  if (node["point"]) p.point = number_list(node["point"], join(path, "point"));
  if (p.preset == "random_smooth" && p.amplitude < 0.0) throw ConfigError(join(path, "amplitude"), "must be >= 0");
  return p;
}

ScenarioConfig from_yaml(const YAML::Node& root) {
  ScenarioConfig cfg;
  if (!root.IsDefined() || root.IsNull()) return cfg;
  require_map(root, "");
  reject_unknown(root, "", {"grid", "target", "alpha", "initial", "t_end", "sample_dt", "cfl", "dt",
                            "snapshot_times", "output"});

  if (const auto grid = root["grid"]) {
    require_map(grid, "grid");
    reject_unknown(grid, "grid", {"n"});
    if (grid["n"]) {
      cfg.n = scalar<int>(grid["n"], "grid.n");
      if (cfg.n < 8 || cfg.n % 2 != 0) throw ConfigError("grid.n", "must be even and >= 8");
    }
  }

  if (const auto target = root["target"]) {
    require_map(target, "target");
    reject_unknown(target, "target", {"kind", "m", "r"});
    const std::string kind = target["kind"] ? scalar<std::string>(target["kind"], "target.kind") : "sphere";
    const int m = target["m"] ? scalar<int>(target["m"], "target.m") : 2;
    if (m < 1) throw ConfigError("target.m", "must be >= 1");
    if (kind == "sphere") {
      const double r = target["r"] ? positive(target["r"], "target.r") : 1.0;
      cfg.target = Target::sphere(m, r);
    } else if (kind == "flat") {
      if (target["r"]) throw ConfigError("target.r", "not used by a flat target");
      cfg.target = Target::flat(m);
    } else {
      throw ConfigError("target.kind", "expected 'sphere' or 'flat'");
    }
  }

  if (const auto alpha = root["alpha"]) {
    try {
      if (alpha.IsSequence()) {
        std::vector<std::pair<double, double>> knots;
        for (std::size_t k = 0; k < alpha.size(); ++k) {
          const auto knot = number_list(alpha[k], "alpha[" + std::to_string(k) + "]");
          if (knot.size() != 2) throw ConfigError("alpha[" + std::to_string(k) + "]", "expected [t, alpha]");
          knots.emplace_back(knot[0], knot[1]);
        }
        cfg.alpha = AlphaSchedule::piecewise_linear(std::move(knots));
      } else {
        cfg.alpha = AlphaSchedule::constant(finite(alpha, "alpha"));
      }
    } catch (const std::invalid_argument& e) {
      throw ConfigError("alpha", e.what());
    }
  }

  if (const auto initial = root["initial"]) {
    require_map(initial, "initial");
    reject_unknown(initial, "initial", {"u", "phi", "g0"});
    if (initial["u"]) cfg.u = parse_preset(initial["u"], "initial.u", false);
    if (initial["phi"]) cfg.phi = parse_preset(initial["phi"], "initial.phi", true);
    if (initial["g0"]) {
      const auto g = number_list(initial["g0"], "initial.g0");
      if (g.size() != 3) throw ConfigError("initial.g0", "expected [a, b, c] of [[a, b], [b, c]]");
      cfg.g0 = {g[0], g[1], g[2]};
      if (!(cfg.g0.xx > 0.0 && cfg.g0.det() > 0.0)) throw ConfigError("initial.g0", "must be positive-definite");
    }
  }

  if (root["t_end"]) {
    cfg.t_end = finite(root["t_end"], "t_end");
    if (cfg.t_end < 0.0) throw ConfigError("t_end", "must be >= 0");
  }
  if (root["sample_dt"]) cfg.sample_dt = positive(root["sample_dt"], "sample_dt");
  if (root["cfl"]) cfg.cfl = positive(root["cfl"], "cfl");
  if (root["dt"]) cfg.dt = positive(root["dt"], "dt");
  if (root["snapshot_times"]) cfg.snapshot_times = number_list(root["snapshot_times"], "snapshot_times");

  if (const auto output = root["output"]) {
    require_map(output, "output");
    reject_unknown(output, "output", {"csv", "snapshot_dir"});
    if (output["csv"]) cfg.csv_path = scalar<std::string>(output["csv"], "output.csv");
    if (output["snapshot_dir"]) cfg.snapshot_dir = scalar<std::string>(output["snapshot_dir"], "output.snapshot_dir");
  }

  const auto& p = cfg.phi;
  if (!p.point.empty() && static_cast<int>(p.point.size()) != cfg.target.components()) {
    throw ConfigError("initial.phi.point", "expected " + std::to_string(cfg.target.components()) + " coordinates");
  }
  if (p.preset == "constant" && cfg.target.is_sphere() && !p.point.empty()) {
    double norm = 0.0;
    for (double v : p.point) norm += v * v;
    if (norm == 0.0) throw ConfigError("initial.phi.point", "cannot project the origin onto the sphere");
  }
  if (p.preset == "equator_wrap" && cfg.target.components() < 2) {
    throw ConfigError("initial.phi.preset", "equator_wrap needs at least two target coordinates");
  }
  return cfg;
}

// Uniform double in [-1, 1) from the top 53 bits; avoids the
// implementation-defined std::uniform_real_distribution.
double uniform_pm1(std::mt19937_64& gen) {
  return 2.0 * static_cast<double>(gen() >> 11) * 0x1.0p-53 - 1.0;
}

}  // namespace

ScenarioConfig parse_config(const std::string& text, const std::vector<std::string>& overrides) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::Exception& e) {
    throw ConfigError("<document>", std::string("YAML parse error: ") + e.what());
  }
  for (const auto& o : overrides) apply_override(root, o);
  return from_yaml(root);
}

ScenarioConfig load_config(const std::string& path, const std::vector<std::string>& overrides) {
  std::ifstream in(path);
  if (!in) throw ConfigError("<file>", "cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), overrides);
}

ScalarField random_smooth_field(const GridPtr& grid, double amplitude, std::uint64_t seed, int modes) {
  std::mt19937_64 gen(seed);
  struct Mode {
    int kx, ky;
    double a, b;
  };
  std::vector<Mode> terms;
  for (int kx = -modes; kx <= modes; ++kx) {
    for (int ky = 0; ky <= modes; ++ky) {
      if (ky == 0 && kx <= 0) continue;  // one representative of each +-k pair
      const double weight = 1.0 / (1.0 + kx * kx + ky * ky);
      terms.push_back({kx, ky, weight * uniform_pm1(gen), weight * uniform_pm1(gen)});
    }
  }
  constexpr double two_pi = 2.0 * std::numbers::pi;
  ScalarField f = ScalarField::from_function(grid, [&](double x, double y) {
    double v = 0.0;
    for (const auto& m : terms) {
      const double arg = two_pi * (m.kx * x + m.ky * y);
      v += m.a * std::cos(arg) + m.b * std::sin(arg);
    }
    return v;
  });
  const double peak = f.max_abs();
  if (peak > 0.0) f *= amplitude / peak;
  return f;
}

FlowState build_initial(const ScenarioConfig& config) {
  const GridPtr grid = Grid::create(config.n);
  constexpr double two_pi = 2.0 * std::numbers::pi;
  const Target& target = config.target;

  ScalarField u(grid);
  const auto& up = config.u;
  if (up.preset == "constant") {
    u = ScalarField(grid, up.amplitude);
  } else if (up.preset == "sine") {
    const auto [p, q] = up.wave;
    u = ScalarField::from_function(grid, [&](double x, double y) {
      return up.amplitude * std::sin(two_pi * (p * x + q * y));
    });
  } else if (up.preset == "random_smooth") {
    u = random_smooth_field(grid, up.amplitude, up.seed, up.modes);
  }
  const double log_vol = std::log(u.map([](double v) { return std::exp(2.0 * v); }).mean());
  u += -0.5 * log_vol;

  const int nc = target.components();
  const double r = target.is_sphere() ? target.radius() : 1.0;
  MapField phi(grid, target);
  const auto& pp = config.phi;
  if (pp.preset == "constant") {
    std::vector<double> point = pp.point;
    if (point.empty()) {
      point.assign(static_cast<std::size_t>(nc), 0.0);
      if (target.is_sphere()) point.back() = r;
    }
    point = project(point, target);
    for (int c = 0; c < nc; ++c) phi[c] = ScalarField(grid, point[static_cast<std::size_t>(c)]);
  } else if (pp.preset == "equator_wrap") {
    const auto [p, q] = pp.wave;
    phi[0] = ScalarField::from_function(grid, [&](double x, double y) { return r * std::cos(two_pi * (p * x + q * y)); });
    phi[1] = ScalarField::from_function(grid, [&](double x, double y) { return r * std::sin(two_pi * (p * x + q * y)); });
  } else {
    // Sphere: project(pole + A w) with w tangent at the pole, so the
    // preimage never passes through the origin. Flat: A w directly.
    const int tangent = target.is_sphere() ? nc - 1 : nc;
    for (int c = 0; c < tangent; ++c) {
      phi[c] = random_smooth_field(grid, pp.amplitude * r, pp.seed + static_cast<std::uint64_t>(c), pp.modes);
    }
    if (target.is_sphere()) phi[nc - 1] = ScalarField(grid, r);
  }
  phi.project_onto_target();

  return FlowState{0.0, renormalize_det(config.g0), std::move(u), std::move(phi), config.alpha};
}

RunOptions run_options(const ScenarioConfig& config) {
  RunOptions o;
  o.t_end = config.t_end;
  o.sample_dt = config.sample_dt;
  o.cfl = config.cfl;
  o.fixed_dt = config.dt;
  o.snapshot_times = config.snapshot_times;
  return o;
}

}  // namespace hrf
