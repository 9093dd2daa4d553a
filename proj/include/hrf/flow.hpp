#pragma once

// Gauge-fixed Harmonic Ricci Flow on the unit-volume flat torus:
//
//   d/dt g0  = P^H(2 alpha e^{-2u} (d phi (x) d phi - e(phi,g0) g0))
//   d/dt u   = e^{-2u} Delta u + alpha (e(phi,g0) e^{-2u} - Ebar) + rho/2 - du(X)
//   d/dt phi = e^{-2u} tau_{g0}(phi) - d phi(X)
//
// with rho, X from the splitting module and Ebar = E / Vol.

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "hrf/grid.hpp"
#include "hrf/metric.hpp"
#include "hrf/splitting.hpp"
#include "hrf/target.hpp"

namespace hrf {

/// Coupling alpha(t): piecewise linear through (t, alpha) knots, constant
/// beyond the first and last knot. All values must be positive.
class AlphaSchedule {
 public:
  AlphaSchedule() : AlphaSchedule(constant(1.0)) {}
  static AlphaSchedule constant(double alpha);
  static AlphaSchedule piecewise_linear(std::vector<std::pair<double, double>> knots);

  double operator()(double t) const;
  double lower() const;
  double upper() const;
  const std::vector<std::pair<double, double>>& knots() const { return knots_; }

  bool operator==(const AlphaSchedule&) const = default;

 private:
  explicit AlphaSchedule(std::vector<std::pair<double, double>> knots) : knots_(std::move(knots)) {}
  std::vector<std::pair<double, double>> knots_;
};

struct FlowState {
  double t = 0.0;
  FlatMetric g0;
  ScalarField u;
  MapField phi;
  AlphaSchedule alpha;

  const GridPtr& grid() const { return u.grid(); }
  /// int e^{2u} d mu_{g0}
  double volume() const;
  /// Human-readable list of violated invariants (empty when valid).
  std::vector<std::string> invariant_violations() const;
};

/// Right-hand side of the split system plus the intermediate fields the
/// monitors reuse.
struct FlowRates {
  ScalarField du;
  std::vector<ScalarField> dphi;
  HorizontalVelocity dg0;
  Decomposition split;
  std::vector<ScalarField> tension;  ///< tau_{g0}(phi) at the grid points
  double alpha = 0.0;
  double energy = 0.0;       ///< E(phi, g0)
  double mean_energy = 0.0;  ///< Ebar = E / Vol
};

FlowRates rhs(const FlowState& state);

struct StepReport {
  double dt = 0.0;
  double du_max = 0.0;
  double dphi_max = 0.0;
  double dg0_max = 0.0;
  double sphere_shift = 0.0;  ///< max | |phi| - r | removed by projection
  double volume_shift = 0.0;  ///< |u shift| restoring unit volume
  double det_shift = 0.0;     ///< |det g0 - 1| removed by renormalization
  int halvings = 0;

  double max_shift() const;
};

/// Raised when the state can no longer be advanced; carries the last state
/// that satisfied every check.
class FlowAbort : public std::runtime_error {
 public:
  FlowAbort(const std::string& what, FlowState last_valid)
      : std::runtime_error(what), last_valid_(std::move(last_valid)) {}
  const FlowState& last_valid() const { return last_valid_; }

 private:
  FlowState last_valid_;
};

/// Linear stability limit of classical RK4 (|z| <= 2.785 on the negative real
/// axis) for the stiffest retained mode of e^{-2u} Delta_{g0}.
double stability_limit(const FlowState& state);

/// One classical RK4 step followed by the renormalizations, in order:
/// sphere projection of phi, constant shift of u restoring unit volume,
/// det g0 -> 1. Throws FlowAbort on NaN/Inf or a degenerate metric.
std::pair<FlowState, StepReport> step(const FlowState& state, double dt);

struct RunOptions {
  double t_end = 0.0;
  double sample_dt = 0.01;
  double cfl = 0.4;                  ///< fraction of stability_limit
  std::optional<double> fixed_dt;    ///< overrides the CFL step
  std::vector<double> snapshot_times;
  int max_halvings = 4;
  double shift_abort_factor = 10.0;  ///< abort above this multiple of the calibrated bound
  double shift_floor = 1e-12;        ///< shifts below this never abort
};

struct RunObserver {
  std::function<void(const FlowState&)> on_sample;
  std::function<void(const FlowState&)> on_snapshot;
  std::function<void(const StepReport&)> on_step;
};

struct RunSummary {
  FlowState final_state;
  long steps = 0;
  double max_det_drift = 0.0;
  double max_volume_shift = 0.0;
  double max_sphere_shift = 0.0;
};

/// Advances to t_end, sampling every sample_dt (and at t_end). Throws
/// FlowAbort with the last valid state.
RunSummary run(const FlowState& initial, const RunOptions& options, const RunObserver& observer = {});

}  // namespace hrf
