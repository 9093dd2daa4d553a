#pragma once

#include <optional>
#include <string>
#include <utility>

#include "hrf/flow.hpp"
#include "hrf/grid.hpp"
#include "hrf/target.hpp"

namespace hrf {

/// One row of the time series. Column order is fixed, see csv_header().
struct MonitorRow {
  double t = 0.0;
  double energy = 0.0;             ///< E(phi, g)
  double energy_rate = 0.0;        ///< -||tau_g||^2 - ||T°||^2 / (4 alpha)
  double liouville = 0.0;          ///< E_L
  double max_energy_density = 0.0; ///< max e(phi, g)
  double max_abs_curvature = 0.0;  ///< max |K_g|
  double curvature_l2_sq = 0.0;    ///< int (K_g - Kbar)^2 d mu_g
  double volume = 0.0;
  double injectivity_radius = 0.0; ///< inj(g0)
  double mean_u = 0.0;             ///< mean_{g0}(u)
  double rho_l2 = 0.0;
  double x_linf = 0.0;
  std::optional<double> bochner;   ///< present only when alpha_lo > C_K

  // Side checks that are not CSV columns.
  double gauss_bonnet = 0.0;       ///< int K_g d mu_g
  double det_g0 = 1.0;
};

/// E_L = 1/2 int |du|^2_{g0} d mu_{g0} (Kbar = 0 on the torus).
double liouville_energy(const ScalarField& u, const FlatMetric& g0);

/// dE/dt along the flow: -||tau_g(phi)||^2_{L^2(g)} - (1/4 alpha) ||T°||^2_{L^2(g)}.
double energy_decay_rate(const FlowState& state);

/// max{ max |d phi_0|^2_{g(0)}, 2 (alpha_hi Ebar(0) + 1) / (alpha_lo - C_K) },
/// or nullopt unless alpha_lo > C_K.
std::optional<double> bochner_bound(const FlowState& initial, double alpha_lo, double alpha_hi,
                                    const Target& target);

/// mean_{g0}(u); at unit volume Jensen's inequality makes this <= 0.
double jensen_check(const ScalarField& u, const FlatMetric& g0);

struct CurvatureStats {
  double max_abs = 0.0;
  double l2_sq = 0.0;        ///< int (K_g - Kbar)^2 d mu_g
  double total = 0.0;        ///< int K_g d mu_g (Gauss-Bonnet: 0)
};
CurvatureStats curvature_stats(const ScalarField& u, const FlatMetric& g0);

/// max over the grid of e(phi, g) = e^{-2u} e(phi, g0).
double max_energy_density(const FlowState& state);

/// Evaluates every diagnostic for one state. `bochner` is the precomputed
/// bound of the run (copied into the row).
MonitorRow sample(const FlowState& state, std::optional<double> bochner);

std::string csv_header();
std::string csv_row(const MonitorRow& row);

}  // namespace hrf
