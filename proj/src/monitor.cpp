#include "hrf/monitor.hpp"

#include <algorithm>
#include <cmath>

#include "hrf/geometry.hpp"
#include "hrf/splitting.hpp"

namespace hrf {

double liouville_energy(const ScalarField& u, const FlatMetric& g0) {
  const Spectrum uh = forward(u);
  const ScalarField ux = inverse(uh.partial(Axis::x));
  const ScalarField uy = inverse(uh.partial(Axis::y));
  const Sym2 gi = g0.inverse();
  ScalarField du2(u.grid());
  for (std::size_t p = 0; p < du2.size(); ++p) {
    du2[p] = gi.xx * ux[p] * ux[p] + 2.0 * gi.xy * ux[p] * uy[p] + gi.yy * uy[p] * uy[p];
  }
  return 0.5 * integrate(du2, g0);
}

double energy_decay_rate(const FlowState& state) {
  const FlatMetric& g0 = state.g0;
  const double alpha = state.alpha(state.t);
  const auto tau = tension_g0(state.phi, g0);
  const PullbackMetric pb = pullback(gradient(state.phi));
  const Sym2& g = g0.matrix();
  const Sym2 gi = g0.inverse();

  ScalarField tau_term(state.grid()), t_term(state.grid());
  for (std::size_t p = 0; p < tau_term.size(); ++p) {
    const double w = std::exp(-2.0 * state.u[p]);
    double t2 = 0.0;
    for (const auto& f : tau) t2 += f[p] * f[p];
    tau_term[p] = w * t2;
    // T° = 2 alpha (d phi (x) d phi - e(phi, g0) g0) is independent of u.
    const Sym2 pp{pb.xx[p], pb.xy[p], pb.yy[p]};
    const double e = 0.5 * trace_with(pp, gi);
    const Sym2 tf = (pp - g * e) * (2.0 * alpha);
    t_term[p] = w * contract(tf, tf, gi);
  }
  return -integrate(tau_term, g0) - integrate(t_term, g0) / (4.0 * alpha);
}

std::optional<double> bochner_bound(const FlowState& initial, double alpha_lo, double alpha_hi,
                                    const Target& target) {
  const double ck = target.curvature_constant();
  if (!(alpha_lo > ck)) return std::nullopt;
  // |d phi|^2_g = 2 e(phi, g) = 2 e^{-2u} e(phi, g0)
  const double max_dphi2 = 2.0 * max_energy_density(initial);
  const double mean_energy = dirichlet_energy(initial.phi, initial.g0) / initial.volume();
  return std::max(max_dphi2, 2.0 * (alpha_hi * mean_energy + 1.0) / (alpha_lo - ck));
}

double jensen_check(const ScalarField& u, const FlatMetric& g0) {
  return integrate(u, g0) / g0.volume_factor();
}

CurvatureStats curvature_stats(const ScalarField& u, const FlatMetric& g0) {
  const ScalarField k = gauss_curvature(u, g0);
  ScalarField k2(u.grid()), kvol(u.grid());
  for (std::size_t p = 0; p < k.size(); ++p) {
    const double vol = std::exp(2.0 * u[p]);
    k2[p] = k[p] * k[p] * vol;
    kvol[p] = k[p] * vol;
  }
  return {k.max_abs(), integrate(k2, g0), integrate(kvol, g0)};
}

double max_energy_density(const FlowState& state) {
  const ScalarField e = energy_density_g0(state.phi, state.g0);
  double m = 0.0;
  for (std::size_t p = 0; p < e.size(); ++p) m = std::max(m, std::exp(-2.0 * state.u[p]) * e[p]);
  return m;
}

MonitorRow sample(const FlowState& state, std::optional<double> bochner) {
  MonitorRow row;
  row.t = state.t;
  row.energy = dirichlet_energy(state.phi, state.g0);
  row.energy_rate = energy_decay_rate(state);
  row.liouville = liouville_energy(state.u, state.g0);
  row.max_energy_density = max_energy_density(state);
  const CurvatureStats ks = curvature_stats(state.u, state.g0);
  row.max_abs_curvature = ks.max_abs;
  row.curvature_l2_sq = ks.l2_sq;
  row.gauss_bonnet = ks.total;
  row.volume = state.volume();
  row.injectivity_radius = injectivity_radius(state.g0);
  row.mean_u = jensen_check(state.u, state.g0);
  const Decomposition d = decompose(state.phi, state.u, state.g0, state.alpha(state.t));
  row.rho_l2 = l2_norm(d.rho, state.g0);
  row.x_linf = d.x.max_norm(state.g0);
  row.bochner = bochner;
  row.det_g0 = state.g0.det();
  return row;
}

}  // namespace hrf
