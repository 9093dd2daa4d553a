#include "hrf/flow.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "hrf/geometry.hpp"

namespace hrf {

// ---------------------------------------------------------------------------
// AlphaSchedule

AlphaSchedule AlphaSchedule::constant(double alpha) { return piecewise_linear({{0.0, alpha}}); }

AlphaSchedule AlphaSchedule::piecewise_linear(std::vector<std::pair<double, double>> knots) {
  if (knots.empty()) throw std::invalid_argument("alpha schedule needs at least one knot");
  for (std::size_t k = 0; k < knots.size(); ++k) {
    const auto [t, a] = knots[k];
    if (!std::isfinite(t) || !std::isfinite(a)) throw std::invalid_argument("alpha schedule: non-finite knot");
    if (!(a > 0.0)) throw std::invalid_argument("alpha must be bounded away from zero (got " + std::to_string(a) + ")");
    if (k > 0 && !(t > knots[k - 1].first)) {
      throw std::invalid_argument("alpha schedule knots must have increasing times");
    }
  }
  return AlphaSchedule(std::move(knots));
}

double AlphaSchedule::operator()(double t) const {
  if (t <= knots_.front().first) return knots_.front().second;
  if (t >= knots_.back().first) return knots_.back().second;
  const auto it = std::upper_bound(knots_.begin(), knots_.end(), t,
                                   [](double v, const auto& knot) { return v < knot.first; });
  const auto& [t1, a1] = *it;
  const auto& [t0, a0] = *(it - 1);
  const double s = (t - t0) / (t1 - t0);
  return a0 + s * (a1 - a0);
}

double AlphaSchedule::lower() const {
  double lo = knots_.front().second;
  for (const auto& k : knots_) lo = std::min(lo, k.second);
  return lo;
}

double AlphaSchedule::upper() const {
  double hi = knots_.front().second;
  for (const auto& k : knots_) hi = std::max(hi, k.second);
  return hi;
}

// ---------------------------------------------------------------------------
// FlowState

double FlowState::volume() const { return integrate(u.map([](double v) { return std::exp(2.0 * v); }), g0); }

std::vector<std::string> FlowState::invariant_violations() const {
  std::vector<std::string> out;
  auto fmt = [](const char* what, double value) {
    std::ostringstream os;
    os.precision(3);
    os << what << " = " << std::scientific << value;
    return os.str();
  };
  if (!u.all_finite() || !phi.all_finite()) out.emplace_back("non-finite field values");
  if (std::abs(g0.det() - 1.0) > 1e-8) out.push_back(fmt("|det g0 - 1|", std::abs(g0.det() - 1.0)));
  const double vol = volume();
  if (!(std::abs(vol - 1.0) < 1e-6)) out.push_back(fmt("|Vol - 1|", std::abs(vol - 1.0)));
  const double sphere = phi.constraint_violation();
  if (!(sphere < 1e-8)) out.push_back(fmt("max | |phi| - r |", sphere));
  if (!(alpha.lower() > 0.0)) out.emplace_back("alpha not bounded away from zero");
  return out;
}

// ---------------------------------------------------------------------------
// Right-hand side

FlowRates rhs(const FlowState& state) {
  const GridPtr& grid = state.grid();
  const FlatMetric& g0 = state.g0;
  const Sym2& g = g0.matrix();
  const Sym2 gi = g0.inverse();
  const double alpha = state.alpha(state.t);
  const std::size_t size = grid->size();
  const int ncomp = state.phi.components();

  const Spectrum uh = forward(state.u);
  const ScalarField ux = inverse(uh.partial(Axis::x));
  const ScalarField uy = inverse(uh.partial(Axis::y));
  const ScalarField lap_u = inverse(uh.laplacian(g0));

  std::vector<ScalarField> px, py, lap;
  for (const auto& f : state.phi.fields()) {
    const Spectrum fh = forward(f);
    px.push_back(inverse(fh.partial(Axis::x)));
    py.push_back(inverse(fh.partial(Axis::y)));
    lap.push_back(inverse(fh.laplacian(g0)));
  }

  ScalarField e0(grid), w(grid), e2u(grid);
  SymTensorField s(grid);
  for (std::size_t p = 0; p < size; ++p) {
    double pxx = 0.0, pxy = 0.0, pyy = 0.0;
    for (int c = 0; c < ncomp; ++c) {
      pxx += px[c][p] * px[c][p];
      pxy += px[c][p] * py[c][p];
      pyy += py[c][p] * py[c][p];
    }
    const double e = 0.5 * (gi.xx * pxx + 2.0 * gi.xy * pxy + gi.yy * pyy);
    e0[p] = e;
    w[p] = std::exp(-2.0 * state.u[p]);
    e2u[p] = 1.0 / w[p];
    const double coef = 2.0 * alpha * w[p];
    s.xx[p] = coef * (pxx - e * g.xx);
    s.xy[p] = coef * (pxy - e * g.xy);
    s.yy[p] = coef * (pyy - e * g.yy);
  }
  Decomposition split = decompose_dealiased(s, g0);
  const ScalarField& rho = split.rho;
  const VectorField& x = split.x;

  const double energy = integrate(e0, g0);
  const double mean_energy = energy / integrate(e2u, g0);

  ScalarField du(grid);
  for (std::size_t p = 0; p < size; ++p) {
    du[p] = w[p] * lap_u[p] + alpha * (e0[p] * w[p] - mean_energy) + 0.5 * rho[p] -
            (x.x[p] * ux[p] + x.y[p] * uy[p]);
  }
  du = dealias(du);
  // Truncation leaves a small constant that would change the grid volume;
  // remove it so the semi-discrete system conserves volume exactly.
  du += -(e2u * du).mean() / e2u.mean();

  const bool sphere = state.phi.target().is_sphere();
  const double inv_r2 = sphere ? 1.0 / (state.phi.target().radius() * state.phi.target().radius()) : 0.0;
  std::vector<ScalarField> tension, dphi;
  for (int c = 0; c < ncomp; ++c) {
    ScalarField tau = lap[c];
    ScalarField rate(grid);
    const ScalarField& f = state.phi[c];
    for (std::size_t p = 0; p < size; ++p) {
      if (sphere) tau[p] += 2.0 * e0[p] * inv_r2 * f[p];
      rate[p] = w[p] * tau[p] - (x.x[p] * px[c][p] + x.y[p] * py[c][p]);
    }
    tension.push_back(std::move(tau));
    dphi.push_back(dealias(rate));
  }
  if (sphere) {
    // Keep the rate tangent to the sphere through phi; dealiasing leaves a
    // normal component of truncation size.
    for (std::size_t p = 0; p < size; ++p) {
      double n2 = 0.0, dot = 0.0;
      for (int c = 0; c < ncomp; ++c) {
        n2 += state.phi[c][p] * state.phi[c][p];
        dot += state.phi[c][p] * dphi[static_cast<std::size_t>(c)][p];
      }
      if (n2 == 0.0) continue;
      for (int c = 0; c < ncomp; ++c) dphi[static_cast<std::size_t>(c)][p] -= dot / n2 * state.phi[c][p];
    }
  }

  const HorizontalVelocity h = split.horizontal;
  return FlowRates{std::move(du), std::move(dphi), h,     std::move(split),
                   std::move(tension), alpha, energy, mean_energy};
}

// ---------------------------------------------------------------------------
// Time stepping

double StepReport::max_shift() const { return std::max({sphere_shift, volume_shift, det_shift}); }

double stability_limit(const FlowState& state) {
  constexpr double rk4_real_axis = 2.785;
  const Grid& grid = *state.grid();
  const Sym2 gi = state.g0.inverse();
  const double k = 2.0 * std::numbers::pi * grid.dealias_cutoff();
  // Largest g^{ij} k_i k_j over the retained box sits at a corner.
  const double symbol = k * k * (gi.xx + gi.yy + 2.0 * std::abs(gi.xy));
  const double weight = std::exp(-2.0 * state.u.min());
  return rk4_real_axis / (weight * symbol);
}

namespace {

FlowState advance(const FlowState& base, const FlowRates& k, double h) {
  FlowState out{base.t + h, FlatMetric(base.g0.matrix() + k.dg0.h * h), base.u, base.phi, base.alpha};
  for (std::size_t p = 0; p < out.u.size(); ++p) out.u[p] += h * k.du[p];
  for (int c = 0; c < out.phi.components(); ++c) {
    auto& f = out.phi[c];
    const auto& r = k.dphi[static_cast<std::size_t>(c)];
    for (std::size_t p = 0; p < f.size(); ++p) f[p] += h * r[p];
  }
  return out;
}

double max_over(const std::vector<ScalarField>& fs) {
  double m = 0.0;
  for (const auto& f : fs) m = std::max(m, f.max_abs());
  return m;
}

}  // namespace

std::pair<FlowState, StepReport> step(const FlowState& state, double dt) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw std::invalid_argument("step: dt must be positive and finite");
  StepReport report;
  report.dt = dt;
  FlowState next;
  try {
    const FlowRates k1 = rhs(state);
    report.du_max = k1.du.max_abs();
    report.dphi_max = max_over(k1.dphi);
    report.dg0_max = k1.dg0.h.max_abs();
    const FlowRates k2 = rhs(advance(state, k1, 0.5 * dt));
    const FlowRates k3 = rhs(advance(state, k2, 0.5 * dt));
    const FlowRates k4 = rhs(advance(state, k3, dt));

    const double w1 = dt / 6.0, w2 = dt / 3.0;
    Sym2 g = state.g0.matrix();
    g += k1.dg0.h * w1 + k2.dg0.h * w2 + k3.dg0.h * w2 + k4.dg0.h * w1;
    next = FlowState{state.t + dt, FlatMetric(g), state.u, state.phi, state.alpha};
    for (std::size_t p = 0; p < next.u.size(); ++p) {
      next.u[p] += w1 * k1.du[p] + w2 * k2.du[p] + w2 * k3.du[p] + w1 * k4.du[p];
    }
    for (int c = 0; c < next.phi.components(); ++c) {
      const auto cc = static_cast<std::size_t>(c);
      auto& f = next.phi[c];
      for (std::size_t p = 0; p < f.size(); ++p) {
        f[p] += w1 * k1.dphi[cc][p] + w2 * k2.dphi[cc][p] + w2 * k3.dphi[cc][p] + w1 * k4.dphi[cc][p];
      }
    }
  } catch (const std::invalid_argument& e) {
    // FlatMetric rejects a stage metric that left the positive cone.
    throw FlowAbort(std::string("metric degenerated during step: ") + e.what(), state);
  }

  if (!next.u.all_finite() || !next.phi.all_finite()) {
    std::ostringstream os;
    os << "non-finite values after step at t = " << state.t << " with dt = " << dt;
    throw FlowAbort(os.str(), state);
  }

  try {
    report.sphere_shift = next.phi.project_onto_target();
  } catch (const std::exception& e) {
    throw FlowAbort(e.what(), state);
  }
  // Volume is measured against the unit-determinant metric produced below.
  const double log_vol = std::log(next.u.map([](double v) { return std::exp(2.0 * v); }).mean());
  next.u += -0.5 * log_vol;
  report.volume_shift = std::abs(0.5 * log_vol);
  report.det_shift = std::abs(next.g0.det() - 1.0);
  next.g0 = renormalize_det(next.g0.matrix());
  return {std::move(next), report};
}

RunSummary run(const FlowState& initial, const RunOptions& options, const RunObserver& observer) {
  if (!(options.t_end >= 0.0) || !std::isfinite(options.t_end)) throw std::invalid_argument("t_end must be >= 0");
  if (!(options.sample_dt > 0.0)) throw std::invalid_argument("sample_dt must be positive");
  if (!(options.cfl > 0.0)) throw std::invalid_argument("cfl must be positive");

  const double t0 = initial.t;
  const double t_end = t0 + options.t_end;
  std::vector<double> snapshots;
  for (double ts : options.snapshot_times) {
    if (ts >= t0 && ts <= t_end) snapshots.push_back(ts);
  }
  std::sort(snapshots.begin(), snapshots.end());
  std::size_t next_snapshot = 0;

  RunSummary summary{initial};
  FlowState& state = summary.final_state;

  auto emit = [&](const FlowState& s) {
    while (next_snapshot < snapshots.size() && snapshots[next_snapshot] <= s.t) {
      if (observer.on_snapshot) observer.on_snapshot(s);
      ++next_snapshot;
    }
  };

  if (observer.on_sample) observer.on_sample(state);
  emit(state);

  long sample_index = 1;
  // Shift bound C dt^2, calibrated on the first step.
  std::optional<double> shift_constant;
  const double eps = 1e-12 * std::max(1.0, std::abs(t_end));

  while (state.t < t_end - eps) {
    const double next_sample = std::min(t_end, t0 + static_cast<double>(sample_index) * options.sample_dt);
    double next_event = next_sample;
    if (next_snapshot < snapshots.size()) next_event = std::min(next_event, snapshots[next_snapshot]);

    double dt = options.fixed_dt ? *options.fixed_dt : options.cfl * stability_limit(state);
    bool lands_on_event = false;
    if (state.t + dt >= next_event - eps) {
      dt = next_event - state.t;
      lands_on_event = true;
    }

    int halvings = 0;
    for (;;) {
      auto [candidate, report] = step(state, dt);
      report.halvings = halvings;
      const double shift = report.max_shift();
      if (!shift_constant) shift_constant = std::max(shift, options.shift_floor) / (dt * dt);
      const double bound = std::max(options.shift_abort_factor * *shift_constant * dt * dt, options.shift_floor);
      if (shift <= bound) {
        if (lands_on_event && halvings == 0) candidate.t = next_event;
        summary.max_det_drift = std::max(summary.max_det_drift, report.det_shift);
        summary.max_volume_shift = std::max(summary.max_volume_shift, report.volume_shift);
        summary.max_sphere_shift = std::max(summary.max_sphere_shift, report.sphere_shift);
        ++summary.steps;
        if (observer.on_step) observer.on_step(report);
        state = std::move(candidate);
        break;
      }
      if (++halvings > options.max_halvings) {
        std::ostringstream os;
        os << "renormalization shift " << shift << " exceeds bound " << bound << " at t = " << state.t
           << " after " << options.max_halvings << " step halvings";
        throw FlowAbort(os.str(), state);
      }
      dt *= 0.5;
    }

    if (state.t >= next_sample - eps) {
      state.t = next_sample;
      if (observer.on_sample) observer.on_sample(state);
      ++sample_index;
    }
    emit(state);
  }
  return summary;
}

}  // namespace hrf
