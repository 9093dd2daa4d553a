#include "hrf/target.hpp"

#include <cmath>
#include <stdexcept>

namespace hrf {

Target Target::sphere(int m, double r) {
  if (m < 1) throw std::invalid_argument("sphere dimension must be >= 1");
  if (!(r > 0.0) || !std::isfinite(r)) throw std::invalid_argument("sphere radius must be positive");
  return Target(Kind::sphere, m, r);
}

Target Target::flat(int m) {
  if (m < 1) throw std::invalid_argument("flat target dimension must be >= 1");
  return Target(Kind::flat, m, 1.0);
}

std::vector<double> project(std::span<const double> p, const Target& target) {
  std::vector<double> out(p.begin(), p.end());
  if (!target.is_sphere()) return out;
  double norm2 = 0.0;
  for (double v : p) norm2 += v * v;
  if (norm2 == 0.0) throw std::invalid_argument("cannot project the zero vector onto a sphere");
  const double s = target.radius() / std::sqrt(norm2);
  for (double& v : out) v *= s;
  return out;
}

MapField::MapField(GridPtr grid, Target target) : target_(target) {
  comps_.reserve(static_cast<std::size_t>(target.components()));
  for (int c = 0; c < target.components(); ++c) comps_.emplace_back(grid);
}

MapField::MapField(Target target, std::vector<ScalarField> components)
    : target_(target), comps_(std::move(components)) {
  if (static_cast<int>(comps_.size()) != target_.components()) {
    throw std::invalid_argument("MapField: component count does not match target");
  }
}

double MapField::project_onto_target() {
  if (!target_.is_sphere()) return 0.0;
  const std::size_t size = comps_.front().size();
  const double r = target_.radius();
  double worst = 0.0;
  for (std::size_t p = 0; p < size; ++p) {
    double norm2 = 0.0;
    for (const auto& f : comps_) norm2 += f[p] * f[p];
    if (norm2 == 0.0) throw std::runtime_error("map hit the origin; cannot project onto sphere");
    const double norm = std::sqrt(norm2);
    worst = std::max(worst, std::abs(norm - r));
    const double s = r / norm;
    for (auto& f : comps_) f[p] *= s;
  }
  return worst;
}

double MapField::constraint_violation() const {
  if (!target_.is_sphere()) return 0.0;
  const std::size_t size = comps_.front().size();
  double worst = 0.0;
  for (std::size_t p = 0; p < size; ++p) {
    double norm2 = 0.0;
    for (const auto& f : comps_) norm2 += f[p] * f[p];
    worst = std::max(worst, std::abs(std::sqrt(norm2) - target_.radius()));
  }
  return worst;
}

bool MapField::all_finite() const {
  for (const auto& f : comps_) {
    if (!f.all_finite()) return false;
  }
  return true;
}

MapGradient gradient(const MapField& phi) {
  MapGradient g;
  for (const auto& f : phi.fields()) {
    const Spectrum s = forward(f);
    g.dx.push_back(inverse(s.partial(Axis::x)));
    g.dy.push_back(inverse(s.partial(Axis::y)));
  }
  return g;
}

PullbackMetric pullback(const MapGradient& grad) {
  const GridPtr& grid = grad.dx.front().grid();
  PullbackMetric m{ScalarField(grid), ScalarField(grid), ScalarField(grid)};
  for (std::size_t c = 0; c < grad.dx.size(); ++c) {
    const auto& fx = grad.dx[c];
    const auto& fy = grad.dy[c];
    for (std::size_t p = 0; p < fx.size(); ++p) {
      m.xx[p] += fx[p] * fx[p];
      m.xy[p] += fx[p] * fy[p];
      m.yy[p] += fy[p] * fy[p];
    }
  }
  return m;
}

namespace {

ScalarField density_from_pullback(const PullbackMetric& m, const FlatMetric& g0) {
  const Sym2 gi = g0.inverse();
  ScalarField e(m.xx.grid());
  for (std::size_t p = 0; p < e.size(); ++p) {
    e[p] = 0.5 * (gi.xx * m.xx[p] + 2.0 * gi.xy * m.xy[p] + gi.yy * m.yy[p]);
  }
  return e;
}

}  // namespace

ScalarField energy_density_g0(const MapField& phi, const FlatMetric& g0) {
  return density_from_pullback(pullback(gradient(phi)), g0);
}

double dirichlet_energy(const MapField& phi, const FlatMetric& g0) {
  return integrate(energy_density_g0(phi, g0), g0);
}

std::vector<ScalarField> tension_g0(const MapField& phi, const FlatMetric& g0) {
  std::vector<ScalarField> tau;
  tau.reserve(static_cast<std::size_t>(phi.components()));
  for (const auto& f : phi.fields()) tau.push_back(laplacian(f, g0));
  if (phi.target().is_sphere()) {
    const ScalarField e = energy_density_g0(phi, g0);
    const double inv_r2 = 1.0 / (phi.target().radius() * phi.target().radius());
    for (int c = 0; c < phi.components(); ++c) {
      for (std::size_t p = 0; p < e.size(); ++p) tau[c][p] += 2.0 * e[p] * inv_r2 * phi[c][p];
    }
  }
  for (auto& t : tau) t = dealias(t);
  return tau;
}

}  // namespace hrf
