#pragma once

// Target manifolds: the round sphere S^m(r) in R^{m+1}, or flat R^m.

#include <span>
#include <string>
#include <vector>

#include "hrf/grid.hpp"
#include "hrf/metric.hpp"

namespace hrf {

class Target {
 public:
  enum class Kind { sphere, flat };

  static Target sphere(int m, double r);
  static Target flat(int m);

  Kind kind() const { return kind_; }
  bool is_sphere() const { return kind_ == Kind::sphere; }
  int dimension() const { return m_; }
  double radius() const { return r_; }
  /// Number of ambient coordinates of the embedding.
  int components() const { return is_sphere() ? m_ + 1 : m_; }
  /// C_K = 2 * max sectional curvature = 2/r^2 on the sphere, 0 when flat.
  double curvature_constant() const { return is_sphere() ? 2.0 / (r_ * r_) : 0.0; }

  bool operator==(const Target&) const = default;

 private:
  Target(Kind kind, int m, double r) : kind_(kind), m_(m), r_(r) {}
  Kind kind_;
  int m_;
  double r_;
};

/// Closest-point projection onto the target. Throws std::invalid_argument for
/// the zero vector on a sphere target.
std::vector<double> project(std::span<const double> p, const Target& target);

/// phi : T^2 -> N in ambient coordinates, one ScalarField per component.
class MapField {
 public:
  MapField() : target_(Target::flat(1)) {}
  MapField(GridPtr grid, Target target);
  MapField(Target target, std::vector<ScalarField> components);

  const Target& target() const { return target_; }
  const GridPtr& grid() const { return comps_.front().grid(); }
  int components() const { return static_cast<int>(comps_.size()); }
  ScalarField& operator[](int c) { return comps_[static_cast<std::size_t>(c)]; }
  const ScalarField& operator[](int c) const { return comps_[static_cast<std::size_t>(c)]; }
  std::vector<ScalarField>& fields() { return comps_; }
  const std::vector<ScalarField>& fields() const { return comps_; }

  /// Pointwise projection onto the target; returns max | |phi| - r | before
  /// projection (0 for flat targets).
  double project_onto_target();
  /// max over grid points of | |phi| - r | (0 for flat targets).
  double constraint_violation() const;
  bool all_finite() const;

 private:
  Target target_;
  std::vector<ScalarField> comps_;
};

/// tau_{g0}(phi) = Delta_{g0} phi + (|d phi|^2_{g0} / r^2) phi (sphere),
/// Delta_{g0} phi (flat), dealiased.
std::vector<ScalarField> tension_g0(const MapField& phi, const FlatMetric& g0);

/// e(phi, g0) = 1/2 g0^{ij} <d_i phi, d_j phi>.
ScalarField energy_density_g0(const MapField& phi, const FlatMetric& g0);

/// E = 1/2 int |d phi|^2 d mu; conformally invariant, so u never enters.
double dirichlet_energy(const MapField& phi, const FlatMetric& g0);

/// Coordinate derivatives of every component: result[c] = {d_x phi^c, d_y phi^c}.
struct MapGradient {
  std::vector<ScalarField> dx;
  std::vector<ScalarField> dy;
};
MapGradient gradient(const MapField& phi);

/// Pointwise <d_i phi, d_j phi> as a symmetric tensor (xx, xy, yy).
struct PullbackMetric {
  ScalarField xx, xy, yy;
};
PullbackMetric pullback(const MapGradient& grad);

}  // namespace hrf
