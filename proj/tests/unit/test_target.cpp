#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "hrf/config.hpp"
#include "hrf/target.hpp"

using namespace hrf;
using std::numbers::pi;

namespace {

MapField equator_wrap(const GridPtr& g, int m, int n, double r) {
  std::vector<ScalarField> c;
  c.push_back(ScalarField::from_function(g, [=](double x, double y) { return r * std::cos(2 * pi * (m * x + n * y)); }));
  c.push_back(ScalarField::from_function(g, [=](double x, double y) { return r * std::sin(2 * pi * (m * x + n * y)); }));
  c.emplace_back(g, 0.0);
  return MapField(Target::sphere(2, r), std::move(c));
}

MapField constant_map(const GridPtr& g) {
  return MapField(Target::sphere(2, 1.0), {ScalarField(g, 0.6), ScalarField(g, 0.0), ScalarField(g, 0.8)});
}

double max_over(const std::vector<ScalarField>& fs) {
  double m = 0.0;
  for (const auto& f : fs) m = std::max(m, f.max_abs());
  return m;
}

}  // namespace

TEST_CASE("closest-point projection") {
  const Target s2 = Target::sphere(2, 1.0);
  const std::vector<double> on{0.0, 0.6, 0.8};
  CHECK(project(on, s2) == on);
  const auto p = project(std::vector<double>{2.0, 0.0, 0.0}, s2);
  CHECK(p[0] == 1.0);
  const auto q = project(std::vector<double>{3.0, 4.0, 0.0}, s2);
  CHECK(q[0] == doctest::Approx(0.6).epsilon(1e-15));
  CHECK(q[1] == doctest::Approx(0.8).epsilon(1e-15));
  CHECK(q[2] == 0.0);
  CHECK_THROWS_AS(project(std::vector<double>{0.0, 0.0, 0.0}, s2), std::invalid_argument);
  const auto f = project(std::vector<double>{3.0, 4.0}, Target::flat(2));
  CHECK(f[0] == 3.0);
  // radius scaling and idempotence
  const auto big = project(std::vector<double>{1.0, 2.0, 2.0}, Target::sphere(2, 2.0));
  CHECK(std::hypot(big[0], big[1], big[2]) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(project(big, Target::sphere(2, 2.0))[1] == doctest::Approx(big[1]).epsilon(1e-15));
}

TEST_CASE("tension field") {
  const auto g = Grid::create(32);
  CHECK(max_over(tension_g0(constant_map(g), FlatMetric())) < 1e-14);
  CHECK(max_over(tension_g0(equator_wrap(g, 1, 0, 1.0), FlatMetric())) < 1e-9);
  CHECK(max_over(tension_g0(equator_wrap(g, 2, 1, 1.5), FlatMetric())) < 1e-8);
  // harmonic for any flat metric too: |d phi|^2 is constant
  CHECK(max_over(tension_g0(equator_wrap(g, 1, 1, 1.0), FlatMetric(1.0, 0.5, 1.25))) < 1e-8);
}

TEST_CASE("tension field linearizes to the Laplacian at a constant map") {
  // phi_eps = proj(p + eps w), w tangent at p: tau = eps Delta w + O(eps^2)
  const auto g = Grid::create(32);
  const FlatMetric g0(1.2, 0.1, (1.0 + 0.01) / 1.2);
  const ScalarField w = random_smooth_field(g, 1.0, 3, 3);
  auto tau_at = [&](double eps) {
    std::vector<ScalarField> c{ScalarField(g), ScalarField(g), ScalarField(g)};
    for (std::size_t p = 0; p < w.size(); ++p) {
      const auto q = project(std::vector<double>{eps * w[p], 0.0, 1.0}, Target::sphere(2, 1.0));
      for (int k = 0; k < 3; ++k) c[static_cast<std::size_t>(k)][p] = q[static_cast<std::size_t>(k)];
    }
    return tension_g0(MapField(Target::sphere(2, 1.0), std::move(c)), g0)[0];
  };
  const ScalarField lin = laplacian(w, g0);
  const double e1 = (tau_at(1e-2) - 1e-2 * lin).max_abs();
  const double e2 = (tau_at(5e-3) - 5e-3 * lin).max_abs();
  CHECK(e1 < 1e-2 * lin.max_abs() * 1e-2);
  // defect is O(eps^2) or better (odd symmetry makes it O(eps^3))
  CHECK(e2 < 0.3 * e1);
}

TEST_CASE("energy density and Dirichlet energy") {
  const auto g = Grid::create(32);
  CHECK(energy_density_g0(constant_map(g), FlatMetric()).max_abs() == 0.0);
  const ScalarField e = energy_density_g0(equator_wrap(g, 1, 0, 1.0), FlatMetric());
  CHECK(e.min() == doctest::Approx(2 * pi * pi).epsilon(1e-12));
  CHECK(e.max() == doctest::Approx(2 * pi * pi).epsilon(1e-12));
  const ScalarField ea = energy_density_g0(equator_wrap(g, 1, 0, 1.0), FlatMetric(2.0, 0.0, 0.5));
  CHECK(ea.max() == doctest::Approx(pi * pi).epsilon(1e-12));
  CHECK(ea.min() == doctest::Approx(pi * pi).epsilon(1e-12));
  CHECK(dirichlet_energy(constant_map(g), FlatMetric()) == 0.0);
  CHECK(dirichlet_energy(equator_wrap(g, 1, 0, 1.0), FlatMetric()) == doctest::Approx(2 * pi * pi).epsilon(1e-12));
}

TEST_CASE("map field constraint helpers") {
  const auto g = Grid::create(16);
  MapField phi = equator_wrap(g, 1, 0, 1.0);
  CHECK(phi.constraint_violation() < 1e-15);
  phi[2] += 0.1;
  CHECK(phi.constraint_violation() > 1e-3);
  const double before = phi.project_onto_target();
  CHECK(before > 1e-3);
  CHECK(phi.constraint_violation() < 1e-15);
  CHECK(phi.all_finite());
  phi[0][3] = std::nan("");
  CHECK_FALSE(phi.all_finite());
}

TEST_CASE("pullback of the equator wrap") {
  const auto g = Grid::create(16);
  const PullbackMetric p = pullback(gradient(equator_wrap(g, 1, 0, 1.0)));
  CHECK(p.xx.min() == doctest::Approx(4 * pi * pi).epsilon(1e-12));
  CHECK(p.xy.max_abs() < 1e-12);
  CHECK(p.yy.max_abs() < 1e-12);
}
