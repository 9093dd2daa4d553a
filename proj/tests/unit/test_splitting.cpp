#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "hrf/config.hpp"
#include "hrf/splitting.hpp"

using namespace hrf;
using std::numbers::pi;

namespace {

// (delta T)_j = -g^{ik} d_i T_kj, written out component by component
std::pair<ScalarField, ScalarField> div_oracle(const SymTensorField& t, const FlatMetric& g0) {
  const Sym2 gi = g0.inverse();
  const auto dx = [](const ScalarField& f) { return partial(f, Axis::x); };
  const auto dy = [](const ScalarField& f) { return partial(f, Axis::y); };
  ScalarField jx = -1.0 * (gi.xx * dx(t.xx) + gi.xy * dy(t.xx) + gi.xy * dx(t.xy) + gi.yy * dy(t.xy));
  ScalarField jy = -1.0 * (gi.xx * dx(t.xy) + gi.xy * dy(t.xy) + gi.xy * dx(t.yy) + gi.yy * dy(t.yy));
  return {std::move(jx), std::move(jy)};
}

SymTensorField lie_oracle(const VectorField& x, const FlatMetric& g0) {
  // lowered X_j = g_jk X^k; (L_X g)_ij = d_i X_j + d_j X_i
  const ScalarField lx = g0.a() * x.x + g0.b() * x.y;
  const ScalarField ly = g0.b() * x.x + g0.c() * x.y;
  return SymTensorField(2.0 * partial(lx, Axis::x), partial(ly, Axis::x) + partial(lx, Axis::y),
                        2.0 * partial(ly, Axis::y));
}

MapField random_map(const GridPtr& g, std::uint64_t seed, double amp) {
  ScenarioConfig cfg;
  cfg.n = g->n();
  cfg.phi = FieldPreset("random_smooth", amp, seed);
  return build_initial(cfg).phi;
}

MapField equator_wrap(const GridPtr& g) {
  return MapField(Target::sphere(2, 1.0),
                  {ScalarField::from_function(g, [](double x, double) { return std::cos(2 * pi * x); }),
                   ScalarField::from_function(g, [](double x, double) { return std::sin(2 * pi * x); }),
                   ScalarField(g, 0.0)});
}

}  // namespace

TEST_CASE("trace-free tensor") {
  const auto g = Grid::create(32);
  const ScalarField zero(g, 0.0);
  SUBCASE("constant map") {
    const MapField c(Target::sphere(2, 1.0), {ScalarField(g, 1.0), ScalarField(g, 0.0), ScalarField(g, 0.0)});
    CHECK(tracefree_tensor(c, zero, FlatMetric(), 1.0).max_abs() == 0.0);
  }
  SUBCASE("equator wrap") {
    const SymTensorField s = tracefree_tensor(equator_wrap(g), zero, FlatMetric(), 1.0);
    CHECK(s.xx.min() == doctest::Approx(4 * pi * pi).epsilon(1e-12));
    CHECK(s.xx.max() == doctest::Approx(4 * pi * pi).epsilon(1e-12));
    CHECK(s.yy.max() == doctest::Approx(-4 * pi * pi).epsilon(1e-12));
    CHECK(s.xy.max_abs() < 1e-11);
    // scales linearly in alpha, pointwise by e^{-2u}
    const SymTensorField s3 = tracefree_tensor(equator_wrap(g), ScalarField(g, 0.5), FlatMetric(), 3.0);
    CHECK(s3.xx.max() == doctest::Approx(3.0 * std::exp(-1.0) * 4 * pi * pi).epsilon(1e-12));
  }
  SUBCASE("conformal map has no trace-free part") {
    // Clifford torus x -> (cos, sin, cos, sin)(2 pi .) is conformal for g0 = I
    const MapField clifford(
        Target::sphere(3, std::sqrt(2.0)),
        {ScalarField::from_function(g, [](double x, double) { return std::cos(2 * pi * x); }),
         ScalarField::from_function(g, [](double x, double) { return std::sin(2 * pi * x); }),
         ScalarField::from_function(g, [](double, double y) { return std::cos(2 * pi * y); }),
         ScalarField::from_function(g, [](double, double y) { return std::sin(2 * pi * y); })});
    CHECK(tracefree_tensor(clifford, zero, FlatMetric(), 2.0).max_abs() < 1e-10);
  }
  SUBCASE("trace-free for random data and a sheared metric") {
    const FlatMetric g0(1.0, 0.5, 1.25);
    const SymTensorField s = tracefree_tensor(random_map(g, 11, 0.4), random_smooth_field(g, 0.2, 5), g0, 1.0);
    CHECK(s.max_trace(g0) < 1e-12 * s.max_abs());
  }
}

TEST_CASE("horizontal projection") {
  const auto g = Grid::create(16);
  CHECK(project_horizontal(SymTensorField(g), FlatMetric()).h.max_abs() == 0.0);
  const FlatMetric g0(1.0, 0.5, 1.25);
  // trace-free w.r.t. g0: tr(g0^{-1} m) = 0
  const Sym2 m{0.3, 0.2, 0.3 * g0.c() / g0.a() - 2 * 0.2 * g0.b() / g0.a() + 0.0};
  const Sym2 gi = g0.inverse();
  const Sym2 tf = m - g0.matrix() * (0.5 * trace_with(m, gi));
  const HorizontalVelocity h = project_horizontal(constant_tensor(g, tf), g0);
  CHECK((h.h - tf).max_abs() < 1e-15);
  const auto wave = ScalarField::from_function(g, [](double x, double) { return std::sin(2 * pi * x); });
  CHECK(project_horizontal(scaled_tensor(wave, tf), g0).h.max_abs() < 1e-15);
  // pure trace is removed
  CHECK(project_horizontal(constant_tensor(g, g0.matrix() * 2.0), g0).h.max_abs() < 1e-15);
}

TEST_CASE("rho solve") {
  const auto g = Grid::create(32);
  CHECK(solve_rho(SymTensorField(g), FlatMetric()).max_abs() == 0.0);
  CHECK(solve_rho(constant_tensor(g, {1.0, 0.3, -1.0}), FlatMetric()).max_abs() < 1e-15);

  const auto w = ScalarField::from_function(g, [](double x, double) { return std::sin(2 * pi * x); });
  const SymTensorField s(w, ScalarField(g), -1.0 * w);
  const ScalarField rho = solve_rho(s, FlatMetric());
  CHECK((rho + w).max_abs() < 1e-13);
  // -Delta rho = delta delta S, with delta delta S = -4 pi^2 sin(2 pi x)
  CHECK((-1.0 * laplacian(rho, FlatMetric()) - double_divergence(s, FlatMetric())).max_abs() < 1e-10);
  CHECK((double_divergence(s, FlatMetric()) + 4 * pi * pi * w).max_abs() < 1e-10);

  const FlatMetric g0(1.0, 0.5, 1.25);
  const SymTensorField r = tracefree_tensor(random_map(g, 2, 0.4), ScalarField(g), g0, 1.0);
  const ScalarField rr = solve_rho(r, g0);
  CHECK(std::abs(rr.mean()) < 1e-13);
  CHECK((-1.0 * laplacian(rr, g0) - double_divergence(r, g0)).max_abs() < 1e-9 * double_divergence(r, g0).max_abs());
}

TEST_CASE("divergence and Lie derivative against coordinate formulas") {
  const auto g = Grid::create(32);
  const FlatMetric g0(1.3, -0.4, (1.0 + 0.16) / 1.3);
  const SymTensorField s = tracefree_tensor(random_map(g, 4, 0.4), ScalarField(g), g0, 1.0);
  const VectorField d = divergence(s, g0);
  const auto [ox, oy] = div_oracle(s, g0);
  CHECK((d.x - ox).max_abs() < 1e-9 * ox.max_abs());
  CHECK((d.y - oy).max_abs() < 1e-9 * oy.max_abs());

  const VectorField x(random_smooth_field(g, 1.0, 8), random_smooth_field(g, 1.0, 9));
  const SymTensorField l = lie_derivative(x, g0);
  const SymTensorField lo = lie_oracle(x, g0);
  CHECK((l - lo).max_abs() < 1e-10 * lo.max_abs());

  // <L_X g, S> = 2 int X^j (delta S)_j
  const double lhs = inner_product(l, s, g0);
  const double rhs = 2.0 * integrate(x.x * d.x + x.y * d.y, g0);
  CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));
}

TEST_CASE("X solve") {
  const auto g = Grid::create(32);
  CHECK(solve_X(SymTensorField(g), ScalarField(g), FlatMetric()).x.max_abs() == 0.0);
  const VectorField c = solve_X(constant_tensor(g, {2.0, 1.0, -2.0}), ScalarField(g), FlatMetric());
  CHECK(c.x.max_abs() < 1e-15);
  CHECK(c.y.max_abs() < 1e-15);

  const FlatMetric g0(1.0, 0.5, 1.25);
  SUBCASE("single mode") {
    const auto w = ScalarField::from_function(g, [](double x, double y) { return std::cos(2 * pi * (x + 2 * y)); });
    const SymTensorField s = scaled_tensor(w, {1.0, 0.25, -0.6});
    const ScalarField rho = solve_rho(s, g0);
    const VectorField x = solve_X(s, rho, g0);
    // delta(L_X g0) = delta(S - rho g0)
    const auto [lx, ly] = div_oracle(lie_oracle(x, g0), g0);
    const auto [rx, ry] = div_oracle(s - scaled_tensor(rho, g0.matrix()), g0);
    CHECK((lx - rx).max_abs() < 1e-10 * (1.0 + rx.max_abs()));
    CHECK((ly - ry).max_abs() < 1e-10 * (1.0 + ry.max_abs()));
  }
  SUBCASE("random data: residual and div X = -rho") {
    const SymTensorField s = tracefree_tensor(random_map(g, 7, 0.4), random_smooth_field(g, 0.2, 1), g0, 1.0);
    const ScalarField rho = solve_rho(s, g0);
    const VectorField x = solve_X(s, rho, g0);
    const auto [lx, ly] = div_oracle(lie_oracle(x, g0), g0);
    const auto [rx, ry] = div_oracle(s - scaled_tensor(rho, g0.matrix()), g0);
    CHECK((lx - rx).max_abs() < 1e-9 * rx.max_abs());
    CHECK((ly - ry).max_abs() < 1e-9 * ry.max_abs());
    const ScalarField div = partial(x.x, Axis::x) + partial(x.y, Axis::y);
    CHECK((div + rho).max_abs() < 1e-9 * rho.max_abs());
    CHECK(std::abs(x.x.mean()) < 1e-14);
    CHECK(std::abs(x.y.mean()) < 1e-14);
  }
}

TEST_CASE("decomposition") {
  const auto g = Grid::create(32);
  SUBCASE("constant map") {
    const MapField c(Target::sphere(2, 1.0), {ScalarField(g, 0.0), ScalarField(g, 0.0), ScalarField(g, 1.0)});
    const Decomposition d = decompose(c, random_smooth_field(g, 0.3, 2), FlatMetric(), 1.0);
    CHECK(d.rho.max_abs() == 0.0);
    CHECK(d.x.max_norm(FlatMetric()) == 0.0);
    CHECK(d.horizontal.h.max_abs() == 0.0);
  }
  SUBCASE("equator wrap") {
    const Decomposition d = decompose(equator_wrap(g), ScalarField(g), FlatMetric(), 1.0);
    CHECK(d.rho.max_abs() < 1e-12);
    CHECK(d.x.max_norm(FlatMetric()) < 1e-12);
    CHECK(d.horizontal.h.xx == doctest::Approx(4 * pi * pi).epsilon(1e-12));
    CHECK(d.horizontal.h.yy == doctest::Approx(-4 * pi * pi).epsilon(1e-12));
    CHECK(std::abs(d.horizontal.h.xy) < 1e-12);
  }
  SUBCASE("random data: reconstruction and orthogonality") {
    const FlatMetric g0(1.2, -0.3, (1.0 + 0.09) / 1.2);
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      const Decomposition d = decompose(random_map(g, seed, 0.5), random_smooth_field(g, 0.3, seed + 100), g0, 1.0);
      const double ns = l2_norm(d.s, g0);
      CHECK(l2_norm(reconstruction_residual(d, g0), g0) < 1e-10 * (1.0 + ns));

      const SymTensorField rho_g = scaled_tensor(d.rho, g0.matrix());
      const SymTensorField lie = lie_derivative(d.x, g0);
      const SymTensorField h = constant_tensor(g, d.horizontal.h);
      const double scale = ns * ns;
      CHECK(std::abs(inner_product(h, lie, g0)) < 1e-10 * scale);
      CHECK(std::abs(inner_product(h, rho_g, g0)) < 1e-10 * scale);
      CHECK(std::abs(inner_product(rho_g, d.s, g0)) < 1e-10 * scale);
      // rho g0 and L_X g0 overlap by -2 ||rho||^2 since div X = -rho
      const double nr = l2_norm(d.rho, g0);
      CHECK(inner_product(rho_g, lie, g0) == doctest::Approx(-2.0 * nr * nr).epsilon(1e-9));
    }
  }
}
