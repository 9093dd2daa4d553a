#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "hrf/metric.hpp"

using namespace hrf;

TEST_CASE("flat metric validation") {
  CHECK_THROWS_AS(FlatMetric(1.0, 2.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(FlatMetric(-1.0, 0.0, -1.0), std::invalid_argument);
  CHECK_THROWS_AS(FlatMetric(0.0, 0.0, 1.0), std::invalid_argument);
  CHECK_NOTHROW(FlatMetric(1.0, 0.5, 1.25));
}

TEST_CASE("inverse and contractions") {
  const FlatMetric g(1.0, 0.5, 1.25);
  CHECK(g.det() == doctest::Approx(1.0));
  const Sym2 gi = g.inverse();
  // G G^{-1} = I
  CHECK(g.a() * gi.xx + g.b() * gi.xy == doctest::Approx(1.0));
  CHECK(g.a() * gi.xy + g.b() * gi.yy == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(g.b() * gi.xy + g.c() * gi.yy == doctest::Approx(1.0));
  CHECK(trace_with(g.matrix(), gi) == doctest::Approx(2.0));
  CHECK(contract(g.matrix(), g.matrix(), gi) == doctest::Approx(2.0));
  CHECK(g.quadratic(1.0, -1.0) == doctest::Approx(1.25));
  // largest eigenvalue of G^{-1} bounds the quadratic form on unit covectors
  for (int k = 0; k < 64; ++k) {
    const double th = 0.1 * k;
    CHECK(g.inverse_quadratic(std::cos(th), std::sin(th)) <= g.inverse_max_eigenvalue() + 1e-14);
  }
}
