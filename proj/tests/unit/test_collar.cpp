#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include <cmath>
#include <numbers>

#include "hrf/collar.hpp"

using namespace hrf::collar;
using std::numbers::pi;
using Big = boost::multiprecision::cpp_bin_float_50;

namespace {

double big_halfwidth(double ell) {
  const Big l(ell);
  const Big p = boost::multiprecision::acos(Big(-1));
  return static_cast<double>((2 * p / l) * (p / 2 - boost::multiprecision::atan(boost::multiprecision::sinh(l / 2))));
}

}  // namespace

TEST_CASE("density") {
  CHECK(density(1.0, 0.0) == doctest::Approx(1.0 / (2 * pi)).epsilon(1e-15));
  for (double s : {0.1, 1.0, 3.0, 6.0}) CHECK(density(1.0, s) == density(1.0, -s));
  const Big p = boost::multiprecision::acos(Big(-1));
  const double hp = static_cast<double>(1 / (2 * p * boost::multiprecision::cos(1 / (2 * p))));
  CHECK(density(1.0, 1.0) == doctest::Approx(hp).epsilon(1e-15));
  CHECK_THROWS_AS(density(1.0, halfwidth(1.0)), OutOfRange);
  // increasing in |s|
  CHECK(density(0.5, 2.0) > density(0.5, 1.0));
}

TEST_CASE("density stays bounded at the collar boundary") {
  for (double ell : {1.0, 0.1, 1e-2, 1e-4}) {
    const double y = halfwidth(ell);
    const double edge = density(ell, std::nextafter(y, 0.0)) / density(ell, 0.0);
    CHECK(edge == doctest::Approx(1.0 / std::tanh(ell / 2)).epsilon(1e-8));
    // the 0.999 Y ratio is capped by 1 / sin(0.0005 pi) for every ell
    CHECK(density(ell, 0.999 * y) / density(ell, 0.0) < 1.0 / std::sin(0.0005 * pi));
  }
  CHECK(density(1e-4, std::nextafter(halfwidth(1e-4), 0.0)) / density(1e-4, 0.0) > 1e4);
}

TEST_CASE("half-width") {
  CHECK(halfwidth(1.0) == doctest::Approx(2 * pi * (pi / 2 - std::atan(std::sinh(0.5)))).epsilon(1e-15));
  for (double ell : {1e-3, 0.1, 0.5, 1.0, 1.7}) CHECK(halfwidth(ell) == doctest::Approx(big_halfwidth(ell)).epsilon(1e-14));
  CHECK(halfwidth(0.5) > halfwidth(1.0));
  CHECK(1e-6 * halfwidth(1e-6) == doctest::Approx(pi * pi).epsilon(1e-6));
  CHECK(halfwidth(1.0) <= pi * pi / 1.0);
  CHECK_THROWS_AS(halfwidth(0.0), OutOfRange);
  CHECK_THROWS_AS(halfwidth(-1.0), OutOfRange);
  CHECK_THROWS_AS(halfwidth(max_length()), OutOfRange);
  CHECK_NOTHROW(halfwidth(std::nextafter(max_length(), 0.0)));
}

TEST_CASE("quadratic differential norm") {
  for (double ell : {0.1, 0.5, 1.0, 1.7}) {
    CHECK(dz2_l1_norm_quadrature(ell) / dz2_l1_norm(ell) == doctest::Approx(1.0).epsilon(1e-10));
  }
  CHECK(dz2_l1_norm(1.0) == 8 * pi * halfwidth(1.0));
  CHECK(1e-6 * dz2_l1_norm(1e-6) == doctest::Approx(8 * pi * pi * pi).epsilon(1e-6));
}

TEST_CASE("length derivative") {
  CHECK(length_derivative(1.0, 0.0) == 0.0);
  CHECK(length_derivative(0.7, 2.0) == doctest::Approx(2 * length_derivative(0.7, 1.0)));
  CHECK(length_derivative(pi, 1.0) == doctest::Approx(-2 * pi).epsilon(1e-15));
  CHECK_THROWS_AS(length_derivative(0.0, 1.0), OutOfRange);
}

TEST_CASE("injectivity radius lower bound") {
  CHECK(inj_lower_bound(0.3, 1.0, 0.0) == 0.3);
  CHECK(inj_lower_bound(2.0, 1.0, 0.0) == doctest::Approx(std::asinh(1.0)));
  const double once = inj_lower_bound(0.5, 1.0, 0.7) / 0.5;
  const double twice = inj_lower_bound(0.5, 1.0, 1.4) / 0.5;
  CHECK(twice == doctest::Approx(once * once).epsilon(1e-15));
  CHECK(inj_lower_bound(0.5, 1.0, std::log(2.0)) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK_THROWS_AS(inj_lower_bound(0.0, 1.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(inj_lower_bound(0.5, 1.0, -1.0), std::invalid_argument);
}
