#include "hrf/collar.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <numbers>
#include <string>

namespace hrf::collar {

namespace {

constexpr double pi = std::numbers::pi;

void require_admissible(double ell) {
  if (!(ell > 0.0 && ell < max_length())) {
    throw OutOfRange("collar length " + std::to_string(ell) + " outside (0, 2 arsinh(1))");
  }
}

}  // namespace

double max_length() { return 2.0 * std::asinh(1.0); }

double halfwidth(double ell) {
  require_admissible(ell);
  return (2.0 * pi / ell) * (0.5 * pi - std::atan(std::sinh(0.5 * ell)));
}

double density(double ell, double s) {
  const double y = halfwidth(ell);
  if (!(std::abs(s) < y)) throw OutOfRange("s = " + std::to_string(s) + " outside the collar");
  return ell / (2.0 * pi * std::cos(ell * s / (2.0 * pi)));
}

double dz2_l1_norm(double ell) { return 8.0 * pi * halfwidth(ell); }

double dz2_l1_norm_quadrature(double ell) {
  using boost::math::quadrature::gauss_kronrod;
  const double y = halfwidth(ell);
  auto over_circle = [ell](double s) {
    const double rho = density(ell, s);
    auto integrand = [rho](double) { return (2.0 / (rho * rho)) * rho * rho; };
    return gauss_kronrod<double, 15>::integrate(integrand, 0.0, 2.0 * pi, 5, 1e-14);
  };
  // Open interval: Gauss-Kronrod nodes never touch the endpoints.
  return gauss_kronrod<double, 61>::integrate(over_circle, -y, y, 15, 1e-14);
}

double length_derivative(double ell, double b0_real) {
  if (!(ell > 0.0)) throw OutOfRange("geodesic length must be positive");
  return -2.0 * pi * pi * b0_real / ell;
}

double inj_lower_bound(double inj0, double c, double psi_linf_integral) {
  if (!(inj0 > 0.0)) throw std::invalid_argument("inj0 must be positive");
  if (!(c > 0.0)) throw std::invalid_argument("C must be positive");
  if (!(psi_linf_integral >= 0.0)) throw std::invalid_argument("integral of ||Psi|| must be >= 0");
  return std::min(std::asinh(1.0), inj0) * std::exp(-c * psi_linf_integral);
}

}  // namespace hrf::collar
