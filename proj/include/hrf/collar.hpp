#pragma once

// Closed-form geometry of the standard collar around a closed geodesic of
// length ell on a hyperbolic surface:
//   Col(ell) = ((-Y, Y) x S^1, rho(s)^2 (ds^2 + dtheta^2)),
//   rho(s) = ell / (2 pi cos(ell s / 2 pi)),
//   Y(ell) = (2 pi / ell) (pi/2 - arctan(sinh(ell/2))),
// admissible for 0 < ell < 2 arsinh(1).

#include <stdexcept>

namespace hrf::collar {

class OutOfRange : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Upper end of the admissible length interval, 2 arsinh(1).
double max_length();

/// Y(ell). Throws OutOfRange outside (0, 2 arsinh(1)).
double halfwidth(double ell);

/// rho(s). Throws OutOfRange unless |s| < Y(ell).
double density(double ell, double s);

/// ||dz^2||_{L^1(Col)} = 8 pi Y(ell), closed form.
double dz2_l1_norm(double ell);

/// The same norm by adaptive Gauss-Kronrod quadrature of
/// int_{-Y}^{Y} int_0^{2 pi} |dz^2|_{g} rho^2 dtheta ds with |dz^2|_g = 2 / rho^2.
double dz2_l1_norm_quadrature(double ell);

/// d ell / dt = -(2 pi^2 / ell) Re(b0). Throws OutOfRange for ell <= 0.
double length_derivative(double ell, double b0_real);

/// Gronwall lower bound min(arsinh(1), inj0) exp(-C int ||Psi||_{L^inf} dt).
double inj_lower_bound(double inj0, double c, double psi_linf_integral);

}  // namespace hrf::collar
