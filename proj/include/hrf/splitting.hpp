#pragma once

// Decomposition of the weighted trace-free tensor S = e^{-2u} T°(phi, g)
// into a conformal part rho*g0, a Lie derivative L_X g0 and a horizontal part
// H (constant, g0-trace-free):
//
//   S = rho g0 + L_X g0 + H.
//
// Conventions (constant g0, so no Christoffel symbols):
//   (delta S)_j      = -g0^{ik} d_i S_kj
//   delta delta S    =  g0^{ik} g0^{jl} d_i d_j S_kl
//   (L_X g0)_ij      =  g0_kj d_i X^k + g0_ik d_j X^k
//   delta* X         = -L_X g0
// rho solves -Delta rho = delta delta S with zero mean, X solves
// delta(L_X g0) = delta(S - rho g0) with zero componentwise mean. Taking the
// g0-trace of the decomposition gives div X = -rho.

#include "hrf/grid.hpp"
#include "hrf/metric.hpp"
#include "hrf/target.hpp"

namespace hrf {

/// Symmetric 2-tensor field in coordinates.
struct SymTensorField {
  ScalarField xx, xy, yy;

  explicit SymTensorField(const GridPtr& grid) : xx(grid), xy(grid), yy(grid) {}
  SymTensorField(ScalarField a, ScalarField b, ScalarField c)
      : xx(std::move(a)), xy(std::move(b)), yy(std::move(c)) {}

  const GridPtr& grid() const { return xx.grid(); }
  Sym2 at(std::size_t p) const { return {xx[p], xy[p], yy[p]}; }
  double max_abs() const;
  /// max over points of |g^{ij} S_ij|.
  double max_trace(const FlatMetric& g) const;

  SymTensorField& operator+=(const SymTensorField& o);
  SymTensorField& operator-=(const SymTensorField& o);
  SymTensorField& operator*=(double s);
};

SymTensorField operator+(SymTensorField a, const SymTensorField& b);
SymTensorField operator-(SymTensorField a, const SymTensorField& b);
SymTensorField operator*(double s, SymTensorField a);

/// Tensor field equal to the constant matrix m everywhere.
SymTensorField constant_tensor(const GridPtr& grid, const Sym2& m);
/// f * m pointwise.
SymTensorField scaled_tensor(const ScalarField& f, const Sym2& m);

/// Vector field X = X^x d_x + X^y d_y.
struct VectorField {
  ScalarField x, y;
  explicit VectorField(const GridPtr& grid) : x(grid), y(grid) {}
  VectorField(ScalarField a, ScalarField b) : x(std::move(a)), y(std::move(b)) {}
  double max_norm(const FlatMetric& g) const;
};

/// Constant, g0-trace-free velocity of the horizontal curve g0(t).
struct HorizontalVelocity {
  Sym2 h;
};

/// <A, B>_{L^2(g0)} = int g0^{ik} g0^{jl} A_ij B_kl d mu_{g0}.
double inner_product(const SymTensorField& a, const SymTensorField& b, const FlatMetric& g0);
double l2_norm(const SymTensorField& a, const FlatMetric& g0);
double l2_norm(const ScalarField& f, const FlatMetric& g0);

/// 1-form delta S (lowered index), see header comment for the sign.
VectorField divergence(const SymTensorField& s, const FlatMetric& g0);
ScalarField double_divergence(const SymTensorField& s, const FlatMetric& g0);
SymTensorField lie_derivative(const VectorField& x, const FlatMetric& g0);

/// S = 2 alpha e^{-2u} (d phi (x) d phi - e(phi, g0) g0), dealiased.
SymTensorField tracefree_tensor(const MapField& phi, const ScalarField& u, const FlatMetric& g0,
                                double alpha);

/// Grid mean of S with the g0-trace part removed.
HorizontalVelocity project_horizontal(const SymTensorField& s, const FlatMetric& g0);

/// Zero-mean solution of -Delta_{g0} rho = delta delta S. Throws
/// std::runtime_error if the zero mode of the right-hand side does not vanish.
ScalarField solve_rho(const SymTensorField& s, const FlatMetric& g0);

/// Zero-mean solution of delta delta* X = -delta(S - rho g0), solved as a
/// 2x2 system per Fourier mode.
VectorField solve_X(const SymTensorField& s, const ScalarField& rho, const FlatMetric& g0);

struct Decomposition {
  SymTensorField s;  ///< e^{-2u} T°, the decomposed tensor
  HorizontalVelocity horizontal;
  ScalarField rho;
  VectorField x;
};

/// Splits an already weighted trace-free tensor.
Decomposition decompose_tensor(SymTensorField s, const FlatMetric& g0);
/// Dealiases `s` first; the returned `s` is the dealiased tensor.
Decomposition decompose_dealiased(const SymTensorField& s, const FlatMetric& g0);
Decomposition decompose(const MapField& phi, const ScalarField& u, const FlatMetric& g0, double alpha);

/// rho g0 + L_X g0 + H - S; vanishes on band-limited data.
SymTensorField reconstruction_residual(const Decomposition& d, const FlatMetric& g0);

}  // namespace hrf
