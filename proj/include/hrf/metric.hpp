#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

namespace hrf {

/// Constant symmetric 2x2 matrix [[xx, xy], [xy, yy]].
struct Sym2 {
  double xx = 0.0;
  double xy = 0.0;
  double yy = 0.0;

  double det() const { return xx * yy - xy * xy; }
  double trace() const { return xx + yy; }

  Sym2 operator+(const Sym2& o) const { return {xx + o.xx, xy + o.xy, yy + o.yy}; }
  Sym2 operator-(const Sym2& o) const { return {xx - o.xx, xy - o.xy, yy - o.yy}; }
  Sym2 operator*(double s) const { return {s * xx, s * xy, s * yy}; }
  Sym2& operator+=(const Sym2& o) {
    xx += o.xx;
    xy += o.xy;
    yy += o.yy;
    return *this;
  }
  bool operator==(const Sym2&) const = default;

  double max_abs() const { return std::max({std::abs(xx), std::abs(xy), std::abs(yy)}); }
};

inline Sym2 operator*(double s, const Sym2& m) { return m * s; }

/// A constant positive-definite metric on the coordinate torus [0,1)^2 with
/// lattice Z^2. The flow keeps det = 1; intermediate Runge-Kutta stages may
/// carry a determinant that is off by O(dt^2), so the type itself only
/// enforces positive-definiteness and every operator uses sqrt(det) where the
/// volume form enters.
class FlatMetric {
 public:
  FlatMetric() : g_{1.0, 0.0, 1.0} {}
  FlatMetric(double a, double b, double c) : FlatMetric(Sym2{a, b, c}) {}
  explicit FlatMetric(const Sym2& g) : g_(g) {
    if (!(std::isfinite(g.xx) && std::isfinite(g.xy) && std::isfinite(g.yy)) || !(g.xx > 0.0) ||
        !(g.det() > 0.0)) {
      throw std::invalid_argument("FlatMetric: matrix is not positive-definite");
    }
  }

  static FlatMetric identity() { return FlatMetric(); }

  const Sym2& matrix() const { return g_; }
  double a() const { return g_.xx; }
  double b() const { return g_.xy; }
  double c() const { return g_.yy; }
  double det() const { return g_.det(); }
  double volume_factor() const { return std::sqrt(det()); }

  /// Entries of the inverse matrix g^{ij}.
  Sym2 inverse() const {
    const double d = det();
    return {g_.yy / d, -g_.xy / d, g_.xx / d};
  }

  /// Largest eigenvalue of g^{-1}.
  double inverse_max_eigenvalue() const {
    const Sym2 gi = inverse();
    const double half_tr = 0.5 * gi.trace();
    const double disc = std::sqrt(std::max(0.0, half_tr * half_tr - gi.det()));
    return half_tr + disc;
  }

  /// v^T g v for a coordinate vector v.
  double quadratic(double vx, double vy) const {
    return g_.xx * vx * vx + 2.0 * g_.xy * vx * vy + g_.yy * vy * vy;
  }

  /// g^{ij} k_i k_j for a covector k.
  double inverse_quadratic(double kx, double ky) const {
    const Sym2 gi = inverse();
    return gi.xx * kx * kx + 2.0 * gi.xy * kx * ky + gi.yy * ky * ky;
  }

  bool operator==(const FlatMetric&) const = default;

 private:
  Sym2 g_;
};

/// g^{ik} g^{jl} A_ij B_kl for constant symmetric tensors.
inline double contract(const Sym2& a, const Sym2& b, const Sym2& gi) {
  // (g^-1 A g^-1)_kl B_kl
  const double m_xx = gi.xx * (a.xx * gi.xx + a.xy * gi.xy) + gi.xy * (a.xy * gi.xx + a.yy * gi.xy);
  const double m_xy = gi.xx * (a.xx * gi.xy + a.xy * gi.yy) + gi.xy * (a.xy * gi.xy + a.yy * gi.yy);
  const double m_yy = gi.xy * (a.xx * gi.xy + a.xy * gi.yy) + gi.yy * (a.xy * gi.xy + a.yy * gi.yy);
  return m_xx * b.xx + 2.0 * m_xy * b.xy + m_yy * b.yy;
}

/// g^{ij} S_ij.
inline double trace_with(const Sym2& s, const Sym2& gi) {
  return gi.xx * s.xx + 2.0 * gi.xy * s.xy + gi.yy * s.yy;
}

}  // namespace hrf
