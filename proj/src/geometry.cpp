#include "hrf/geometry.hpp"

#include <cmath>
#include <stdexcept>

namespace hrf {

ScalarField gauss_curvature(const ScalarField& u, const FlatMetric& g0) {
  ScalarField k = laplacian(u, g0);
  for (std::size_t p = 0; p < k.size(); ++p) k[p] *= -std::exp(-2.0 * u[p]);
  return dealias(k);
}

std::array<long long, 2> shortest_lattice_vector(const FlatMetric& g0) {
  const Sym2& g = g0.matrix();
  // Integer basis vectors and their Gram entries, kept exact in the basis and
  // recomputed in floating point from the original form after each swap.
  std::array<long long, 2> b1{1, 0};
  std::array<long long, 2> b2{0, 1};
  auto dot = [&](const std::array<long long, 2>& p, const std::array<long long, 2>& q) {
    const double px = static_cast<double>(p[0]), py = static_cast<double>(p[1]);
    const double qx = static_cast<double>(q[0]), qy = static_cast<double>(q[1]);
    return g.xx * px * qx + g.xy * (px * qy + py * qx) + g.yy * py * qy;
  };
  if (dot(b1, b1) > dot(b2, b2)) std::swap(b1, b2);
  for (int iter = 0; iter < 200; ++iter) {
    const double mu = std::round(dot(b1, b2) / dot(b1, b1));
    const auto m = static_cast<long long>(mu);
    b2 = {b2[0] - m * b1[0], b2[1] - m * b1[1]};
    if (dot(b2, b2) >= dot(b1, b1)) break;
    std::swap(b1, b2);
  }
  // The reduced basis satisfies |2 <b1,b2>| <= |b1|^2 <= |b2|^2, so the
  // shortest vector is b1 unless b1 +- b2 ties or (from rounding) wins.
  std::array<long long, 2> best = b1;
  for (const auto& c : {std::array<long long, 2>{b1[0] + b2[0], b1[1] + b2[1]},
                        std::array<long long, 2>{b1[0] - b2[0], b1[1] - b2[1]}, b2}) {
    if (dot(c, c) < dot(best, best)) best = c;
  }
  return best;
}

double injectivity_radius(const FlatMetric& g0) {
  const auto v = shortest_lattice_vector(g0);
  return 0.5 * std::sqrt(g0.quadratic(static_cast<double>(v[0]), static_cast<double>(v[1])));
}

FlatMetric renormalize_det(const Sym2& g) {
  const FlatMetric checked(g);
  const double s = 1.0 / std::sqrt(checked.det());
  return FlatMetric(g * s);
}

}  // namespace hrf
