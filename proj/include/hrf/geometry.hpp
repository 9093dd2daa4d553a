#pragma once

#include <array>

#include "hrf/grid.hpp"
#include "hrf/metric.hpp"

namespace hrf {

/// Gauss curvature of g = e^{2u} g0 for flat g0: K = -e^{-2u} Delta_{g0} u,
/// dealiased.
ScalarField gauss_curvature(const ScalarField& u, const FlatMetric& g0);

/// Shortest nonzero vector of the lattice Z^2 under the quadratic form g0,
/// found by Lagrange-Gauss reduction. Ties are broken towards the first
/// reduced basis vector.
std::array<long long, 2> shortest_lattice_vector(const FlatMetric& g0);

/// Half the length of the shortest closed geodesic of (R^2/Z^2, g0).
double injectivity_radius(const FlatMetric& g0);

/// g / sqrt(det g). Throws std::invalid_argument if g is not positive-definite.
FlatMetric renormalize_det(const Sym2& g);

}  // namespace hrf
