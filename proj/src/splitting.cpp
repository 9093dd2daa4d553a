#include "hrf/splitting.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace hrf {

namespace {

using Complex = Grid::Complex;
constexpr double two_pi = 2.0 * std::numbers::pi;
constexpr Complex I{0.0, 1.0};

// Wave vector used for every derivative in this module. Nyquist components
// are dropped, matching first derivatives in the grid module, so the discrete
// delta, delta delta and L_X operators are exact adjoints of each other.
struct WaveVector {
  double kx, ky;
};

WaveVector wave(const Grid& grid, int i, int j) {
  return {grid.is_nyquist_x(i) ? 0.0 : two_pi * grid.mode_x(i),
          grid.is_nyquist_y(j) ? 0.0 : two_pi * grid.mode_y(j)};
}

struct TensorSpectrum {
  Spectrum xx, xy, yy;
};

TensorSpectrum forward(const SymTensorField& s) {
  return {hrf::forward(s.xx), hrf::forward(s.xy), hrf::forward(s.yy)};
}

// Checks that a right-hand side built from derivatives has no mean.
void require_zero_mode(Complex c, const Grid& grid, const char* what) {
  const double mean = std::abs(c) / static_cast<double>(grid.size());
  if (mean > 1e-8) {
    throw std::runtime_error(std::string(what) + ": zero mode of right-hand side is " +
                             std::to_string(mean) + ", expected 0");
  }
}

Spectrum rho_spectrum(const TensorSpectrum& s, const FlatMetric& g0) {
  const Grid& grid = *s.xx.grid();
  const Sym2 gi = g0.inverse();
  Spectrum rho(s.xx.grid());
  const int n = grid.n();
  const int cols = grid.spectral_cols();
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < cols; ++j) {
      const auto [kx, ky] = wave(grid, i, j);
      // kappa = g^{-1} k
      const double cx = gi.xx * kx + gi.xy * ky;
      const double cy = gi.xy * kx + gi.yy * ky;
      const Complex ddiv =
          -(cx * cx * s.xx.at(i, j) + 2.0 * cx * cy * s.xy.at(i, j) + cy * cy * s.yy.at(i, j));
      const double k2 = kx * cx + ky * cy;
      if (k2 == 0.0) {
        if (i == 0 && j == 0) require_zero_mode(ddiv, grid, "solve_rho");
        rho.at(i, j) = 0.0;
        continue;
      }
      rho.at(i, j) = ddiv / k2;
    }
  }
  return rho;
}

// Returns the raised components (X^x, X^y).
std::pair<Spectrum, Spectrum> x_spectrum(const TensorSpectrum& s, const Spectrum& rho, const FlatMetric& g0) {
  const Grid& grid = *s.xx.grid();
  const Sym2& g = g0.matrix();
  const Sym2 gi = g0.inverse();
  Spectrum xs(s.xx.grid()), ys(s.xx.grid());
  const int n = grid.n();
  const int cols = grid.spectral_cols();
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < cols; ++j) {
      const auto [kx, ky] = wave(grid, i, j);
      const double cx = gi.xx * kx + gi.xy * ky;
      const double cy = gi.xy * kx + gi.yy * ky;
      // T = S - rho g
      const Complex txx = s.xx.at(i, j) - rho.at(i, j) * g.xx;
      const Complex txy = s.xy.at(i, j) - rho.at(i, j) * g.xy;
      const Complex tyy = s.yy.at(i, j) - rho.at(i, j) * g.yy;
      // c_j = (delta T)^_j = -i kappa^k T_kj
      const Complex c0 = -I * (cx * txx + cy * txy);
      const Complex c1 = -I * (cx * txy + cy * tyy);
      const double k2 = kx * cx + ky * cy;
      if (k2 == 0.0) {
        if (i == 0 && j == 0) {
          require_zero_mode(c0, grid, "solve_X");
          require_zero_mode(c1, grid, "solve_X");
        }
        xs.at(i, j) = 0.0;
        ys.at(i, j) = 0.0;
        continue;
      }
      // M = |k|^2 Id + k kappa^T has det 2|k|^4 and
      // M^{-1} = (Id - k kappa^T / (2|k|^2)) / |k|^2.
      const Complex kc = cx * c0 + cy * c1;
      const Complex low0 = (c0 - kx * kc / (2.0 * k2)) / k2;
      const Complex low1 = (c1 - ky * kc / (2.0 * k2)) / k2;
      xs.at(i, j) = gi.xx * low0 + gi.xy * low1;
      ys.at(i, j) = gi.xy * low0 + gi.yy * low1;
    }
  }
  return {std::move(xs), std::move(ys)};
}

}  // namespace

// ---------------------------------------------------------------------------

double SymTensorField::max_abs() const { return std::max({xx.max_abs(), xy.max_abs(), yy.max_abs()}); }

double SymTensorField::max_trace(const FlatMetric& g) const {
  const Sym2 gi = g.inverse();
  double worst = 0.0;
  for (std::size_t p = 0; p < xx.size(); ++p) worst = std::max(worst, std::abs(trace_with(at(p), gi)));
  return worst;
}

SymTensorField& SymTensorField::operator+=(const SymTensorField& o) {
  xx += o.xx;
  xy += o.xy;
  yy += o.yy;
  return *this;
}

SymTensorField& SymTensorField::operator-=(const SymTensorField& o) {
  xx -= o.xx;
  xy -= o.xy;
  yy -= o.yy;
  return *this;
}

SymTensorField& SymTensorField::operator*=(double s) {
  xx *= s;
  xy *= s;
  yy *= s;
  return *this;
}

SymTensorField operator+(SymTensorField a, const SymTensorField& b) { return a += b; }
SymTensorField operator-(SymTensorField a, const SymTensorField& b) { return a -= b; }
SymTensorField operator*(double s, SymTensorField a) { return a *= s; }

SymTensorField constant_tensor(const GridPtr& grid, const Sym2& m) {
  return {ScalarField(grid, m.xx), ScalarField(grid, m.xy), ScalarField(grid, m.yy)};
}

SymTensorField scaled_tensor(const ScalarField& f, const Sym2& m) {
  return {m.xx * f, m.xy * f, m.yy * f};
}

double VectorField::max_norm(const FlatMetric& g) const {
  double worst = 0.0;
  for (std::size_t p = 0; p < x.size(); ++p) worst = std::max(worst, g.quadratic(x[p], y[p]));
  return std::sqrt(worst);
}

double inner_product(const SymTensorField& a, const SymTensorField& b, const FlatMetric& g0) {
  const Sym2 gi = g0.inverse();
  ScalarField integrand(a.grid());
  for (std::size_t p = 0; p < integrand.size(); ++p) integrand[p] = contract(a.at(p), b.at(p), gi);
  return integrate(integrand, g0);
}

double l2_norm(const SymTensorField& a, const FlatMetric& g0) {
  return std::sqrt(std::max(0.0, inner_product(a, a, g0)));
}

double l2_norm(const ScalarField& f, const FlatMetric& g0) { return std::sqrt(integrate(f * f, g0)); }

VectorField divergence(const SymTensorField& s, const FlatMetric& g0) {
  const TensorSpectrum ss = forward(s);
  const Grid& grid = *s.grid();
  const Sym2 gi = g0.inverse();
  Spectrum d0(s.grid()), d1(s.grid());
  for (int i = 0; i < grid.n(); ++i) {
    for (int j = 0; j < grid.spectral_cols(); ++j) {
      const auto [kx, ky] = wave(grid, i, j);
      const double cx = gi.xx * kx + gi.xy * ky;
      const double cy = gi.xy * kx + gi.yy * ky;
      d0.at(i, j) = -I * (cx * ss.xx.at(i, j) + cy * ss.xy.at(i, j));
      d1.at(i, j) = -I * (cx * ss.xy.at(i, j) + cy * ss.yy.at(i, j));
    }
  }
  return {inverse(d0), inverse(d1)};
}

ScalarField double_divergence(const SymTensorField& s, const FlatMetric& g0) {
  const TensorSpectrum ss = forward(s);
  const Grid& grid = *s.grid();
  const Sym2 gi = g0.inverse();
  Spectrum out(s.grid());
  for (int i = 0; i < grid.n(); ++i) {
    for (int j = 0; j < grid.spectral_cols(); ++j) {
      const auto [kx, ky] = wave(grid, i, j);
      const double cx = gi.xx * kx + gi.xy * ky;
      const double cy = gi.xy * kx + gi.yy * ky;
      out.at(i, j) = -(cx * cx * ss.xx.at(i, j) + 2.0 * cx * cy * ss.xy.at(i, j) + cy * cy * ss.yy.at(i, j));
    }
  }
  return inverse(out);
}

SymTensorField lie_derivative(const VectorField& x, const FlatMetric& g0) {
  const Sym2& g = g0.matrix();
  // Lowered components X_j = g_jk X^k, then (L_X g)_ij = d_i X_j + d_j X_i.
  const ScalarField lx = g.xx * x.x + g.xy * x.y;
  const ScalarField ly = g.xy * x.x + g.yy * x.y;
  const Spectrum sx = forward(lx);
  const Spectrum sy = forward(ly);
  return {2.0 * inverse(sx.partial(Axis::x)), inverse(sx.partial(Axis::y)) + inverse(sy.partial(Axis::x)),
          2.0 * inverse(sy.partial(Axis::y))};
}

SymTensorField tracefree_tensor(const MapField& phi, const ScalarField& u, const FlatMetric& g0,
                                double alpha) {
  const PullbackMetric pb = pullback(gradient(phi));
  const Sym2& g = g0.matrix();
  const Sym2 gi = g0.inverse();
  SymTensorField s(u.grid());
  for (std::size_t p = 0; p < u.size(); ++p) {
    const double e = 0.5 * (gi.xx * pb.xx[p] + 2.0 * gi.xy * pb.xy[p] + gi.yy * pb.yy[p]);
    const double w = 2.0 * alpha * std::exp(-2.0 * u[p]);
    s.xx[p] = w * (pb.xx[p] - e * g.xx);
    s.xy[p] = w * (pb.xy[p] - e * g.xy);
    s.yy[p] = w * (pb.yy[p] - e * g.yy);
  }
  return {dealias(s.xx), dealias(s.xy), dealias(s.yy)};
}

HorizontalVelocity project_horizontal(const SymTensorField& s, const FlatMetric& g0) {
  const Sym2 mean{s.xx.mean(), s.xy.mean(), s.yy.mean()};
  const double tr = trace_with(mean, g0.inverse());
  return {mean - g0.matrix() * (0.5 * tr)};
}

ScalarField solve_rho(const SymTensorField& s, const FlatMetric& g0) {
  return inverse(rho_spectrum(forward(s), g0));
}

VectorField solve_X(const SymTensorField& s, const ScalarField& rho, const FlatMetric& g0) {
  auto [xs, ys] = x_spectrum(forward(s), hrf::forward(rho), g0);
  return {inverse(xs), inverse(ys)};
}

namespace {

Decomposition split_spectra(SymTensorField s, const TensorSpectrum& ss, const FlatMetric& g0) {
  const Sym2 mean{ss.xx.mean(), ss.xy.mean(), ss.yy.mean()};
  const HorizontalVelocity h{mean - g0.matrix() * (0.5 * trace_with(mean, g0.inverse()))};
  const Spectrum rho = rho_spectrum(ss, g0);
  auto [xs, ys] = x_spectrum(ss, rho, g0);
  return Decomposition{std::move(s), h, inverse(rho), VectorField(inverse(std::move(xs)), inverse(std::move(ys)))};
}

}  // namespace

Decomposition decompose_tensor(SymTensorField s, const FlatMetric& g0) {
  const TensorSpectrum ss = forward(s);
  return split_spectra(std::move(s), ss, g0);
}

Decomposition decompose_dealiased(const SymTensorField& s, const FlatMetric& g0) {
  TensorSpectrum ss = forward(s);
  ss.xx = ss.xx.dealiased();
  ss.xy = ss.xy.dealiased();
  ss.yy = ss.yy.dealiased();
  SymTensorField smooth(inverse(ss.xx), inverse(ss.xy), inverse(ss.yy));
  return split_spectra(std::move(smooth), ss, g0);
}

Decomposition decompose(const MapField& phi, const ScalarField& u, const FlatMetric& g0, double alpha) {
  return decompose_tensor(tracefree_tensor(phi, u, g0, alpha), g0);
}

SymTensorField reconstruction_residual(const Decomposition& d, const FlatMetric& g0) {
  SymTensorField r = scaled_tensor(d.rho, g0.matrix());
  r += lie_derivative(d.x, g0);
  r += constant_tensor(d.s.grid(), d.horizontal.h);
  r -= d.s;
  return r;
}

}  // namespace hrf
