#pragma once

// Periodic pseudo-spectral calculus on the coordinate square [0,1)^2.
//
// Real fields live on an n x n collocation grid, stored row-major with x as
// the slow index: value(i, j) = f(i/n, j/n). Spectra use the real-to-complex
// layout n x (n/2 + 1); row i carries the x wave number mode_x(i), column j
// the y wave number j. Derivatives in coordinate direction a multiply mode k
// by 2*pi*i*k_a.

#include <complex>
#include <cstddef>
#include <functional>
#include <memory>
#include <new>
#include <span>
#include <vector>

#include "hrf/metric.hpp"

namespace hrf {

enum class Axis { x, y };

/// 64-byte aligned storage so transforms can run in place without copies.
template <class T>
struct AlignedAllocator {
  using value_type = T;
  static constexpr std::align_val_t alignment{64};

  AlignedAllocator() = default;
  template <class U>
  AlignedAllocator(const AlignedAllocator<U>&) {}

  T* allocate(std::size_t n) { return static_cast<T*>(::operator new(n * sizeof(T), alignment)); }
  void deallocate(T* p, std::size_t) { ::operator delete(p, alignment); }
  template <class U>
  bool operator==(const AlignedAllocator<U>&) const { return true; }
};

template <class T>
using AlignedVector = std::vector<T, AlignedAllocator<T>>;

class Grid {
 public:
  using Complex = std::complex<double>;

  /// Throws std::invalid_argument unless n is even and >= 8.
  static std::shared_ptr<const Grid> create(int n);

  ~Grid();
  Grid(const Grid&) = delete;
  Grid& operator=(const Grid&) = delete;

  int n() const { return n_; }
  std::size_t size() const { return static_cast<std::size_t>(n_) * n_; }
  int spectral_cols() const { return n_ / 2 + 1; }
  std::size_t spectral_size() const { return static_cast<std::size_t>(n_) * spectral_cols(); }
  double spacing() const { return 1.0 / n_; }
  double coord(int i) const { return static_cast<double>(i) / n_; }

  /// Signed integer wave number of spectral row i, in [-n/2, n/2).
  int mode_x(int i) const { return i < n_ / 2 ? i : i - n_; }
  /// Wave number of spectral column j (non-negative half plane).
  int mode_y(int j) const { return j; }
  bool is_nyquist_x(int i) const { return i == n_ / 2; }
  bool is_nyquist_y(int j) const { return j == n_ / 2; }

  /// Largest |k_i| kept by the two-thirds rule.
  int dealias_cutoff() const { return n_ / 3; }
  bool retained(int i, int j) const;

  /// Unnormalized forward transform (sum over grid points).
  void forward(std::span<const double> in, std::span<Complex> out) const;
  /// Inverse transform including the 1/n^2 normalization; `in` is not modified.
  void inverse(std::span<const Complex> in, std::span<double> out) const;
  /// Same, but may overwrite `in`.
  void inverse_destroying(std::span<Complex> in, std::span<double> out) const;

 private:
  explicit Grid(int n);

  int n_;
  void* plan_forward_;
  void* plan_inverse_;
};

using GridPtr = std::shared_ptr<const Grid>;

/// Real grid function.
class ScalarField {
 public:
  ScalarField() = default;
  explicit ScalarField(GridPtr grid, double value = 0.0);
  ScalarField(GridPtr grid, std::vector<double> values);

  static ScalarField from_function(GridPtr grid, const std::function<double(double, double)>& f);

  const GridPtr& grid() const { return grid_; }
  int n() const { return grid_->n(); }
  std::size_t size() const { return values_.size(); }

  double& operator[](std::size_t k) { return values_[k]; }
  double operator[](std::size_t k) const { return values_[k]; }
  double& at(int i, int j) { return values_[static_cast<std::size_t>(i) * n() + j]; }
  double at(int i, int j) const { return values_[static_cast<std::size_t>(i) * n() + j]; }

  std::span<double> values() { return values_; }
  std::span<const double> values() const { return values_; }

  double mean() const;
  double max_abs() const;
  double max() const;
  double min() const;
  bool all_finite() const;

  ScalarField& operator+=(const ScalarField& o);
  ScalarField& operator-=(const ScalarField& o);
  ScalarField& operator*=(const ScalarField& o);
  ScalarField& operator*=(double s);
  ScalarField& operator+=(double s);

  /// Pointwise map.
  template <class F>
  ScalarField map(F&& f) const {
    ScalarField out(grid_);
    for (std::size_t k = 0; k < values_.size(); ++k) out.values_[k] = f(values_[k]);
    return out;
  }

 private:
  GridPtr grid_;
  AlignedVector<double> values_;
};

ScalarField operator+(ScalarField a, const ScalarField& b);
ScalarField operator-(ScalarField a, const ScalarField& b);
ScalarField operator*(ScalarField a, const ScalarField& b);
ScalarField operator*(double s, ScalarField a);

/// Half-plane Fourier coefficients of a real field.
class Spectrum {
 public:
  using Complex = Grid::Complex;

  Spectrum() = default;
  explicit Spectrum(GridPtr grid);

  const GridPtr& grid() const { return grid_; }
  Complex& at(int i, int j) { return coeffs_[static_cast<std::size_t>(i) * grid_->spectral_cols() + j]; }
  const Complex& at(int i, int j) const {
    return coeffs_[static_cast<std::size_t>(i) * grid_->spectral_cols() + j];
  }
  std::span<Complex> coeffs() { return coeffs_; }
  std::span<const Complex> coeffs() const { return coeffs_; }

  /// Grid mean recovered from the zero mode.
  double mean() const;

  Spectrum partial(Axis axis) const;
  /// g^{ij} d_i d_j for the constant metric g.
  Spectrum laplacian(const FlatMetric& g) const;
  Spectrum dealiased() const;

  Spectrum& operator+=(const Spectrum& o);
  Spectrum& operator*=(double s);

 private:
  GridPtr grid_;
  AlignedVector<Complex> coeffs_;
};

Spectrum forward(const ScalarField& f);
ScalarField inverse(const Spectrum& s);
ScalarField inverse(Spectrum&& s);

/// Exact derivative of the trigonometric interpolant; Nyquist mode dropped.
ScalarField partial(const ScalarField& f, Axis axis);
/// Delta_g f = g^{ij} d_i d_j f (constant g has no Christoffel symbols).
ScalarField laplacian(const ScalarField& f, const FlatMetric& g);
/// Integral against d mu_g = sqrt(det g) dx dy.
double integrate(const ScalarField& f, const FlatMetric& g);
/// Two-thirds rule: modes with |k_x| > n/3 or |k_y| > n/3 are zeroed.
ScalarField dealias(const ScalarField& f);

}  // namespace hrf
