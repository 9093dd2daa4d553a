#include "hrf/grid.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace hrf {

namespace {

// The FFTW planner is not re-entrant.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

constexpr double two_pi = 2.0 * std::numbers::pi;

// fftw_malloc storage, so plans made without FFTW_UNALIGNED (and therefore
// with SIMD codelets) can run on it. One set per thread.
template <class T>
class AlignedBuffer {
 public:
  AlignedBuffer() = default;
  AlignedBuffer(const AlignedBuffer&) = delete;
  AlignedBuffer& operator=(const AlignedBuffer&) = delete;
  ~AlignedBuffer() { fftw_free(data_); }

  T* get(std::size_t count) {
    if (count > size_) {
      fftw_free(data_);
      data_ = static_cast<T*>(fftw_malloc(count * sizeof(T)));
      if (data_ == nullptr) throw std::bad_alloc();
      size_ = count;
    }
    return data_;
  }

 private:
  T* data_ = nullptr;
  std::size_t size_ = 0;
};

thread_local AlignedBuffer<double> real_scratch;
thread_local AlignedBuffer<fftw_complex> spectral_scratch;

}  // namespace

std::shared_ptr<const Grid> Grid::create(int n) {
  if (n < 8 || n % 2 != 0) {
    throw std::invalid_argument("grid resolution must be even and >= 8, got " + std::to_string(n));
  }
  return std::shared_ptr<const Grid>(new Grid(n));
}

Grid::Grid(int n) : n_(n) {
  // FFTW_ESTIMATE keeps plan selection (and hence round-off) identical across
  // runs. Transforms always execute on the aligned scratch buffers.
  const unsigned flags = FFTW_ESTIMATE;
  std::lock_guard lock(planner_mutex());
  double* r = real_scratch.get(size());
  fftw_complex* c = spectral_scratch.get(spectral_size());
  plan_forward_ = fftw_plan_dft_r2c_2d(n, n, r, c, flags);
  plan_inverse_ = fftw_plan_dft_c2r_2d(n, n, c, r, flags);
  if (plan_forward_ == nullptr || plan_inverse_ == nullptr) {
    throw std::runtime_error("FFTW planning failed");
  }
}

Grid::~Grid() {
  std::lock_guard lock(planner_mutex());
  fftw_destroy_plan(static_cast<fftw_plan>(plan_forward_));
  fftw_destroy_plan(static_cast<fftw_plan>(plan_inverse_));
}

bool Grid::retained(int i, int j) const {
  const int cut = dealias_cutoff();
  return std::abs(mode_x(i)) <= cut && mode_y(j) <= cut;
}

void Grid::forward(std::span<const double> in, std::span<Complex> out) const {
  auto* dst = reinterpret_cast<fftw_complex*>(out.data());
  // Out-of-place r2c leaves its input intact; the const_cast only satisfies the C API.
  auto* src = const_cast<double*>(in.data());
  const bool direct = fftw_alignment_of(src) == 0 && fftw_alignment_of(reinterpret_cast<double*>(dst)) == 0;
  if (direct) {
    fftw_execute_dft_r2c(static_cast<fftw_plan>(plan_forward_), src, dst);
    return;
  }
  double* r = real_scratch.get(size());
  fftw_complex* c = spectral_scratch.get(spectral_size());
  std::copy(in.begin(), in.end(), r);
  fftw_execute_dft_r2c(static_cast<fftw_plan>(plan_forward_), r, c);
  std::copy_n(reinterpret_cast<const Complex*>(c), spectral_size(), out.begin());
}

void Grid::inverse_destroying(std::span<Complex> in, std::span<double> out) const {
  auto* src = reinterpret_cast<fftw_complex*>(in.data());
  const bool direct = fftw_alignment_of(reinterpret_cast<double*>(src)) == 0 && fftw_alignment_of(out.data()) == 0;
  if (!direct) {
    inverse(in, out);
    return;
  }
  fftw_execute_dft_c2r(static_cast<fftw_plan>(plan_inverse_), src, out.data());
  const double norm = 1.0 / static_cast<double>(size());
  for (double& v : out) v *= norm;
}

void Grid::inverse(std::span<const Complex> in, std::span<double> out) const {
  double* r = real_scratch.get(size());
  fftw_complex* c = spectral_scratch.get(spectral_size());
  // c2r overwrites its input, so it always runs on the scratch copy.
  std::copy(in.begin(), in.end(), reinterpret_cast<Complex*>(c));
  fftw_execute_dft_c2r(static_cast<fftw_plan>(plan_inverse_), c, r);
  const double norm = 1.0 / static_cast<double>(size());
  for (std::size_t k = 0; k < size(); ++k) out[k] = r[k] * norm;
}

// ---------------------------------------------------------------------------
// ScalarField

ScalarField::ScalarField(GridPtr grid, double value)
    : grid_(std::move(grid)), values_(grid_->size(), value) {}

ScalarField::ScalarField(GridPtr grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(values.begin(), values.end()) {
  if (values_.size() != grid_->size()) {
    throw std::invalid_argument("ScalarField: value count does not match grid");
  }
}

ScalarField ScalarField::from_function(GridPtr grid, const std::function<double(double, double)>& f) {
  ScalarField out(grid);
  const int n = grid->n();
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) out.at(i, j) = f(grid->coord(i), grid->coord(j));
  }
  return out;
}

double ScalarField::mean() const {
  double s = 0.0;
  for (double v : values_) s += v;
  return s / static_cast<double>(values_.size());
}

double ScalarField::max_abs() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

double ScalarField::max() const { return *std::max_element(values_.begin(), values_.end()); }
double ScalarField::min() const { return *std::min_element(values_.begin(), values_.end()); }

bool ScalarField::all_finite() const {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

ScalarField& ScalarField::operator+=(const ScalarField& o) {
  for (std::size_t k = 0; k < values_.size(); ++k) values_[k] += o.values_[k];
  return *this;
}

ScalarField& ScalarField::operator-=(const ScalarField& o) {
  for (std::size_t k = 0; k < values_.size(); ++k) values_[k] -= o.values_[k];
  return *this;
}

ScalarField& ScalarField::operator*=(const ScalarField& o) {
  for (std::size_t k = 0; k < values_.size(); ++k) values_[k] *= o.values_[k];
  return *this;
}

ScalarField& ScalarField::operator*=(double s) {
  for (double& v : values_) v *= s;
  return *this;
}

ScalarField& ScalarField::operator+=(double s) {
  for (double& v : values_) v += s;
  return *this;
}

ScalarField operator+(ScalarField a, const ScalarField& b) { return a += b; }
ScalarField operator-(ScalarField a, const ScalarField& b) { return a -= b; }
ScalarField operator*(ScalarField a, const ScalarField& b) { return a *= b; }
ScalarField operator*(double s, ScalarField a) { return a *= s; }

// ---------------------------------------------------------------------------
// Spectrum

Spectrum::Spectrum(GridPtr grid) : grid_(std::move(grid)), coeffs_(grid_->spectral_size()) {}

double Spectrum::mean() const { return coeffs_[0].real() / static_cast<double>(grid_->size()); }

Spectrum Spectrum::partial(Axis axis) const {
  Spectrum out(grid_);
  const int n = grid_->n();
  const int cols = grid_->spectral_cols();
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < cols; ++j) {
      double k = 0.0;
      if (axis == Axis::x) {
        k = grid_->is_nyquist_x(i) ? 0.0 : two_pi * grid_->mode_x(i);
      } else {
        k = grid_->is_nyquist_y(j) ? 0.0 : two_pi * grid_->mode_y(j);
      }
      out.at(i, j) = Complex(0.0, k) * at(i, j);
    }
  }
  return out;
}

Spectrum Spectrum::laplacian(const FlatMetric& g) const {
  const Sym2 gi = g.inverse();
  Spectrum out(grid_);
  const int n = grid_->n();
  const int cols = grid_->spectral_cols();
  for (int i = 0; i < n; ++i) {
    const double kx = two_pi * grid_->mode_x(i);
    const double kx_odd = grid_->is_nyquist_x(i) ? 0.0 : kx;
    for (int j = 0; j < cols; ++j) {
      const double ky = two_pi * grid_->mode_y(j);
      const double ky_odd = grid_->is_nyquist_y(j) ? 0.0 : ky;
      const double symbol = gi.xx * kx * kx + 2.0 * gi.xy * kx_odd * ky_odd + gi.yy * ky * ky;
      out.at(i, j) = -symbol * at(i, j);
    }
  }
  return out;
}

Spectrum Spectrum::dealiased() const {
  Spectrum out = *this;
  const int n = grid_->n();
  const int cols = grid_->spectral_cols();
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < cols; ++j) {
      if (!grid_->retained(i, j)) out.at(i, j) = 0.0;
    }
  }
  return out;
}

Spectrum& Spectrum::operator+=(const Spectrum& o) {
  for (std::size_t k = 0; k < coeffs_.size(); ++k) coeffs_[k] += o.coeffs_[k];
  return *this;
}

Spectrum& Spectrum::operator*=(double s) {
  for (auto& c : coeffs_) c *= s;
  return *this;
}

Spectrum forward(const ScalarField& f) {
  Spectrum s(f.grid());
  f.grid()->forward(f.values(), s.coeffs());
  return s;
}

ScalarField inverse(const Spectrum& s) {
  ScalarField f(s.grid());
  s.grid()->inverse(s.coeffs(), f.values());
  return f;
}

ScalarField inverse(Spectrum&& s) {
  ScalarField f(s.grid());
  s.grid()->inverse_destroying(s.coeffs(), f.values());
  return f;
}

ScalarField partial(const ScalarField& f, Axis axis) { return inverse(forward(f).partial(axis)); }

ScalarField laplacian(const ScalarField& f, const FlatMetric& g) {
  return inverse(forward(f).laplacian(g));
}

double integrate(const ScalarField& f, const FlatMetric& g) { return f.mean() * g.volume_factor(); }

ScalarField dealias(const ScalarField& f) { return inverse(forward(f).dealiased()); }

}  // namespace hrf
