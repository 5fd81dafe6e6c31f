// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <atomic>
#include <cmath>
#include <memory>
#include <mutex>
#include <numbers>
#include <span>
#include <utility>
#include <vector>

#include "fft.hpp"
#include "grid.hpp"

namespace hom4 {

using Spectrum = std::vector<Complex>;
using RealVec = std::array<double, 3>;

// ---------------------------------------------------------------------------
// Symmetric index pairs. A symmetric d x d matrix is stored by its upper
// triangle, enumerated row by row: (0,0), (0,1), ..., (0,d-1), (1,1), ...

int pair_count(int dim);
int pair_index(int dim, int i, int j);
std::pair<int, int> pair_of(int dim, int p);
/// Number of full-matrix entries a pair stands for (1 on the diagonal, 2 off).
double pair_weight(int dim, int p);

// ---------------------------------------------------------------------------

/// Real periodic scalar field. Values are the primary storage; the spectrum
/// (coefficients of exp(2 pi i k.x / period)) is computed on first use and
/// cached. Instances are immutable and cheap to copy.
class ScalarField {
 public:
  ScalarField() = default;
  ScalarField(GridSpec grid, std::vector<double> values);

  static ScalarField constant(GridSpec grid, double c);
  static ScalarField zeros(GridSpec grid) { return constant(grid, 0.0); }
  /// Builds the field whose spectrum is the Hermitian part of `coeffs`.
  static ScalarField from_spectrum(GridSpec grid, Spectrum coeffs);

  /// Samples f(x) at every node, x_j = idx_j * period / points.
  template <class F>
  static ScalarField sample(GridSpec grid, F&& f);

  const GridSpec& grid() const { return grid_; }
  bool empty() const { return !values_; }
  std::span<const double> values() const { return *values_; }
  const Spectrum& spectrum() const;
  double mean() const { return spectrum()[0].real(); }

  friend ScalarField operator+(const ScalarField& a, const ScalarField& b);
  friend ScalarField operator-(const ScalarField& a, const ScalarField& b);
  friend ScalarField operator*(double s, const ScalarField& a);

 private:
  struct SpectrumCache {
    std::once_flag once;
    std::atomic<bool> ready{false};
    Spectrum data;
  };

  bool has_spectrum() const { return cache_ && cache_->ready.load(std::memory_order_acquire); }
  static ScalarField with_spectrum(GridSpec grid, std::vector<double> values, Spectrum coeffs);

  GridSpec grid_;
  std::shared_ptr<const std::vector<double>> values_;
  std::shared_ptr<SpectrumCache> cache_;
};

/// Symmetric matrix-valued field; entry (i,j) and (j,i) share storage.
class MatrixField {
 public:
  MatrixField() = default;
  MatrixField(GridSpec grid, int dim, std::vector<ScalarField> pairs);

  static MatrixField zeros(GridSpec grid);

  const GridSpec& grid() const { return grid_; }
  int dim() const { return dim_; }
  const ScalarField& entry(int i, int j) const { return pairs_[pair_index(dim_, i, j)]; }
  const ScalarField& pair(int p) const { return pairs_[p]; }
  const std::vector<ScalarField>& pairs() const { return pairs_; }

  friend MatrixField operator+(const MatrixField& a, const MatrixField& b);
  friend MatrixField operator-(const MatrixField& a, const MatrixField& b);
  friend MatrixField operator*(double s, const MatrixField& a);

 private:
  GridSpec grid_;
  int dim_ = 0;
  std::vector<ScalarField> pairs_;
};

// ---------------------------------------------------------------------------
// Spectral calculus

/// Physical wavevector 2 pi k / period.
RealVec wavevector(const IntVec& k, double period);

/// Applies a Fourier multiplier m(xi, k, nyquist) to every coefficient.
template <class F>
ScalarField apply_multiplier(const ScalarField& u, F&& m);

/// Spectrum of the mixed derivative with per-axis orders. Coefficients on
/// Nyquist slots are set to zero so derivatives of real fields stay real.
Spectrum derivative_spectrum(const Spectrum& u, const GridSpec& grid, const IntVec& orders);
ScalarField derivative(const ScalarField& u, const IntVec& orders);
/// Derivative along a list of axes, e.g. {0, 1, 1} -> d^3/dx0 dx1^2.
ScalarField derivative_along(const ScalarField& u, std::span<const int> axes);

/// Hessian {D_ij u}.
MatrixField apply_D(const ScalarField& u);
/// div div eta = sum_ij D_ij eta_ij.
ScalarField apply_Dstar(const MatrixField& eta);

enum class Space { L2, H1, H2, H4, Hminus2 };
const char* space_name(Space s);

double sobolev_norm(const ScalarField& u, Space space);
double l2_norm(const MatrixField& eta);
/// Exact L2 inner products (Parseval). The matrix version is the Frobenius
/// pairing integrated over the grid.
double inner(const ScalarField& u, const ScalarField& v);
double inner(const MatrixField& a, const MatrixField& b);

/// Spectrum u_k / (-|xi|^2)^p for k != 0, zero at k = 0. Throws NonZeroMean
/// when |u_0| > 1e-10 * ||u||.
ScalarField inv_laplacian_power(const ScalarField& u, int p);

// ---------------------------------------------------------------------------
// Products and the 3/2 dealiasing pad

int padded_points(int points);
/// Zero-pads a spectrum from n to p points per axis; Nyquist slots of the
/// source are dropped.
Spectrum pad_spectrum(const Spectrum& s, int dim, int n, int p);
/// Keeps the non-Nyquist slots of an n-point grid out of a p-point spectrum.
Spectrum truncate_spectrum(const Spectrum& s, int dim, int p, int n);
/// Values of the spectral interpolant of u on the padded grid.
std::vector<double> padded_values(const ScalarField& u, int p);
std::vector<double> padded_values(const Spectrum& s, const GridSpec& grid, int p);
/// Coefficients on `grid` of a field given by values on the padded grid.
Spectrum truncate_from_padded(std::span<const double> values, const GridSpec& grid, int p);

ScalarField pointwise_product(const ScalarField& u, const ScalarField& v, bool dealias = true);
/// sum_i u_i v_i with one forward transform.
ScalarField sum_of_products(std::span<const std::pair<ScalarField, ScalarField>> terms,
                            bool dealias = true);

void require_same_grid(const GridSpec& a, const GridSpec& b, const char* what);

// ---------------------------------------------------------------------------
// Template definitions

template <class F>
ScalarField ScalarField::sample(GridSpec grid, F&& f) {
  grid.validate();
  std::vector<double> v(grid.size());
  const double h = grid.spacing();
  for (std::size_t l = 0; l < v.size(); ++l) {
    IntVec idx = multi_index(grid.dim, grid.points, l);
    RealVec x{0.0, 0.0, 0.0};
    for (int j = 0; j < grid.dim; ++j) x[j] = idx[j] * h;
    v[l] = f(x);
  }
  return ScalarField(grid, std::move(v));
}

template <class F>
ScalarField apply_multiplier(const ScalarField& u, F&& m) {
  const GridSpec& g = u.grid();
  auto modes = ModeTable::get(g.dim, g.points);
  const Spectrum& s = u.spectrum();
  Spectrum out(s.size());
  for (std::size_t l = 0; l < s.size(); ++l) {
    const IntVec& k = modes->k(l);
    out[l] = s[l] * Complex(m(wavevector(k, g.period), k, modes->nyquist(l)));
  }
  return ScalarField::from_spectrum(g, std::move(out));
}

}  // namespace hom4
