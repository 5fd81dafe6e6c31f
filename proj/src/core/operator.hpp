// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "spectral.hpp"
#include "tensor.hpp"

namespace hom4 {

/// Pair spectra of the Hessian of u.
std::vector<Spectrum> hessian_spectra(const Spectrum& u, const GridSpec& grid);
/// Spectrum of sum_ij D_ij eta_ij for eta given by pair spectra.
Spectrum dstar_spectrum(const std::vector<Spectrum>& eta, const GridSpec& grid);
std::vector<Spectrum> pair_spectra(const MatrixField& eta);
MatrixField matrix_from_spectra(const GridSpec& grid, std::vector<Spectrum> eta);

/// Matrix-free u -> D*(a D u) for a tensor field given on the operator grid.
/// Products with a go through the 3/2 pad unless dealiasing is disabled.
class FourthOrderOperator {
 public:
  explicit FourthOrderOperator(const Tensor4Field& a, bool dealias = true);

  const GridSpec& grid() const { return grid_; }
  int dim() const { return grid_.dim; }
  bool dealias() const { return work_points_ != grid_.points; }

  /// a eta for a symmetric matrix field given by pair spectra.
  std::vector<Spectrum> flux(const std::vector<Spectrum>& eta) const;
  MatrixField flux(const MatrixField& eta) const;
  /// D*(a D u) + shift * u.
  Spectrum apply(const Spectrum& u, double shift = 0.0) const;
  ScalarField apply(const ScalarField& u, double shift = 0.0) const;

 private:
  GridSpec grid_;
  int work_points_;
  // Stored components of a on the work grid, in Tensor4Field order.
  std::vector<std::vector<double>> a_;
};

}  // namespace hom4
