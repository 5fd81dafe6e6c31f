// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

#include "spectral.hpp"

namespace hom4 {

/// Constant symmetric d x d matrix, stored by pairs.
class SymMatrix {
 public:
  SymMatrix() = default;
  explicit SymMatrix(int dim) : dim_(dim) {}

  int dim() const { return dim_; }
  double operator()(int i, int j) const { return v_[pair_index(dim_, i, j)]; }
  double& at(int i, int j) { return v_[pair_index(dim_, i, j)]; }
  double pair(int p) const { return v_[p]; }
  double& pair(int p) { return v_[p]; }

 private:
  int dim_ = 0;
  std::array<double, 6> v_{};
};

/// Constant fourth-order tensor with a_ijst = a_stij = a_jist. Storage is the
/// upper triangle of the symmetric q x q matrix C[p][r] = a_{(ij),(st)},
/// q = d(d+1)/2, so both symmetries hold by construction.
class Tensor4 {
 public:
  Tensor4() = default;
  explicit Tensor4(int dim);

  /// a_ijst = (d_is d_jt + d_it d_js) / 2, the identity on symmetric matrices.
  static Tensor4 identity(int dim);
  /// Imports a full row-major d^4 component array; throws SymmetryViolation
  /// if either symmetry fails beyond 1e-12 relative.
  static Tensor4 from_components(int dim, std::span<const double> full);

  int dim() const { return dim_; }
  double operator()(int i, int j, int s, int t) const;
  double pair_entry(int p, int r) const { return c_[slot(p, r)]; }
  void set_pair_entry(int p, int r, double v) { c_[slot(p, r)] = v; }

  /// a xi for a full (not necessarily symmetric) row-major d x d matrix.
  SymMatrix apply(std::span<const double> xi) const;
  /// Full row-major d^4 component array.
  std::vector<double> components() const;

  /// Extreme eigenvalues of xi -> a xi on symmetric matrices with the
  /// Frobenius inner product.
  std::pair<double, double> eigen_range() const;
  /// Lambda(xi) = a_pqst xi_p xi_q xi_s xi_t.
  double quartic_form(const RealVec& xi) const;

 private:
  int slot(int p, int r) const;

  int dim_ = 0;
  std::array<double, 21> c_{};
};

/// Periodic tensor field on a grid: one ScalarField per stored component.
class Tensor4Field {
 public:
  Tensor4Field() = default;
  Tensor4Field(GridSpec grid, std::vector<ScalarField> components);

  static Tensor4Field constant(GridSpec grid, const Tensor4& a);
  /// a(y) xi = rho(y) base xi.
  static Tensor4Field scaled(const ScalarField& rho, const Tensor4& base);

  const GridSpec& grid() const { return grid_; }
  int dim() const { return grid_.dim; }
  /// Field of C[p][r]; symmetric in (p, r).
  const ScalarField& component(int p, int r) const;
  const std::vector<ScalarField>& components() const { return comps_; }
  Tensor4 at(std::size_t node) const;
  /// Cell average, used for norms and scale estimates.
  Tensor4 mean() const;
  /// sqrt of the average over the grid of the Frobenius norm squared.
  double rms_norm() const;

 private:
  GridSpec grid_;
  std::vector<ScalarField> comps_;
};

struct Validation {
  double lambda = 0.0;
  double min_eigenvalue = 0.0;
  double max_eigenvalue = 0.0;
  /// True when the smallest eigenvalue is below 1, i.e. the field must be
  /// divided by min_eigenvalue before the lower bound xi.xi <= a xi.xi holds.
  bool needs_rescale = false;
  std::string advice;
};

/// Ellipticity check over all nodes. Throws NotElliptic if some node has a
/// non-positive eigenvalue.
Validation validate(const Tensor4Field& a);

enum class FamilyKind { Constant, ScalarIsotropic, D1Profile, Checkerboard };

/// Built-in coefficient families:
///  - constant: [] identity, [s] s * identity, or the d^4 full components.
///  - scalar_isotropic: [c0, c1, (c2)] with a xi = rho xi and
///    rho(y) = c0 + c1 prod_j sin(2 pi y_j) + c2 sum_j cos(2 pi y_j).
///  - d1_profile (dim 1): [c0, c1, (c2)], a(y) = c0 + c1 sin(2 pi y) + c2 cos(2 pi y).
///  - checkerboard: [c0, c1], rho(y) = c0 + c1 prod_j s(y_j) with s = +1 on [0, 1/2)
///    and -1 on [1/2, 1). Discontinuous, for probing rough coefficients.
/// Families whose smallest eigenvalue on the grid is below 1 are rejected.
struct CoefficientFamily {
  FamilyKind kind = FamilyKind::Constant;
  std::vector<double> parameters;
};

FamilyKind family_kind_from_string(const std::string& s);
std::string family_kind_name(FamilyKind k);

Tensor4Field make_family(const CoefficientFamily& family, const GridSpec& grid);

}  // namespace hom4
