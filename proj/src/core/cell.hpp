// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "operator.hpp"
#include "spectral.hpp"
#include "tensor.hpp"

namespace hom4 {

// Index conventions (all 0-based):
//  - a pair (i,j) with i <= j is addressed by pair_index(d, i, j);
//  - triple families N^{ijk}, g^{ijk}, b^{ijk} live at pair_index(d,i,j)*d + k;
//  - a potential family G^{st} is a vector over pairs (s,t) of MatrixField
//    whose entry (k,m) is G^{st}_{km};
//  - c_{ijkpmn} is stored row-major over d^6.

struct CellOptions {
  double tol = 1e-10;
  int max_iter = 10000;
  bool dealias = true;
};

struct SolveStat {
  std::string problem;
  int iterations = 0;
  double residual = 0.0;
};

struct CellData {
  GridSpec grid;
  Tensor4 a_hat;
  /// Largest |a_hat(P,R) - a_hat(R,P)| before symmetrization.
  double a_hat_asymmetry = 0.0;
  std::vector<ScalarField> N2;
  std::vector<ScalarField> N3;
  std::vector<MatrixField> g2;
  std::vector<std::vector<MatrixField>> G2;
  std::vector<MatrixField> g3;
  std::vector<std::vector<MatrixField>> G3;
  std::vector<SymMatrix> b;
  std::vector<double> c;
  std::vector<SolveStat> solver_report;

  int dim() const { return grid.dim; }
  const ScalarField& n2(int i, int j) const { return N2[pair_index(dim(), i, j)]; }
  const ScalarField& n3(int i, int j, int k) const { return N3[triple_index(i, j, k)]; }
  const MatrixField& flux2(int i, int j) const { return g2[pair_index(dim(), i, j)]; }
  const MatrixField& flux3(int i, int j, int k) const { return g3[triple_index(i, j, k)]; }
  const SymMatrix& b_of(int i, int j, int k) const { return b[triple_index(i, j, k)]; }
  double c_of(int i, int j, int k, int p, int m, int n) const;
  int triple_index(int i, int j, int k) const { return pair_index(dim(), i, j) * dim() + k; }
};

/// Mean-zero solution of D*(a D N) = rhs by preconditioned CG with the
/// preconditioner 1/|xi|^4. `rhs` must have zero mean.
ScalarField solve_cell_equation(const FourthOrderOperator& op, const ScalarField& rhs, const CellOptions& opt,
                                const std::string& name, SolveStat* stat = nullptr);

/// N^{ij}: D*(a(D N + e^{ij})) = 0.
ScalarField solve_N2(const FourthOrderOperator& op, int i, int j, const CellOptions& opt = {},
                     SolveStat* stat = nullptr);
ScalarField solve_N2(const Tensor4Field& a, int i, int j, double tol = 1e-10);

/// a_hat e^{ij} = <a(D N^{ij} + e^{ij})>, symmetrized. `asymmetry` receives
/// the largest entry mismatch before symmetrization.
Tensor4 hom_tensor(const FourthOrderOperator& op, const std::vector<ScalarField>& N2, double* asymmetry = nullptr);

/// g^{ij} = a(D N^{ij} + e^{ij}) - a_hat e^{ij}. Throws SolenoidalityViolation
/// if the H^-2 norm of D*g exceeds 1e-6 of the flux scale.
MatrixField flux_g2(const FourthOrderOperator& op, const ScalarField& N, const Tensor4& a_hat, int i, int j);

/// Potentials G^{st}_{km} = Lap^-2 (D_km g_st - D_st g_km) of a symmetric,
/// mean-zero, solenoidal g. `scale` is the size the mean and D*g are
/// compared against (defaults to ||g||). Skew symmetry in (s,t) <-> (k,m)
/// holds exactly: one half of the family is the negation of the other.
std::vector<MatrixField> potential_from_solenoidal(const MatrixField& g, double scale = -1.0);

/// Source matrix 2 a sym(grad N^{ij} x e^k) + 2 sum_m d_m G^{ij,km}.
MatrixField n3_source(const FourthOrderOperator& op, const ScalarField& N2ij,
                      const std::vector<MatrixField>& G2ij, int k);

/// N^{ijk}: D*(a D N + source) = 0.
ScalarField solve_N3(const FourthOrderOperator& op, const ScalarField& N2ij, const std::vector<MatrixField>& G2ij,
                     int k, const CellOptions& opt = {}, SolveStat* stat = nullptr);

/// b^{ijk} = <a D N^{ijk} + 2 a sym(grad N^{ij} x e^k)> and
/// g^{ijk} = a D N^{ijk} + source - b^{ijk}.
struct ThirdOrderFlux {
  SymMatrix b;
  MatrixField g;
};
ThirdOrderFlux flux_g3(const FourthOrderOperator& op, const ScalarField& N3, const MatrixField& source);

/// Cell average of a product, by Parseval over the non-Nyquist modes (the
/// zero mode of the dealiased product).
double mean_product(const ScalarField& u, const ScalarField& v);

/// c_{ijkpmn} from N2, N3, g2, g3 (row-major d^6).
std::vector<double> c_coeffs(const CellData& cell);

/// Everything above in dependency order; independent problems run through
/// parallel_for.
CellData cell_pipeline(const Tensor4Field& a, const CellOptions& opt = {});

/// max over 1000 fixed-seed unit directions of |b_pq^{rst} xi_p xi_q xi_r xi_s xi_t|.
double lambda0_diagnostic(const CellData& cell);

}  // namespace hom4
