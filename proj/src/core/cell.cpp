// SPDX-License-Identifier: Apache-2.0
#include "cell.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "cg.hpp"
#include "errors.hpp"
#include "parallel.hpp"

namespace hom4 {
namespace {

std::string tuple_name(const char* what, std::initializer_list<int> idx) {
  std::ostringstream os;
  os << what << "(";
  bool first = true;
  for (int i : idx) {
    os << (first ? "" : ",") << i;
    first = false;
  }
  os << ")";
  return os.str();
}

Spectrum cell_preconditioner(const Spectrum& r, const GridSpec& g) {
  auto modes = ModeTable::get(g.dim, g.points);
  Spectrum z(r.size());
  for (std::size_t l = 0; l < r.size(); ++l) {
    const IntVec& k = modes->k(l);
    if (modes->nyquist(l) || (k[0] == 0 && k[1] == 0 && k[2] == 0)) {
      z[l] = 0.0;
      continue;
    }
    const RealVec xi = wavevector(k, g.period);
    const double x2 = xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2];
    z[l] = r[l] / (x2 * x2);
  }
  return z;
}

// Pair spectra of the constant symmetric part of e^{ij}, so that the weighted
// flux sum reproduces a e^{ij}.
void add_unit_matrix(std::vector<Spectrum>& eta, int dim, int i, int j) {
  const int p = pair_index(dim, i, j);
  eta[p][0] += 1.0 / pair_weight(dim, p);
}

void check_solenoidal(const MatrixField& g, double scale, const std::string& name) {
  const double res = sobolev_norm(apply_Dstar(g), Space::Hminus2);
  if (res > 1e-6 * scale) {
    std::ostringstream os;
    os << name << ": ||D*g||_H-2 = " << res << " exceeds 1e-6 * " << scale << " (unconverged cell solution?)";
    throw Error(ErrorCode::SolenoidalityViolation, os.str());
  }
}

}  // namespace

double CellData::c_of(int i, int j, int k, int p, int m, int n) const {
  const int d = dim();
  return c[((((i * d + j) * d + k) * d + p) * d + m) * d + n];
}

ScalarField solve_cell_equation(const FourthOrderOperator& op, const ScalarField& rhs, const CellOptions& opt,
                                const std::string& name, SolveStat* stat) {
  const GridSpec& g = op.grid();
  require_same_grid(rhs.grid(), g, "cell equation");
  Spectrum b = rhs.spectrum();
  const double scale = sobolev_norm(rhs, Space::L2) / std::sqrt(g.volume());
  if (std::abs(b[0]) > 1e-10 * std::max(scale, 1e-300) && std::abs(b[0]) > 1e-300)
    throw Error(ErrorCode::NonZeroMean, name + ": right-hand side has nonzero mean");
  b[0] = 0.0;
  Spectrum x(b.size(), Complex(0.0));
  CgResult r = pcg([&](const Spectrum& u) { return op.apply(u); },
                   [&](const Spectrum& u) { return cell_preconditioner(u, g); }, b, x, opt.tol, opt.max_iter, name);
  x[0] = 0.0;
  if (stat) *stat = SolveStat{name, r.iterations, r.residual};
  return ScalarField::from_spectrum(g, std::move(x));
}

ScalarField solve_N2(const FourthOrderOperator& op, int i, int j, const CellOptions& opt, SolveStat* stat) {
  const GridSpec& g = op.grid();
  std::vector<Spectrum> e(pair_count(g.dim), Spectrum(g.size(), Complex(0.0)));
  add_unit_matrix(e, g.dim, i, j);
  Spectrum rhs = dstar_spectrum(op.flux(e), g);
  for (auto& v : rhs) v = -v;
  return solve_cell_equation(op, ScalarField::from_spectrum(g, std::move(rhs)), opt, tuple_name("N", {i, j}),
                             stat);
}

ScalarField solve_N2(const Tensor4Field& a, int i, int j, double tol) {
  validate(a);
  FourthOrderOperator op(a);
  CellOptions opt;
  opt.tol = tol;
  return solve_N2(op, i, j, opt);
}

Tensor4 hom_tensor(const FourthOrderOperator& op, const std::vector<ScalarField>& N2, double* asymmetry) {
  const GridSpec& g = op.grid();
  const int d = g.dim;
  const int q = pair_count(d);
  std::vector<std::vector<double>> full(q, std::vector<double>(q));
  for (int r = 0; r < q; ++r) {
    auto [i, j] = pair_of(d, r);
    std::vector<Spectrum> eta = hessian_spectra(N2[r].spectrum(), g);
    add_unit_matrix(eta, d, i, j);
    std::vector<Spectrum> fl = op.flux(eta);
    for (int p = 0; p < q; ++p) full[p][r] = fl[p][0].real();
  }
  Tensor4 a(d);
  double asym = 0.0;
  for (int p = 0; p < q; ++p)
    for (int r = p; r < q; ++r) {
      asym = std::max(asym, std::abs(full[p][r] - full[r][p]));
      a.set_pair_entry(p, r, 0.5 * (full[p][r] + full[r][p]));
    }
  if (asymmetry) *asymmetry = asym;
  return a;
}

MatrixField flux_g2(const FourthOrderOperator& op, const ScalarField& N, const Tensor4& a_hat, int i, int j) {
  const GridSpec& g = op.grid();
  const int d = g.dim;
  std::vector<Spectrum> eta = hessian_spectra(N.spectrum(), g);
  add_unit_matrix(eta, d, i, j);
  std::vector<Spectrum> fl = op.flux(eta);
  const MatrixField total = matrix_from_spectra(g, fl);
  const int r = pair_index(d, i, j);
  for (int p = 0; p < pair_count(d); ++p) fl[p][0] -= a_hat.pair_entry(p, r);
  MatrixField gfield = matrix_from_spectra(g, std::move(fl));
  check_solenoidal(gfield, l2_norm(total), tuple_name("g", {i, j}));
  return gfield;
}

std::vector<MatrixField> potential_from_solenoidal(const MatrixField& g, double scale) {
  const GridSpec& grid = g.grid();
  const int d = g.dim();
  const int q = pair_count(d);
  if (scale < 0.0) scale = l2_norm(g);
  const double mean_tol = 1e-10 * std::max(scale, 1e-300);
  for (int p = 0; p < q; ++p)
    if (std::abs(g.pair(p).mean()) * std::sqrt(grid.volume()) > mean_tol && std::abs(g.pair(p).mean()) > 1e-300)
      throw Error(ErrorCode::NonZeroMean, "potential: matrix field has nonzero mean");
  const double div = sobolev_norm(apply_Dstar(g), Space::Hminus2);
  if (div > 1e-6 * scale && div > 1e-300) {
    std::ostringstream os;
    os << "potential: ||D*g||_H-2 = " << div << " relative to " << scale;
    throw Error(ErrorCode::NotSolenoidal, os.str());
  }

  auto modes = ModeTable::get(d, grid.points);
  const std::size_t n = grid.size();
  std::vector<Spectrum> gs;
  for (int p = 0; p < q; ++p) gs.push_back(g.pair(p).spectrum());

  // raw[st][km] for st < km; the diagonal is zero and st > km is the negation.
  std::vector<std::vector<ScalarField>> entries(q, std::vector<ScalarField>(q));
  const ScalarField zero = ScalarField::zeros(grid);
  for (int st = 0; st < q; ++st) entries[st][st] = zero;
  parallel_for(static_cast<std::size_t>(q * q), [&](std::size_t idx) {
    const int st = static_cast<int>(idx) / q;
    const int km = static_cast<int>(idx) % q;
    if (st >= km) return;
    auto [s, t] = pair_of(d, st);
    auto [k, m] = pair_of(d, km);
    Spectrum out(n);
    for (std::size_t l = 0; l < n; ++l) {
      const IntVec& kv = modes->k(l);
      if (modes->nyquist(l) || (kv[0] == 0 && kv[1] == 0 && kv[2] == 0)) {
        out[l] = 0.0;
        continue;
      }
      const RealVec xi = wavevector(kv, grid.period);
      const double x2 = xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2];
      // D_km -> -xi_k xi_m, Lap^-2 -> 1/|xi|^4
      out[l] = (-xi[k] * xi[m] * gs[st][l] + xi[s] * xi[t] * gs[km][l]) / (x2 * x2);
    }
    entries[st][km] = ScalarField::from_spectrum(grid, std::move(out));
  });
  for (int st = 0; st < q; ++st)
    for (int km = 0; km < st; ++km) entries[st][km] = -1.0 * entries[km][st];

  std::vector<MatrixField> G;
  for (int st = 0; st < q; ++st) G.emplace_back(grid, d, entries[st]);
  return G;
}

MatrixField n3_source(const FourthOrderOperator& op, const ScalarField& N2ij, const std::vector<MatrixField>& G2ij,
                      int k) {
  const GridSpec& g = op.grid();
  const int d = g.dim;
  const int q = pair_count(d);
  // sym(grad N x e^k) by pairs (s,t): (d_s N delta_tk + d_t N delta_sk) / 2
  std::vector<Spectrum> grad(d);
  for (int s = 0; s < d; ++s) {
    IntVec o{0, 0, 0};
    o[s] = 1;
    grad[s] = derivative_spectrum(N2ij.spectrum(), g, o);
  }
  std::vector<Spectrum> sym(q, Spectrum(g.size(), Complex(0.0)));
  for (int p = 0; p < q; ++p) {
    auto [s, t] = pair_of(d, p);
    for (std::size_t l = 0; l < g.size(); ++l) {
      Complex v = 0.0;
      if (t == k) v += grad[s][l];
      if (s == k) v += grad[t][l];
      sym[p][l] = 0.5 * v;
    }
  }
  std::vector<Spectrum> src = op.flux(sym);
  for (int p = 0; p < q; ++p) {
    for (auto& v : src[p]) v *= 2.0;
    for (int m = 0; m < d; ++m) {
      IntVec o{0, 0, 0};
      o[m] = 1;
      Spectrum dg = derivative_spectrum(G2ij[pair_index(d, k, m)].pair(p).spectrum(), g, o);
      for (std::size_t l = 0; l < g.size(); ++l) src[p][l] += 2.0 * dg[l];
    }
  }
  return matrix_from_spectra(g, std::move(src));
}

ScalarField solve_N3(const FourthOrderOperator& op, const ScalarField& N2ij, const std::vector<MatrixField>& G2ij,
                     int k, const CellOptions& opt, SolveStat* stat) {
  const MatrixField src = n3_source(op, N2ij, G2ij, k);
  ScalarField rhs = -1.0 * apply_Dstar(src);
  return solve_cell_equation(op, rhs, opt, "N3", stat);
}

ThirdOrderFlux flux_g3(const FourthOrderOperator& op, const ScalarField& N3, const MatrixField& source) {
  const GridSpec& g = op.grid();
  const int d = g.dim;
  std::vector<Spectrum> fl = op.flux(hessian_spectra(N3.spectrum(), g));
  ThirdOrderFlux out{SymMatrix(d), {}};
  for (int p = 0; p < pair_count(d); ++p) {
    const Spectrum& s = source.pair(p).spectrum();
    for (std::size_t l = 0; l < fl[p].size(); ++l) fl[p][l] += s[l];
    out.b.pair(p) = fl[p][0].real();
    fl[p][0] = 0.0;
  }
  out.g = matrix_from_spectra(g, std::move(fl));
  return out;
}

double mean_product(const ScalarField& u, const ScalarField& v) {
  require_same_grid(u.grid(), v.grid(), "mean of product");
  auto modes = ModeTable::get(u.grid().dim, u.grid().points);
  const Spectrum& a = u.spectrum();
  const Spectrum& b = v.spectrum();
  double acc = 0.0;
  for (std::size_t l = 0; l < a.size(); ++l)
    if (!modes->nyquist(l)) acc += a[l].real() * b[l].real() + a[l].imag() * b[l].imag();
  return acc;
}

std::vector<double> c_coeffs(const CellData& cell) {
  const int d = cell.dim();
  const int q = pair_count(d);
  // first derivatives of N^{mn} and N^{ijk}
  std::vector<std::vector<ScalarField>> dN2(q), dN3(cell.N3.size());
  for (int r = 0; r < q; ++r)
    for (int s = 0; s < d; ++s) dN2[r].push_back(derivative_along(cell.N2[r], std::span<const int>(&s, 1)));
  for (std::size_t t = 0; t < cell.N3.size(); ++t)
    for (int s = 0; s < d; ++s) dN3[t].push_back(derivative_along(cell.N3[t], std::span<const int>(&s, 1)));

  const std::size_t total = static_cast<std::size_t>(std::pow(d, 6));
  std::vector<double> c(total);
  parallel_for(total, [&](std::size_t idx) {
    std::size_t rest = idx;
    int ix[6];
    for (int a = 5; a >= 0; --a) {
      ix[a] = static_cast<int>(rest % d);
      rest /= d;
    }
    const int i = ix[0], j = ix[1], k = ix[2], p = ix[3], m = ix[4], n = ix[5];
    const int ijk = cell.triple_index(i, j, k);
    const int mn = pair_index(d, m, n);
    const int ij = pair_index(d, i, j);
    double v = 0.0;
    for (int qq = 0; qq < d; ++qq) {
      v += 2.0 * mean_product(cell.g3[ijk].entry(p, qq), dN2[mn][qq]);
      v -= 2.0 * mean_product(dN3[ijk][qq], cell.g2[mn].entry(qq, p));
    }
    v -= mean_product(cell.N2[ij], cell.g2[mn].entry(k, p));
    v -= mean_product(cell.g2[ij].entry(k, p), cell.N2[mn]);
    c[idx] = v;
  });
  return c;
}

CellData cell_pipeline(const Tensor4Field& a, const CellOptions& opt) {
  validate(a);
  const GridSpec g = a.grid();
  const int d = g.dim;
  const int q = pair_count(d);
  FourthOrderOperator op(a, opt.dealias);

  CellData cell;
  cell.grid = g;
  cell.N2.resize(q);
  std::vector<SolveStat> st2(q);
  parallel_for(q, [&](std::size_t r) {
    auto [i, j] = pair_of(d, static_cast<int>(r));
    try {
      cell.N2[r] = solve_N2(op, i, j, opt, &st2[r]);
    } catch (const Error& e) {
      throw e.within(tuple_name("N", {i, j}));
    }
  });
  cell.a_hat = hom_tensor(op, cell.N2, &cell.a_hat_asymmetry);

  cell.g2.resize(q);
  cell.G2.resize(q);
  parallel_for(q, [&](std::size_t r) {
    auto [i, j] = pair_of(d, static_cast<int>(r));
    try {
      cell.g2[r] = flux_g2(op, cell.N2[r], cell.a_hat, i, j);
      cell.G2[r] = potential_from_solenoidal(cell.g2[r], l2_norm(cell.g2[r]) + a.rms_norm());
    } catch (const Error& e) {
      throw e.within(tuple_name("g", {i, j}));
    }
  });

  const std::size_t nt = static_cast<std::size_t>(q * d);
  cell.N3.resize(nt);
  cell.g3.resize(nt);
  cell.G3.resize(nt);
  cell.b.assign(nt, SymMatrix(d));
  std::vector<SolveStat> st3(nt);
  parallel_for(nt, [&](std::size_t t) {
    const int r = static_cast<int>(t) / d;
    const int k = static_cast<int>(t) % d;
    auto [i, j] = pair_of(d, r);
    const std::string name = tuple_name("N", {i, j, k});
    try {
      const MatrixField src = n3_source(op, cell.N2[r], cell.G2[r], k);
      cell.N3[t] = solve_cell_equation(op, -1.0 * apply_Dstar(src), opt, name, &st3[t]);
      ThirdOrderFlux f3 = flux_g3(op, cell.N3[t], src);
      cell.b[t] = f3.b;
      cell.g3[t] = f3.g;
      const double scale = l2_norm(f3.g) + l2_norm(src) + a.rms_norm();
      check_solenoidal(cell.g3[t], scale, tuple_name("g", {i, j, k}));
      cell.G3[t] = potential_from_solenoidal(cell.g3[t], scale);
    } catch (const Error& e) {
      throw e.within(name);
    }
  });

  cell.c = c_coeffs(cell);
  cell.solver_report = st2;
  cell.solver_report.insert(cell.solver_report.end(), st3.begin(), st3.end());
  return cell;
}

double lambda0_diagnostic(const CellData& cell) {
  const int d = cell.dim();
  std::mt19937_64 rng(20240601);
  std::normal_distribution<double> normal(0.0, 1.0);
  double worst = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    RealVec xi{0.0, 0.0, 0.0};
    double n2 = 0.0;
    while (n2 < 1e-12) {
      n2 = 0.0;
      for (int j = 0; j < d; ++j) {
        xi[j] = normal(rng);
        n2 += xi[j] * xi[j];
      }
    }
    for (int j = 0; j < d; ++j) xi[j] /= std::sqrt(n2);
    double v = 0.0;
    for (int r = 0; r < d; ++r)
      for (int s = 0; s < d; ++s)
        for (int t = 0; t < d; ++t) {
          const SymMatrix& b = cell.b_of(r, s, t);
          double inner_sum = 0.0;
          for (int p = 0; p < d; ++p)
            for (int qq = 0; qq < d; ++qq) inner_sum += b(p, qq) * xi[p] * xi[qq];
          v += inner_sum * xi[r] * xi[s] * xi[t];
        }
    worst = std::max(worst, std::abs(v));
  }
  return worst;
}

}  // namespace hom4
