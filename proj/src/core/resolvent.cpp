// SPDX-License-Identifier: Apache-2.0
#include "resolvent.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "cg.hpp"
#include "errors.hpp"

namespace hom4 {
namespace {

constexpr double kGamma3 = 1.0 / 8.0;

double norm2(const RealVec& xi) { return xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2]; }

IntVec orders_of(std::initializer_list<int> axes) {
  IntVec o{0, 0, 0};
  for (int a : axes) ++o[a];
  return o;
}

}  // namespace

// ---------------------------------------------------------------------------

EpsEmbedding::EpsEmbedding(int n, const GridSpec& cell_grid) : n_(n), cell_(cell_grid) {
  if (n < 1) throw Error(ErrorCode::BadArgument, "eps = 1/n needs n >= 1");
  cell_grid.validate();
  if (cell_grid.period != 1.0) throw Error(ErrorCode::GridMismatch, "cell grid must have period 1");
  torus_ = GridSpec{cell_grid.dim, n * cell_grid.points, 1.0};
  torus_.validate();
}

ScalarField EpsEmbedding::lift(const ScalarField& b) const {
  require_same_grid(b.grid(), cell_, "lift");
  const int m = cell_.points;
  const int d = cell_.dim;
  std::vector<double> v(torus_.size());
  auto src = b.values();
  for (std::size_t l = 0; l < v.size(); ++l) {
    IntVec idx = multi_index(d, torus_.points, l);
    for (int j = 0; j < d; ++j) idx[j] %= m;
    v[l] = src[linear_index(d, m, idx)];
  }
  return ScalarField(torus_, std::move(v));
}

Tensor4Field EpsEmbedding::lift(const Tensor4Field& a) const {
  std::vector<ScalarField> comps;
  for (const auto& c : a.components()) comps.push_back(lift(c));
  return Tensor4Field(torus_, std::move(comps));
}

// ---------------------------------------------------------------------------

HomogenizedSymbol::HomogenizedSymbol(const Tensor4& a_hat, std::vector<SymMatrix> b, std::vector<double> c)
    : a_hat_(a_hat), b_(std::move(b)), c_(std::move(c)) {
  const int d = a_hat.dim();
  if (!b_.empty() && static_cast<int>(b_.size()) != pair_count(d) * d)
    throw Error(ErrorCode::BadArgument, "b tensor needs d^2(d+1)/2 matrices");
  if (!c_.empty() && c_.size() != static_cast<std::size_t>(std::pow(d, 6)))
    throw Error(ErrorCode::BadArgument, "c tensor needs d^6 entries");
}

HomogenizedSymbol HomogenizedSymbol::from_cell(const CellData& cell) {
  return HomogenizedSymbol(cell.a_hat, cell.b, cell.c);
}

double HomogenizedSymbol::quintic(const RealVec& xi) const {
  if (b_.empty()) return 0.0;
  const int d = dim();
  double v = 0.0;
  for (int r = 0; r < d; ++r)
    for (int s = 0; s < d; ++s)
      for (int t = 0; t < d; ++t) {
        const SymMatrix& b = b_[pair_index(d, r, s) * d + t];
        double inner_sum = 0.0;
        for (int p = 0; p < d; ++p)
          for (int q = 0; q < d; ++q) inner_sum += b(p, q) * xi[p] * xi[q];
        v += inner_sum * xi[r] * xi[s] * xi[t];
      }
  return v;
}

double HomogenizedSymbol::sextic(const RealVec& xi) const {
  if (c_.empty()) return 0.0;
  const int d = dim();
  double v = 0.0;
  std::size_t idx = 0;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k)
        for (int p = 0; p < d; ++p)
          for (int m = 0; m < d; ++m)
            for (int n = 0; n < d; ++n) v += c_[idx++] * xi[i] * xi[j] * xi[k] * xi[p] * xi[m] * xi[n];
  return v;
}

Complex HomogenizedSymbol::denominator(const RealVec& xi, double eps, bool with_b, bool adjoint) const {
  const double im = with_b ? eps * quintic(xi) : 0.0;
  return Complex(1.0 + quartic(xi), adjoint ? -im : im);
}

ScalarField resolvent_hat(const HomogenizedSymbol& sym, const ScalarField& f, double eps, bool with_b,
                          bool adjoint) {
  if (f.grid().dim != sym.dim()) throw Error(ErrorCode::GridMismatch, "symbol and field dimensions differ");
  return apply_multiplier(f, [&](const RealVec& xi, const IntVec&, bool nyq) -> Complex {
    if (nyq) return 1.0;
    return 1.0 / sym.denominator(xi, eps, with_b, adjoint);
  });
}

// ---------------------------------------------------------------------------

OscillatingOperator::OscillatingOperator(const Tensor4Field& a_cell, const EpsEmbedding& emb, bool dealias)
    : op_(emb.lift(a_cell), dealias) {}

ScalarField OscillatingOperator::apply(const ScalarField& u) const { return op_.apply(u, 1.0); }

ScalarField OscillatingOperator::solve(const ScalarField& f, const SolveOptions& opt, SolveStat* stat) const {
  const GridSpec& g = grid();
  require_same_grid(f.grid(), g, "oscillating solve");
  auto modes = ModeTable::get(g.dim, g.points);
  std::vector<double> pre(g.size());
  for (std::size_t l = 0; l < pre.size(); ++l) {
    if (modes->nyquist(l)) {
      pre[l] = 1.0;
      continue;
    }
    const double x2 = norm2(wavevector(modes->k(l), g.period));
    pre[l] = 1.0 / (1.0 + x2 * x2);
  }
  Spectrum x(g.size(), Complex(0.0));
  CgResult r = pcg([&](const Spectrum& u) { return op_.apply(u, 1.0); },
                   [&](const Spectrum& u) {
                     Spectrum z(u.size());
                     for (std::size_t l = 0; l < u.size(); ++l) z[l] = pre[l] * u[l];
                     return z;
                   },
                   f.spectrum(), x, opt.tol, opt.max_iter, "oscillating solve");
  if (stat) *stat = SolveStat{"u_eps", r.iterations, r.residual};
  return ScalarField::from_spectrum(g, std::move(x));
}

double oracle_tolerance(double eps) { return std::min(1e-10, std::pow(eps, 4) * 1e-2); }

ScalarField oscillating_solve(const Tensor4Field& a_cell, const EpsEmbedding& emb, const ScalarField& f,
                              const SolveOptions& opt, SolveStat* stat) {
  validate(a_cell);
  OscillatingOperator op(a_cell, emb, opt.dealias);
  return op.solve(f, opt, stat);
}

// ---------------------------------------------------------------------------

ScalarField second_order_corrector(const CellData& cell, const EpsEmbedding& emb, const ScalarField& v,
                                   bool dealias) {
  require_same_grid(v.grid(), emb.torus_grid(), "second-order corrector");
  const int d = cell.dim();
  std::vector<std::pair<ScalarField, ScalarField>> terms;
  for (int p = 0; p < pair_count(d); ++p) {
    auto [i, j] = pair_of(d, p);
    terms.emplace_back(pair_weight(d, p) * emb.lift(cell.N2[p]), derivative(v, orders_of({i, j})));
  }
  return sum_of_products(terms, dealias);
}

ScalarField third_order_corrector(const CellData& cell, const EpsEmbedding& emb, const ScalarField& v,
                                  bool dealias) {
  require_same_grid(v.grid(), emb.torus_grid(), "third-order corrector");
  const int d = cell.dim();
  std::vector<std::pair<ScalarField, ScalarField>> terms;
  for (int p = 0; p < pair_count(d); ++p) {
    auto [i, j] = pair_of(d, p);
    for (int k = 0; k < d; ++k)
      terms.emplace_back(pair_weight(d, p) * emb.lift(cell.N3[p * d + k]), derivative(v, orders_of({i, j, k})));
  }
  return sum_of_products(terms, dealias);
}

UTilde build_u_tilde(const CellData& cell, const EpsEmbedding& emb, const ScalarField& u_hat_eps, bool dealias) {
  if (cell.grid != emb.cell_grid()) throw Error(ErrorCode::GridMismatch, "cell data and embedding differ");
  const double eps = emb.eps();
  UTilde out;
  out.smoothed = apply_smoothing(u_hat_eps, {3, eps});
  out.U2 = second_order_corrector(cell, emb, out.smoothed, dealias);
  out.U3 = third_order_corrector(cell, emb, out.smoothed, dealias);
  out.total = out.smoothed + (eps * eps) * out.U2 + (eps * eps * eps) * out.U3;
  return out;
}

ScalarField corrector_K2(const CellData& cell, const HomogenizedSymbol& sym, const EpsEmbedding& emb,
                         const ScalarField& f, bool dealias) {
  const ScalarField z = apply_smoothing(resolvent_hat(sym, f, emb.eps()), {1, emb.eps()});
  return second_order_corrector(cell, emb, z, dealias);
}

ScalarField corrector_K2_adjoint(const CellData& cell, const HomogenizedSymbol& sym, const EpsEmbedding& emb,
                                 const ScalarField& g, bool dealias) {
  require_same_grid(g.grid(), emb.torus_grid(), "adjoint corrector");
  const int d = cell.dim();
  std::vector<Spectrum> h;
  for (int p = 0; p < pair_count(d); ++p) h.push_back(pointwise_product(emb.lift(cell.N2[p]), g, dealias).spectrum());
  const GridSpec& tg = emb.torus_grid();
  const ScalarField dd = ScalarField::from_spectrum(tg, dstar_spectrum(h, tg));
  return resolvent_hat(sym, apply_smoothing(dd, {1, emb.eps()}), emb.eps(), true, true);
}

ScalarField corrector_M(const HomogenizedSymbol& sym, const ScalarField& f, double eps) {
  return apply_multiplier(f, [&](const RealVec& xi, const IntVec&, bool nyq) -> Complex {
    if (nyq) return 0.0;
    return kGamma3 * norm2(xi) / sym.denominator(xi, eps, true, false);
  });
}

ScalarField corrector_L(const HomogenizedSymbol& sym, const ScalarField& f, double eps) {
  return apply_multiplier(f, [&](const RealVec& xi, const IntVec&, bool nyq) -> Complex {
    if (nyq) return 0.0;
    const Complex den = sym.denominator(xi, eps, true, false);
    return -sym.sextic(xi) / (den * den);
  });
}

ScalarField build_w(const CellData& cell, const HomogenizedSymbol& sym, const EpsEmbedding& emb,
                    const ScalarField& f, double m_weight, bool dealias) {
  const double eps = emb.eps();
  ScalarField corr = corrector_K2(cell, sym, emb, f, dealias) + corrector_K2_adjoint(cell, sym, emb, f, dealias) +
                     corrector_L(sym, f, eps);
  if (m_weight != 0.0) corr = corr + m_weight * corrector_M(sym, f, eps);
  return resolvent_hat(sym, f, eps) + (eps * eps) * corr;
}

Residual residual_F_eps(const OscillatingOperator& op, const ScalarField& u_tilde, const ScalarField& f) {
  require_same_grid(u_tilde.grid(), op.grid(), "residual");
  require_same_grid(f.grid(), op.grid(), "residual");
  Residual r;
  r.F = op.apply(u_tilde) - f;
  r.norm_Hminus2 = sobolev_norm(r.F, Space::Hminus2);
  return r;
}

// ---------------------------------------------------------------------------

ApproximantBundle build_bundle(const Tensor4Field& a_cell, const CellData& cell, const EpsEmbedding& emb,
                               const ScalarField& f_torus, const SolveOptions& opt, const BundleSelection& sel) {
  require_same_grid(f_torus.grid(), emb.torus_grid(), "bundle right-hand side");
  const double eps = emb.eps();
  const HomogenizedSymbol sym = HomogenizedSymbol::from_cell(cell);
  ApproximantBundle b;
  b.eps = eps;
  b.f = f_torus;

  OscillatingOperator op(a_cell, emb, opt.dealias);
  SolveOptions oracle = opt;
  oracle.tol = std::min(opt.tol, oracle_tolerance(eps));
  b.u_eps = op.solve(f_torus, oracle, &b.oracle);

  b.u_hat = resolvent_hat(sym, f_torus, eps, false);
  b.u_hat_eps = resolvent_hat(sym, f_torus, eps, true);
  if (sel.u_tilde || sel.residual) b.u_tilde = build_u_tilde(cell, emb, b.u_hat_eps, opt.dealias).total;
  if (sel.w) {
    const ScalarField corr = corrector_K2(cell, sym, emb, f_torus, opt.dealias) +
                             corrector_K2_adjoint(cell, sym, emb, f_torus, opt.dealias) +
                             corrector_L(sym, f_torus, eps);
    b.w = b.u_hat_eps + (eps * eps) * corr;
    b.w_printed = b.w + (2.0 * eps * eps) * corrector_M(sym, f_torus, eps);
  }
  if (sel.residual) b.residual = residual_F_eps(op, b.u_tilde, f_torus).F;
  return b;
}

BundleErrors bundle_errors(const ApproximantBundle& b) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  auto diff = [&](const ScalarField& u, Space s) { return u.empty() ? nan : sobolev_norm(b.u_eps - u, s); };
  BundleErrors e;
  e.norm_f = sobolev_norm(b.f, Space::L2);
  e.err_u_hat_L2 = diff(b.u_hat, Space::L2);
  e.err_u_tilde_H2 = diff(b.u_tilde, Space::H2);
  e.err_w_L2 = diff(b.w, Space::L2);
  e.err_w_printed_L2 = diff(b.w_printed, Space::L2);
  if (b.residual.empty()) {
    e.residual_Hminus2 = nan;
  } else {
    const double r = sobolev_norm(b.residual, Space::Hminus2);
    e.residual_Hminus2 = e.norm_f > 0.0 ? r / e.norm_f : r;
  }
  return e;
}

}  // namespace hom4
