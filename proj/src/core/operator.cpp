// SPDX-License-Identifier: Apache-2.0
#include "operator.hpp"

#include "errors.hpp"
#include "parallel.hpp"

namespace hom4 {
namespace {

IntVec pair_orders(int dim, int p) {
  auto [i, j] = pair_of(dim, p);
  IntVec o{0, 0, 0};
  ++o[i];
  ++o[j];
  return o;
}

}  // namespace

std::vector<Spectrum> hessian_spectra(const Spectrum& u, const GridSpec& grid) {
  std::vector<Spectrum> out(pair_count(grid.dim));
  for (int p = 0; p < pair_count(grid.dim); ++p) out[p] = derivative_spectrum(u, grid, pair_orders(grid.dim, p));
  return out;
}

Spectrum dstar_spectrum(const std::vector<Spectrum>& eta, const GridSpec& grid) {
  Spectrum acc(grid.size(), Complex(0.0));
  for (int p = 0; p < pair_count(grid.dim); ++p) {
    Spectrum s = derivative_spectrum(eta[p], grid, pair_orders(grid.dim, p));
    const double w = pair_weight(grid.dim, p);
    for (std::size_t l = 0; l < acc.size(); ++l) acc[l] += w * s[l];
  }
  return acc;
}

std::vector<Spectrum> pair_spectra(const MatrixField& eta) {
  std::vector<Spectrum> out;
  for (const auto& e : eta.pairs()) out.push_back(e.spectrum());
  return out;
}

MatrixField matrix_from_spectra(const GridSpec& grid, std::vector<Spectrum> eta) {
  std::vector<ScalarField> e;
  for (auto& s : eta) e.push_back(ScalarField::from_spectrum(grid, std::move(s)));
  return MatrixField(grid, grid.dim, std::move(e));
}

FourthOrderOperator::FourthOrderOperator(const Tensor4Field& a, bool dealias)
    : grid_(a.grid()), work_points_(dealias ? padded_points(a.grid().points) : a.grid().points) {
  for (const auto& c : a.components()) {
    if (dealias) {
      a_.push_back(padded_values(c, work_points_));
    } else {
      a_.emplace_back(c.values().begin(), c.values().end());
    }
  }
}

std::vector<Spectrum> FourthOrderOperator::flux(const std::vector<Spectrum>& eta) const {
  const int d = grid_.dim;
  const int q = pair_count(d);
  if (static_cast<int>(eta.size()) != q) throw Error(ErrorCode::BadArgument, "flux needs d(d+1)/2 pair spectra");
  const int P = work_points_;
  const GridSpec work{d, P, grid_.period};
  std::vector<std::vector<double>> ev(q);
  parallel_for(q, [&](std::size_t r) {
    if (dealias()) {
      ev[r] = padded_values(eta[r], grid_, P);
    } else {
      ev[r].resize(grid_.size());
      fft::inverse_real(d, P, eta[r], ev[r]);
    }
  });
  std::vector<Spectrum> out(q);
  parallel_for(q, [&](std::size_t pu) {
    const int p = static_cast<int>(pu);
    std::vector<double> acc(work.size(), 0.0);
    for (int r = 0; r < q; ++r) {
      const int lo = std::min(p, r);
      const int hi = std::max(p, r);
      const auto& c = a_[lo * q - lo * (lo - 1) / 2 + (hi - lo)];
      const double w = pair_weight(d, r);
      const auto& e = ev[r];
      for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += w * c[i] * e[i];
    }
    if (dealias()) {
      out[p] = truncate_from_padded(acc, grid_, P);
    } else {
      out[p].resize(acc.size());
      fft::forward(d, P, std::span<const double>(acc), out[p]);
    }
  });
  return out;
}

MatrixField FourthOrderOperator::flux(const MatrixField& eta) const {
  require_same_grid(eta.grid(), grid_, "operator flux");
  return matrix_from_spectra(grid_, flux(pair_spectra(eta)));
}

Spectrum FourthOrderOperator::apply(const Spectrum& u, double shift) const {
  if (u.size() != grid_.size()) throw Error(ErrorCode::GridMismatch, "operator argument has the wrong size");
  Spectrum out = dstar_spectrum(flux(hessian_spectra(u, grid_)), grid_);
  if (shift != 0.0)
    for (std::size_t l = 0; l < out.size(); ++l) out[l] += shift * u[l];
  return out;
}

ScalarField FourthOrderOperator::apply(const ScalarField& u, double shift) const {
  require_same_grid(u.grid(), grid_, "operator argument");
  return ScalarField::from_spectrum(grid_, apply(u.spectrum(), shift));
}

}  // namespace hom4
