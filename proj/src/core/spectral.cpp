// SPDX-License-Identifier: Apache-2.0
#include "spectral.hpp"

#include <string>

#include "errors.hpp"

namespace hom4 {

int pair_count(int dim) { return dim * (dim + 1) / 2; }

int pair_index(int dim, int i, int j) {
  if (i > j) std::swap(i, j);
  // rows 0..i-1 contribute d, d-1, ..., d-i+1 entries
  return i * dim - i * (i - 1) / 2 + (j - i);
}

std::pair<int, int> pair_of(int dim, int p) {
  for (int i = 0; i < dim; ++i) {
    const int row = dim - i;
    if (p < row) return {i, i + p};
    p -= row;
  }
  throw Error(ErrorCode::BadArgument, "pair index out of range");
}

double pair_weight(int dim, int p) {
  auto [i, j] = pair_of(dim, p);
  return i == j ? 1.0 : 2.0;
}

void require_same_grid(const GridSpec& a, const GridSpec& b, const char* what) {
  if (a != b) throw Error(ErrorCode::GridMismatch, std::string(what) + ": operands live on different grids");
}

// ---------------------------------------------------------------------------

ScalarField::ScalarField(GridSpec grid, std::vector<double> values) : grid_(grid) {
  grid_.validate();
  if (values.size() != grid_.size())
    throw Error(ErrorCode::GridMismatch, "value count does not match grid size");
  values_ = std::make_shared<const std::vector<double>>(std::move(values));
  cache_ = std::make_shared<SpectrumCache>();
}

ScalarField ScalarField::constant(GridSpec grid, double c) {
  grid.validate();
  Spectrum s(grid.size(), Complex(0.0));
  s[0] = c;
  return with_spectrum(grid, std::vector<double>(grid.size(), c), std::move(s));
}

ScalarField ScalarField::with_spectrum(GridSpec grid, std::vector<double> values, Spectrum coeffs) {
  ScalarField f(grid, std::move(values));
  std::call_once(f.cache_->once, [&] {
    f.cache_->data = std::move(coeffs);
    f.cache_->ready.store(true, std::memory_order_release);
  });
  return f;
}

ScalarField ScalarField::from_spectrum(GridSpec grid, Spectrum coeffs) {
  grid.validate();
  if (coeffs.size() != grid.size()) throw Error(ErrorCode::GridMismatch, "spectrum size does not match grid");
  const int n = grid.points;
  Spectrum herm(coeffs.size());
  for (std::size_t l = 0; l < coeffs.size(); ++l) {
    IntVec idx = multi_index(grid.dim, n, l);
    for (int j = 0; j < grid.dim; ++j) idx[j] = (n - idx[j]) % n;
    const std::size_t neg = linear_index(grid.dim, n, idx);
    herm[l] = 0.5 * (coeffs[l] + std::conj(coeffs[neg]));
  }
  std::vector<double> values(grid.size());
  fft::inverse_real(grid.dim, n, herm, values);
  return with_spectrum(grid, std::move(values), std::move(herm));
}

const Spectrum& ScalarField::spectrum() const {
  if (!cache_) throw Error(ErrorCode::BadArgument, "spectrum of an empty field");
  std::call_once(cache_->once, [this] {
    cache_->data.resize(values_->size());
    fft::forward(grid_.dim, grid_.points, std::span<const double>(*values_), cache_->data);
    cache_->ready.store(true, std::memory_order_release);
  });
  return cache_->data;
}

ScalarField operator+(const ScalarField& a, const ScalarField& b) {
  require_same_grid(a.grid(), b.grid(), "field sum");
  std::vector<double> v(a.values().size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = a.values()[i] + b.values()[i];
  if (!(a.has_spectrum() && b.has_spectrum())) return ScalarField(a.grid(), std::move(v));
  Spectrum s(v.size());
  for (std::size_t i = 0; i < s.size(); ++i) s[i] = a.spectrum()[i] + b.spectrum()[i];
  return ScalarField::with_spectrum(a.grid(), std::move(v), std::move(s));
}

ScalarField operator-(const ScalarField& a, const ScalarField& b) {
  require_same_grid(a.grid(), b.grid(), "field difference");
  std::vector<double> v(a.values().size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = a.values()[i] - b.values()[i];
  if (!(a.has_spectrum() && b.has_spectrum())) return ScalarField(a.grid(), std::move(v));
  Spectrum s(v.size());
  for (std::size_t i = 0; i < s.size(); ++i) s[i] = a.spectrum()[i] - b.spectrum()[i];
  return ScalarField::with_spectrum(a.grid(), std::move(v), std::move(s));
}

ScalarField operator*(double c, const ScalarField& a) {
  std::vector<double> v(a.values().size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = c * a.values()[i];
  if (!a.has_spectrum()) return ScalarField(a.grid(), std::move(v));
  Spectrum s(v.size());
  for (std::size_t i = 0; i < s.size(); ++i) s[i] = c * a.spectrum()[i];
  return ScalarField::with_spectrum(a.grid(), std::move(v), std::move(s));
}

// ---------------------------------------------------------------------------

MatrixField::MatrixField(GridSpec grid, int dim, std::vector<ScalarField> pairs)
    : grid_(grid), dim_(dim), pairs_(std::move(pairs)) {
  if (dim != grid.dim) throw Error(ErrorCode::GridMismatch, "matrix dimension differs from grid dimension");
  if (static_cast<int>(pairs_.size()) != pair_count(dim))
    throw Error(ErrorCode::BadArgument, "matrix field needs d(d+1)/2 entries");
  for (const auto& e : pairs_) require_same_grid(e.grid(), grid_, "matrix field entry");
}

MatrixField MatrixField::zeros(GridSpec grid) {
  std::vector<ScalarField> e(pair_count(grid.dim), ScalarField::zeros(grid));
  return MatrixField(grid, grid.dim, std::move(e));
}

MatrixField operator+(const MatrixField& a, const MatrixField& b) {
  std::vector<ScalarField> e;
  for (int p = 0; p < pair_count(a.dim()); ++p) e.push_back(a.pair(p) + b.pair(p));
  return MatrixField(a.grid(), a.dim(), std::move(e));
}

MatrixField operator-(const MatrixField& a, const MatrixField& b) {
  std::vector<ScalarField> e;
  for (int p = 0; p < pair_count(a.dim()); ++p) e.push_back(a.pair(p) - b.pair(p));
  return MatrixField(a.grid(), a.dim(), std::move(e));
}

MatrixField operator*(double s, const MatrixField& a) {
  std::vector<ScalarField> e;
  for (int p = 0; p < pair_count(a.dim()); ++p) e.push_back(s * a.pair(p));
  return MatrixField(a.grid(), a.dim(), std::move(e));
}

// ---------------------------------------------------------------------------

RealVec wavevector(const IntVec& k, double period) {
  const double f = 2.0 * std::numbers::pi / period;
  return {f * k[0], f * k[1], f * k[2]};
}

Spectrum derivative_spectrum(const Spectrum& u, const GridSpec& grid, const IntVec& orders) {
  auto modes = ModeTable::get(grid.dim, grid.points);
  int total = 0;
  for (int j = 0; j < grid.dim; ++j) total += orders[j];
  // i^total
  static const Complex ipow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  const Complex phase = ipow[total % 4];
  Spectrum out(u.size());
  for (std::size_t l = 0; l < u.size(); ++l) {
    if (modes->nyquist(l)) {
      out[l] = 0.0;
      continue;
    }
    const RealVec xi = wavevector(modes->k(l), grid.period);
    double m = 1.0;
    for (int j = 0; j < grid.dim; ++j)
      for (int r = 0; r < orders[j]; ++r) m *= xi[j];
    out[l] = u[l] * (phase * m);
  }
  return out;
}

ScalarField derivative(const ScalarField& u, const IntVec& orders) {
  return ScalarField::from_spectrum(u.grid(), derivative_spectrum(u.spectrum(), u.grid(), orders));
}

ScalarField derivative_along(const ScalarField& u, std::span<const int> axes) {
  IntVec orders{0, 0, 0};
  for (int a : axes) {
    if (a < 0 || a >= u.grid().dim) throw Error(ErrorCode::BadArgument, "derivative axis out of range");
    ++orders[a];
  }
  return derivative(u, orders);
}

MatrixField apply_D(const ScalarField& u) {
  const int d = u.grid().dim;
  std::vector<ScalarField> e;
  for (int p = 0; p < pair_count(d); ++p) {
    auto [i, j] = pair_of(d, p);
    IntVec orders{0, 0, 0};
    ++orders[i];
    ++orders[j];
    e.push_back(derivative(u, orders));
  }
  return MatrixField(u.grid(), d, std::move(e));
}

ScalarField apply_Dstar(const MatrixField& eta) {
  const GridSpec& g = eta.grid();
  const int d = eta.dim();
  Spectrum acc(g.size(), Complex(0.0));
  for (int p = 0; p < pair_count(d); ++p) {
    auto [i, j] = pair_of(d, p);
    IntVec orders{0, 0, 0};
    ++orders[i];
    ++orders[j];
    Spectrum s = derivative_spectrum(eta.pair(p).spectrum(), g, orders);
    const double w = pair_weight(d, p);
    for (std::size_t l = 0; l < acc.size(); ++l) acc[l] += w * s[l];
  }
  return ScalarField::from_spectrum(g, std::move(acc));
}

const char* space_name(Space s) {
  switch (s) {
    case Space::L2: return "L2";
    case Space::H1: return "H1";
    case Space::H2: return "H2";
    case Space::H4: return "H4";
    case Space::Hminus2: return "H-2";
  }
  return "?";
}

double sobolev_norm(const ScalarField& u, Space space) {
  const GridSpec& g = u.grid();
  auto modes = ModeTable::get(g.dim, g.points);
  const Spectrum& s = u.spectrum();
  double acc = 0.0;
  for (std::size_t l = 0; l < s.size(); ++l) {
    const RealVec xi = wavevector(modes->k(l), g.period);
    double x2 = 0.0;
    for (int j = 0; j < g.dim; ++j) x2 += xi[j] * xi[j];
    double w = 1.0;
    switch (space) {
      case Space::L2: w = 1.0; break;
      case Space::H1: w = 1.0 + x2; break;
      case Space::H2: w = 1.0 + x2 * x2; break;
      case Space::H4: w = 1.0 + x2 * x2 * x2 * x2; break;
      case Space::Hminus2: w = 1.0 / (1.0 + x2 * x2); break;
    }
    acc += w * std::norm(s[l]);
  }
  return std::sqrt(g.volume() * acc);
}

double inner(const ScalarField& u, const ScalarField& v) {
  require_same_grid(u.grid(), v.grid(), "inner product");
  const Spectrum& a = u.spectrum();
  const Spectrum& b = v.spectrum();
  double acc = 0.0;
  for (std::size_t l = 0; l < a.size(); ++l) acc += (a[l] * std::conj(b[l])).real();
  return u.grid().volume() * acc;
}

double inner(const MatrixField& a, const MatrixField& b) {
  double acc = 0.0;
  for (int p = 0; p < pair_count(a.dim()); ++p) acc += pair_weight(a.dim(), p) * inner(a.pair(p), b.pair(p));
  return acc;
}

double l2_norm(const MatrixField& eta) { return std::sqrt(std::max(0.0, inner(eta, eta))); }

ScalarField inv_laplacian_power(const ScalarField& u, int p) {
  if (p < 1) throw Error(ErrorCode::BadArgument, "inverse Laplacian power must be >= 1");
  const double norm = sobolev_norm(u, Space::L2) / std::sqrt(u.grid().volume());
  if (std::abs(u.spectrum()[0]) > 1e-10 * norm)
    throw Error(ErrorCode::NonZeroMean, "inverse Laplacian needs a mean-zero field");
  return apply_multiplier(u, [p](const RealVec& xi, const IntVec& k, bool) {
    if (k[0] == 0 && k[1] == 0 && k[2] == 0) return 0.0;
    const double x2 = xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2];
    return 1.0 / std::pow(-x2, p);
  });
}

// ---------------------------------------------------------------------------

int padded_points(int points) { return 3 * points / 2; }

Spectrum pad_spectrum(const Spectrum& s, int dim, int n, int p) {
  auto src = ModeTable::get(dim, n);
  auto dst = ModeTable::get(dim, p);
  Spectrum out(dst->size(), Complex(0.0));
  for (std::size_t l = 0; l < s.size(); ++l) {
    if (src->nyquist(l)) continue;
    out[dst->slot(src->k(l))] = s[l];
  }
  return out;
}

Spectrum truncate_spectrum(const Spectrum& s, int dim, int p, int n) {
  auto src = ModeTable::get(dim, p);
  auto dst = ModeTable::get(dim, n);
  (void)src;
  Spectrum out(dst->size(), Complex(0.0));
  for (std::size_t l = 0; l < out.size(); ++l) {
    if (dst->nyquist(l)) continue;
    out[l] = s[src->slot(dst->k(l))];
  }
  return out;
}

std::vector<double> padded_values(const Spectrum& s, const GridSpec& grid, int p) {
  Spectrum padded = pad_spectrum(s, grid.dim, grid.points, p);
  std::vector<double> v(padded.size());
  fft::inverse_real(grid.dim, p, padded, v);
  return v;
}

std::vector<double> padded_values(const ScalarField& u, int p) {
  return padded_values(u.spectrum(), u.grid(), p);
}

Spectrum truncate_from_padded(std::span<const double> values, const GridSpec& grid, int p) {
  Spectrum full(values.size());
  fft::forward(grid.dim, p, values, full);
  return truncate_spectrum(full, grid.dim, p, grid.points);
}

ScalarField pointwise_product(const ScalarField& u, const ScalarField& v, bool dealias) {
  std::pair<ScalarField, ScalarField> term{u, v};
  return sum_of_products(std::span<const std::pair<ScalarField, ScalarField>>(&term, 1), dealias);
}

ScalarField sum_of_products(std::span<const std::pair<ScalarField, ScalarField>> terms, bool dealias) {
  if (terms.empty()) throw Error(ErrorCode::BadArgument, "empty product sum");
  const GridSpec g = terms.front().first.grid();
  for (const auto& [a, b] : terms) {
    require_same_grid(a.grid(), g, "pointwise product");
    require_same_grid(b.grid(), g, "pointwise product");
  }
  if (!dealias) {
    std::vector<double> acc(g.size(), 0.0);
    for (const auto& [a, b] : terms)
      for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += a.values()[i] * b.values()[i];
    return ScalarField(g, std::move(acc));
  }
  const int p = padded_points(g.points);
  const GridSpec pg{g.dim, p, g.period};
  std::vector<double> acc(pg.size(), 0.0);
  for (const auto& [a, b] : terms) {
    std::vector<double> pa = padded_values(a, p);
    std::vector<double> pb = padded_values(b, p);
    for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += pa[i] * pb[i];
  }
  return ScalarField::from_spectrum(g, truncate_from_padded(acc, g, p));
}

}  // namespace hom4
