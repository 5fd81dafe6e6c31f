// SPDX-License-Identifier: Apache-2.0
#include "tensor.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "errors.hpp"

namespace hom4 {
namespace {

int upper_slot(int q, int p, int r) {
  if (p > r) std::swap(p, r);
  return p * q - p * (p - 1) / 2 + (r - p);
}

Eigen::MatrixXd mandel(const Tensor4& a) {
  const int d = a.dim();
  const int q = pair_count(d);
  Eigen::MatrixXd m(q, q);
  for (int p = 0; p < q; ++p)
    for (int r = 0; r < q; ++r)
      m(p, r) = std::sqrt(pair_weight(d, p) * pair_weight(d, r)) * a.pair_entry(p, r);
  return m;
}

}  // namespace

Tensor4::Tensor4(int dim) : dim_(dim) {
  if (dim < 1 || dim > 3) throw Error(ErrorCode::BadArgument, "tensor dimension must be 1, 2 or 3");
}

int Tensor4::slot(int p, int r) const { return upper_slot(pair_count(dim_), p, r); }

Tensor4 Tensor4::identity(int dim) {
  Tensor4 a(dim);
  for (int p = 0; p < pair_count(dim); ++p) a.set_pair_entry(p, p, 1.0 / pair_weight(dim, p));
  return a;
}

Tensor4 Tensor4::from_components(int dim, std::span<const double> full) {
  Tensor4 a(dim);
  const std::size_t n = static_cast<std::size_t>(dim * dim * dim * dim);
  if (full.size() != n) throw Error(ErrorCode::BadArgument, "tensor needs d^4 components");
  auto at = [&](int i, int j, int s, int t) { return full[((i * dim + j) * dim + s) * dim + t]; };
  double scale = 0.0;
  for (double v : full) scale = std::max(scale, std::abs(v));
  const double tol = 1e-12 * std::max(scale, 1.0);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j)
      for (int s = 0; s < dim; ++s)
        for (int t = 0; t < dim; ++t) {
          const double v = at(i, j, s, t);
          if (std::abs(v - at(s, t, i, j)) > tol || std::abs(v - at(j, i, s, t)) > tol) {
            std::ostringstream os;
            os << "a_" << i << j << s << t << " violates a_ijst = a_stij = a_jist";
            throw Error(ErrorCode::SymmetryViolation, os.str());
          }
        }
  for (int p = 0; p < pair_count(dim); ++p)
    for (int r = p; r < pair_count(dim); ++r) {
      auto [i, j] = pair_of(dim, p);
      auto [s, t] = pair_of(dim, r);
      a.set_pair_entry(p, r, at(i, j, s, t));
    }
  return a;
}

double Tensor4::operator()(int i, int j, int s, int t) const {
  return pair_entry(pair_index(dim_, i, j), pair_index(dim_, s, t));
}

SymMatrix Tensor4::apply(std::span<const double> xi) const {
  if (xi.size() != static_cast<std::size_t>(dim_ * dim_))
    throw Error(ErrorCode::BadArgument, "matrix argument needs d^2 entries");
  SymMatrix out(dim_);
  for (int p = 0; p < pair_count(dim_); ++p) {
    double acc = 0.0;
    for (int s = 0; s < dim_; ++s)
      for (int t = 0; t < dim_; ++t) acc += pair_entry(p, pair_index(dim_, s, t)) * xi[s * dim_ + t];
    out.pair(p) = acc;
  }
  return out;
}

std::vector<double> Tensor4::components() const {
  const int d = dim_;
  std::vector<double> full(static_cast<std::size_t>(d * d * d * d));
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int s = 0; s < d; ++s)
        for (int t = 0; t < d; ++t) full[((i * d + j) * d + s) * d + t] = (*this)(i, j, s, t);
  return full;
}

std::pair<double, double> Tensor4::eigen_range() const {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(mandel(*this), Eigen::EigenvaluesOnly);
  return {es.eigenvalues().minCoeff(), es.eigenvalues().maxCoeff()};
}

double Tensor4::quartic_form(const RealVec& xi) const {
  double acc = 0.0;
  for (int p = 0; p < pair_count(dim_); ++p) {
    auto [i, j] = pair_of(dim_, p);
    for (int r = 0; r < pair_count(dim_); ++r) {
      auto [s, t] = pair_of(dim_, r);
      acc += pair_weight(dim_, p) * pair_weight(dim_, r) * pair_entry(p, r) * xi[i] * xi[j] * xi[s] * xi[t];
    }
  }
  return acc;
}

// ---------------------------------------------------------------------------

Tensor4Field::Tensor4Field(GridSpec grid, std::vector<ScalarField> components)
    : grid_(grid), comps_(std::move(components)) {
  const int q = pair_count(grid.dim);
  if (static_cast<int>(comps_.size()) != q * (q + 1) / 2)
    throw Error(ErrorCode::BadArgument, "tensor field needs q(q+1)/2 component fields");
  for (const auto& c : comps_) require_same_grid(c.grid(), grid_, "tensor field component");
}

Tensor4Field Tensor4Field::constant(GridSpec grid, const Tensor4& a) {
  if (a.dim() != grid.dim) throw Error(ErrorCode::GridMismatch, "tensor and grid dimensions differ");
  const int q = pair_count(grid.dim);
  std::vector<ScalarField> comps;
  for (int p = 0; p < q; ++p)
    for (int r = p; r < q; ++r) comps.push_back(ScalarField::constant(grid, a.pair_entry(p, r)));
  return Tensor4Field(grid, std::move(comps));
}

Tensor4Field Tensor4Field::scaled(const ScalarField& rho, const Tensor4& base) {
  const GridSpec& g = rho.grid();
  if (base.dim() != g.dim) throw Error(ErrorCode::GridMismatch, "tensor and grid dimensions differ");
  const int q = pair_count(g.dim);
  std::vector<ScalarField> comps;
  for (int p = 0; p < q; ++p)
    for (int r = p; r < q; ++r) {
      const double c = base.pair_entry(p, r);
      comps.push_back(c == 0.0 ? ScalarField::zeros(g) : c * rho);
    }
  return Tensor4Field(g, std::move(comps));
}

const ScalarField& Tensor4Field::component(int p, int r) const {
  return comps_[upper_slot(pair_count(grid_.dim), p, r)];
}

Tensor4 Tensor4Field::at(std::size_t node) const {
  const int q = pair_count(grid_.dim);
  Tensor4 a(grid_.dim);
  for (int p = 0; p < q; ++p)
    for (int r = p; r < q; ++r) a.set_pair_entry(p, r, component(p, r).values()[node]);
  return a;
}

Tensor4 Tensor4Field::mean() const {
  const int q = pair_count(grid_.dim);
  Tensor4 a(grid_.dim);
  for (int p = 0; p < q; ++p)
    for (int r = p; r < q; ++r) a.set_pair_entry(p, r, component(p, r).mean());
  return a;
}

double Tensor4Field::rms_norm() const {
  const int d = grid_.dim;
  const int q = pair_count(d);
  double acc = 0.0;
  for (int p = 0; p < q; ++p)
    for (int r = 0; r < q; ++r) {
      const auto& c = component(p, r);
      double m2 = 0.0;
      for (double v : c.values()) m2 += v * v;
      acc += pair_weight(d, p) * pair_weight(d, r) * m2 / static_cast<double>(c.values().size());
    }
  return std::sqrt(acc);
}

// ---------------------------------------------------------------------------

Validation validate(const Tensor4Field& a) {
  a.grid().validate();
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  std::size_t worst = 0;
  for (std::size_t node = 0; node < a.grid().size(); ++node) {
    auto [mn, mx] = a.at(node).eigen_range();
    if (mn < lo) {
      lo = mn;
      worst = node;
    }
    hi = std::max(hi, mx);
  }
  if (!(lo > 0.0)) {
    std::ostringstream os;
    os << "smallest eigenvalue " << lo << " at node " << worst;
    throw Error(ErrorCode::NotElliptic, os.str());
  }
  Validation v;
  v.min_eigenvalue = lo;
  v.max_eigenvalue = hi;
  // (1 - 1e-12) absorbs the last-bit error of the eigen solver on exact 1.
  v.needs_rescale = lo < 1.0 - 1e-12;
  v.lambda = v.needs_rescale ? lo / hi : 1.0 / hi;
  if (v.needs_rescale) {
    std::ostringstream os;
    os << "divide the tensor by " << lo << " to reach the lower bound 1; lambda is then " << v.lambda;
    v.advice = os.str();
  }
  return v;
}

FamilyKind family_kind_from_string(const std::string& s) {
  if (s == "constant") return FamilyKind::Constant;
  if (s == "scalar_isotropic") return FamilyKind::ScalarIsotropic;
  if (s == "d1_profile") return FamilyKind::D1Profile;
  if (s == "checkerboard") return FamilyKind::Checkerboard;
  throw Error(ErrorCode::BadParameters, "unknown coefficient family '" + s + "'");
}

std::string family_kind_name(FamilyKind k) {
  switch (k) {
    case FamilyKind::Constant: return "constant";
    case FamilyKind::ScalarIsotropic: return "scalar_isotropic";
    case FamilyKind::D1Profile: return "d1_profile";
    case FamilyKind::Checkerboard: return "checkerboard";
  }
  return "?";
}

namespace {

void require_floor(const Tensor4Field& a) {
  Validation v;
  try {
    v = validate(a);
  } catch (const Error& e) {
    throw Error(ErrorCode::BadParameters, std::string("family is not elliptic: ") + e.what());
  }
  if (v.needs_rescale) {
    std::ostringstream os;
    os << "family falls below the ellipticity floor (min eigenvalue " << v.min_eigenvalue << "); " << v.advice;
    throw Error(ErrorCode::BadParameters, os.str());
  }
}

double param(const std::vector<double>& p, std::size_t i) { return i < p.size() ? p[i] : 0.0; }

}  // namespace

Tensor4Field make_family(const CoefficientFamily& family, const GridSpec& grid) {
  grid.validate();
  const auto& p = family.parameters;
  for (double v : p)
    if (!std::isfinite(v)) throw Error(ErrorCode::BadParameters, "non-finite family parameter");
  const double two_pi = 2.0 * std::numbers::pi;
  Tensor4Field a;
  switch (family.kind) {
    case FamilyKind::Constant: {
      const std::size_t full = static_cast<std::size_t>(std::pow(grid.dim, 4));
      if (p.empty()) {
        a = Tensor4Field::constant(grid, Tensor4::identity(grid.dim));
      } else if (p.size() == 1) {
        Tensor4 t = Tensor4::identity(grid.dim);
        for (int q = 0; q < pair_count(grid.dim); ++q) t.set_pair_entry(q, q, p[0] * t.pair_entry(q, q));
        a = Tensor4Field::constant(grid, t);
      } else if (p.size() == full) {
        a = Tensor4Field::constant(grid, Tensor4::from_components(grid.dim, p));
      } else {
        throw Error(ErrorCode::BadParameters, "constant family takes 0, 1 or d^4 parameters");
      }
      break;
    }
    case FamilyKind::ScalarIsotropic: {
      if (p.size() < 2 || p.size() > 3)
        throw Error(ErrorCode::BadParameters, "scalar_isotropic takes [c0, c1] or [c0, c1, c2]");
      ScalarField rho = ScalarField::sample(grid, [&](const RealVec& y) {
        double prod = 1.0;
        double sum = 0.0;
        for (int j = 0; j < grid.dim; ++j) {
          prod *= std::sin(two_pi * y[j]);
          sum += std::cos(two_pi * y[j]);
        }
        return p[0] + p[1] * prod + param(p, 2) * sum;
      });
      a = Tensor4Field::scaled(rho, Tensor4::identity(grid.dim));
      break;
    }
    case FamilyKind::D1Profile: {
      if (grid.dim != 1) throw Error(ErrorCode::BadParameters, "d1_profile needs a one-dimensional grid");
      if (p.size() < 2 || p.size() > 3)
        throw Error(ErrorCode::BadParameters, "d1_profile takes [c0, c1] or [c0, c1, c2]");
      ScalarField prof = ScalarField::sample(grid, [&](const RealVec& y) {
        return p[0] + p[1] * std::sin(two_pi * y[0]) + param(p, 2) * std::cos(two_pi * y[0]);
      });
      a = Tensor4Field::scaled(prof, Tensor4::identity(1));
      break;
    }
    case FamilyKind::Checkerboard: {
      if (p.size() != 2) throw Error(ErrorCode::BadParameters, "checkerboard takes [c0, c1]");
      ScalarField rho = ScalarField::sample(grid, [&](const RealVec& y) {
        double s = 1.0;
        for (int j = 0; j < grid.dim; ++j) s *= y[j] < 0.5 ? 1.0 : -1.0;
        return p[0] + p[1] * s;
      });
      a = Tensor4Field::scaled(rho, Tensor4::identity(grid.dim));
      break;
    }
  }
  require_floor(a);
  return a;
}

}  // namespace hom4
