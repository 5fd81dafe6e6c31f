// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <random>

#include "cell.hpp"
#include "errors.hpp"
#include "parallel.hpp"
#include "support.hpp"

using namespace hom4;
using hom4::test::kTwoPi;

namespace {

const CellData& default_cell() {
  static const CellData cell =
      cell_pipeline(make_family({FamilyKind::ScalarIsotropic, {1.5, 0.5}}, {2, 32, 1.0}));
  return cell;
}

// Values of the trigonometric interpolant of u on a grid `factor` times finer,
// with Nyquist slots dropped.
std::vector<double> oversample(const ScalarField& u, int factor) {
  const GridSpec& g = u.grid();
  const GridSpec fine{g.dim, g.points * factor, g.period};
  auto coarse = ModeTable::get(g.dim, g.points);
  auto fm = ModeTable::get(g.dim, fine.points);
  Spectrum s(fine.size(), Complex(0.0));
  for (std::size_t l = 0; l < coarse->size(); ++l)
    if (!coarse->nyquist(l)) s[fm->slot(coarse->k(l))] = u.spectrum()[l];
  const auto f = ScalarField::from_spectrum(fine, std::move(s));
  return {f.values().begin(), f.values().end()};
}

double oversampled_mean(const ScalarField& u, const ScalarField& v) {
  const auto a = oversample(u, 4);
  const auto b = oversample(v, 4);
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc / static_cast<double>(a.size());
}

}  // namespace

TEST_CASE("one-dimensional oracle: harmonic mean and explicit correctors") {
  const GridSpec g{1, 256, 1.0};
  const Tensor4Field a = make_family({FamilyKind::D1Profile, {2.0, 1.0}}, g);
  const CellData cell = cell_pipeline(a);
  CHECK(std::abs(cell.a_hat(0, 0, 0, 0) - std::sqrt(3.0)) <= 1e-8);

  // a (N'' + 1) = a_hat, so N'' = a_hat / a - 1 with N of mean zero.
  const double ah = std::sqrt(3.0);
  const auto rhs = ScalarField::sample(g, [&](const RealVec& y) { return ah / (2.0 + std::sin(kTwoPi * y[0])) - 1.0; });
  const auto N = apply_multiplier(rhs, [](const RealVec& xi, const IntVec&, bool nyq) {
    return (xi[0] == 0.0 || nyq) ? 0.0 : -1.0 / (xi[0] * xi[0]);
  });
  CHECK(hom4::test::max_abs_diff(cell.n2(0, 0), N) <= 1e-9);

  // a (N3'' + 2 N') is constant, so N3' = -2 N and b = 0.
  const auto N3 = apply_multiplier(N, [](const RealVec& xi, const IntVec&, bool nyq) {
    return (xi[0] == 0.0 || nyq) ? Complex(0.0) : Complex(-2.0) / Complex(0.0, xi[0]);
  });
  CHECK(hom4::test::max_abs_diff(cell.n3(0, 0, 0), N3) <= 1e-9);
  CHECK(std::abs(cell.b_of(0, 0, 0)(0, 0)) <= 1e-9);
  CHECK(hom4::test::max_abs(cell.flux2(0, 0).entry(0, 0)) <= 1e-9);
}

TEST_CASE("constant coefficients are reproduced exactly") {
  const GridSpec g{2, 16, 1.0};
  std::vector<double> comp;
  auto del = [](int x, int y) { return x == y ? 1.0 : 0.0; };
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int s = 0; s < 2; ++s)
        for (int t = 0; t < 2; ++t) comp.push_back(0.4 * del(i, j) * del(s, t) + 0.75 * (del(i, s) * del(j, t) + del(i, t) * del(j, s)));
  const Tensor4 a0 = Tensor4::from_components(2, comp);
  const CellData cell = cell_pipeline(Tensor4Field::constant(g, a0));
  const auto got = cell.a_hat.components();
  for (std::size_t i = 0; i < comp.size(); ++i) CHECK(std::abs(got[i] - comp[i]) <= 1e-13);
  for (const auto& n : cell.N2) CHECK(hom4::test::max_abs(n) == 0.0);
  for (const auto& n : cell.N3) CHECK(hom4::test::max_abs(n) == 0.0);
  for (const auto& b : cell.b)
    for (int p = 0; p < 3; ++p) CHECK(b.pair(p) == 0.0);
  for (double c : cell.c) CHECK(c == 0.0);
  CHECK(lambda0_diagnostic(cell) == 0.0);
}

TEST_CASE("homogenized tensor lies between the Reuss and Voigt bounds") {
  const CellData& cell = default_cell();
  // rho = 1.5 + 0.5 sin sin; bounds from an independent fine quadrature.
  const int n = 512;
  double mean_inv = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      mean_inv += 1.0 / (1.5 + 0.5 * std::sin(kTwoPi * i / n) * std::sin(kTwoPi * j / n));
  mean_inv /= static_cast<double>(n) * n;
  auto [lo, hi] = cell.a_hat.eigen_range();
  CHECK(lo >= 1.0 / mean_inv - 1e-12);
  CHECK(hi <= 1.5 + 1e-12);
  CHECK(cell.a_hat_asymmetry <= 1e-10);
  // The family is invariant under swapping the axes.
  CHECK(cell.a_hat(0, 0, 0, 0) == doctest::Approx(cell.a_hat(1, 1, 1, 1)).epsilon(1e-12));
}

TEST_CASE("energy identity and minimality of the cell solution (property)") {
  const CellData& cell = default_cell();
  const GridSpec& g = cell.grid;
  const auto rho = ScalarField::sample(g, [](const RealVec& y) {
    return 1.5 + 0.5 * std::sin(kTwoPi * y[0]) * std::sin(kTwoPi * y[1]);
  });
  auto energy = [&](const ScalarField& N) {
    const MatrixField H = apply_D(N);
    const auto a = oversample(rho, 4);
    const auto h00 = oversample(H.entry(0, 0), 4);
    const auto h01 = oversample(H.entry(0, 1), 4);
    const auto h11 = oversample(H.entry(1, 1), 4);
    double e = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      const double x = h00[i] + 1.0;
      e += a[i] * (x * x + 2.0 * h01[i] * h01[i] + h11[i] * h11[i]);
    }
    return e / static_cast<double>(a.size());
  };
  const double e0 = energy(cell.n2(0, 0));
  CHECK(e0 == doctest::Approx(cell.a_hat(0, 0, 0, 0)).epsilon(1e-10));
  std::mt19937_64 rng(4);
  for (int t = 0; t < 5; ++t) {
    const auto phi = hom4::test::random_field(g, 4, rng, true);
    const auto trial = cell.n2(0, 0) + (1e-3 / std::sqrt(1.0 + t)) * phi;
    CHECK(energy(trial) > e0);
  }
}

TEST_CASE("cell solutions have zero mean") {
  const CellData& cell = default_cell();
  for (const auto& n : cell.N2) CHECK(std::abs(hom4::test::nodal_mean(n)) <= 1e-14);
  for (const auto& n : cell.N3) CHECK(std::abs(hom4::test::nodal_mean(n)) <= 1e-14);
  for (const auto& s : cell.solver_report) {
    CHECK(s.residual <= 1e-10);
    CHECK(s.iterations < 10000);
  }
}

TEST_CASE("potentials reproduce the solenoidal fluxes on a 64 grid") {
  const CellData cell = cell_pipeline(make_family({FamilyKind::ScalarIsotropic, {1.5, 0.5}}, {2, 64, 1.0}));
  auto check_family = [](const MatrixField& g, const std::vector<MatrixField>& G) {
    const double gn = l2_norm(g);
    for (int st = 0; st < 3; ++st) {
      CHECK(sobolev_norm(apply_Dstar(G[st]) - g.pair(st), Space::L2) <= 1e-10 * gn);
      for (int km = 0; km < 3; ++km) {
        const auto sum = G[st].pair(km) + G[km].pair(st);
        CHECK(hom4::test::max_abs(sum) == 0.0);
      }
    }
  };
  for (std::size_t r = 0; r < cell.g2.size(); ++r) check_family(cell.g2[r], cell.G2[r]);
  for (std::size_t t = 0; t < cell.g3.size(); ++t) check_family(cell.g3[t], cell.G3[t]);
}

TEST_CASE("potential construction rejects invalid fluxes") {
  const GridSpec g{2, 16, 1.0};
  const auto s = ScalarField::sample(g, [](const RealVec& y) { return std::cos(kTwoPi * y[0]); });
  const auto z = ScalarField::zeros(g);
  // D* of diag(cos, 0, 0) is -4 pi^2 cos != 0.
  try {
    potential_from_solenoidal(MatrixField(g, 2, {s, z, z}));
    FAIL("expected NotSolenoidal");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotSolenoidal);
  }
  const auto one = ScalarField::constant(g, 1.0);
  try {
    potential_from_solenoidal(MatrixField(g, 2, {one, z, z}));
    FAIL("expected NonZeroMean");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NonZeroMean);
  }
  // g = (cos(2 pi y), 0, 0) depends on y only, so D* g = 0.
  const auto cy = ScalarField::sample(g, [](const RealVec& y) { return std::cos(kTwoPi * y[1]); });
  const MatrixField sol(g, 2, {cy, z, z});
  const auto G = potential_from_solenoidal(sol);
  CHECK(sobolev_norm(apply_Dstar(G[0]) - cy, Space::L2) <= 1e-14);
}

TEST_CASE("sixth-order coefficients agree with oversampled quadrature") {
  const CellData& cell = default_cell();
  const int d = 2;
  std::vector<std::vector<ScalarField>> dN2(3), dN3(cell.N3.size());
  for (int r = 0; r < 3; ++r)
    for (int s = 0; s < d; ++s) dN2[r].push_back(derivative(cell.N2[r], {s == 0, s == 1, 0}));
  for (std::size_t t = 0; t < cell.N3.size(); ++t)
    for (int s = 0; s < d; ++s) dN3[t].push_back(derivative(cell.N3[t], {s == 0, s == 1, 0}));
  for (const auto& ix : std::vector<std::array<int, 6>>{{0, 0, 0, 0, 0, 0}, {0, 1, 1, 0, 1, 0}, {1, 1, 0, 0, 1, 1}}) {
    const auto [i, j, k, p, m, n] = ix;
    const int ijk = cell.triple_index(i, j, k), mn = pair_index(d, m, n), ij = pair_index(d, i, j);
    double v = 0.0;
    for (int q = 0; q < d; ++q) {
      v += 2.0 * oversampled_mean(cell.g3[ijk].entry(p, q), dN2[mn][q]);
      v -= 2.0 * oversampled_mean(dN3[ijk][q], cell.g2[mn].entry(q, p));
    }
    v -= oversampled_mean(cell.N2[ij], cell.g2[mn].entry(k, p));
    v -= oversampled_mean(cell.g2[ij].entry(k, p), cell.N2[mn]);
    CHECK(cell.c_of(i, j, k, p, m, n) == doctest::Approx(v).epsilon(1e-10).scale(1e-6));
  }
}

TEST_CASE("lambda0 is reported and vanishes for reflection-symmetric families") {
  CHECK(lambda0_diagnostic(default_cell()) <= 1e-12);
  const CellData fine = cell_pipeline(make_family({FamilyKind::ScalarIsotropic, {1.5, 0.5}}, {2, 64, 1.0}));
  CHECK(std::abs(lambda0_diagnostic(fine) - lambda0_diagnostic(default_cell())) <= 1e-12);
}

TEST_CASE("cell pipeline is deterministic across thread counts") {
  const Tensor4Field a = make_family({FamilyKind::ScalarIsotropic, {2.0, 0.5, 0.2}}, {2, 16, 1.0});
  set_thread_count(1);
  const CellData one = cell_pipeline(a);
  set_thread_count(3);
  const CellData three = cell_pipeline(a);
  set_thread_count(1);
  CHECK(one.a_hat.components() == three.a_hat.components());
  CHECK(one.c == three.c);
  for (std::size_t t = 0; t < one.N3.size(); ++t)
    CHECK(std::equal(one.N3[t].values().begin(), one.N3[t].values().end(), three.N3[t].values().begin()));
}

TEST_CASE("solver failures carry the problem index") {
  CellOptions opt;
  opt.max_iter = 1;
  try {
    cell_pipeline(make_family({FamilyKind::ScalarIsotropic, {1.5, 0.5}}, {2, 16, 1.0}), opt);
    FAIL("expected NoConvergence");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NoConvergence);
    CHECK(std::string(e.what()).find("N(0,0)") != std::string::npos);
  }
}

TEST_CASE("discontinuous checkerboard coefficients still solve") {
  const GridSpec g{2, 16, 1.0};
  const Tensor4Field a = make_family({FamilyKind::Checkerboard, {2.0, 0.5}}, g);
  CHECK(a.at(0).pair_entry(0, 0) == 2.5);
  CHECK(a.at(g.size() - 1).pair_entry(0, 0) == 2.5);
  CHECK(a.at(8).pair_entry(0, 0) == 1.5);
  const CellData cell = cell_pipeline(a);
  auto [lo, hi] = cell.a_hat.eigen_range();
  // Voigt: N = 0 is admissible, and the nodal mean of rho is 2.
  CHECK(hi <= 2.0 + 1e-12);
  CHECK(lo >= 1.0);
  CHECK(cell.a_hat_asymmetry <= 1e-10);
}
