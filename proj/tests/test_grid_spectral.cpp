// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <map>
#include <random>

#include "errors.hpp"
#include "operator.hpp"
#include "spectral.hpp"
#include "support.hpp"

using namespace hom4;
using hom4::test::kTwoPi;

TEST_CASE("grid validation rejects unusable grids") {
  CHECK_THROWS_AS(GridSpec({2, 5, 1.0}).validate(), Error);
  CHECK_THROWS_AS(GridSpec({2, 2, 1.0}).validate(), Error);
  CHECK_THROWS_AS(GridSpec({4, 8, 1.0}).validate(), Error);
  CHECK_THROWS_AS(GridSpec({1, 8, 0.0}).validate(), Error);
  CHECK_NOTHROW(GridSpec({3, 12, 1.0}).validate());
  CHECK(is_power_of_two(32));
  CHECK_FALSE(is_power_of_two(48));
}

TEST_CASE("mode table covers every wavenumber once") {
  auto t = ModeTable::get(2, 8);
  REQUIRE(t->size() == 64u);
  std::map<std::pair<int, int>, int> seen;
  int nyq = 0;
  for (std::size_t l = 0; l < t->size(); ++l) {
    seen[{t->k(l)[0], t->k(l)[1]}]++;
    CHECK(t->slot(t->k(l)) == l);
    nyq += t->nyquist(l) ? 1 : 0;
  }
  CHECK(seen.size() == 64u);
  CHECK(nyq == 64 - 49);
}

TEST_CASE("single mode has the expected coefficients") {
  const GridSpec g{2, 16, 1.0};
  const auto u = ScalarField::sample(g, [](const RealVec& x) { return std::cos(kTwoPi * (2 * x[0] - 3 * x[1]) + 0.4); });
  auto t = ModeTable::get(2, 16);
  const Complex c = u.spectrum()[t->slot({2, -3, 0})];
  const Complex cm = u.spectrum()[t->slot({-2, 3, 0})];
  CHECK(std::abs(c - 0.5 * std::exp(Complex(0.0, 0.4))) < 1e-15);
  CHECK(std::abs(cm - 0.5 * std::exp(Complex(0.0, -0.4))) < 1e-15);
}

TEST_CASE("transform round trip is exact to roundoff") {
  std::mt19937_64 rng(11);
  for (int dim = 1; dim <= 3; ++dim) {
    const GridSpec g{dim, dim == 3 ? 8 : 32, 1.0};
    const auto u = hom4::test::random_field(g, 3, rng);
    const auto back = ScalarField::from_spectrum(g, u.spectrum());
    CHECK(hom4::test::max_abs_diff(u, back) <= 1e-13 * hom4::test::max_abs(u));
  }
}

TEST_CASE("derivatives of trigonometric polynomials match closed forms") {
  const GridSpec g{2, 32, 1.0};
  const auto u = ScalarField::sample(g, [](const RealVec& x) { return std::sin(kTwoPi * x[0]) * std::cos(2 * kTwoPi * x[1]); });
  const auto uxy = derivative(u, {1, 1, 0});
  const auto exact = ScalarField::sample(g, [](const RealVec& x) {
    return -2.0 * kTwoPi * kTwoPi * std::cos(kTwoPi * x[0]) * std::sin(2 * kTwoPi * x[1]);
  });
  CHECK(hom4::test::max_abs_diff(uxy, exact) < 1e-11);

  const int axes[] = {0, 0, 1};
  const auto u3 = derivative_along(u, axes);
  const auto exact3 = ScalarField::sample(g, [](const RealVec& x) {
    return 2.0 * std::pow(kTwoPi, 3) * std::sin(kTwoPi * x[0]) * std::sin(2 * kTwoPi * x[1]);
  });
  CHECK(hom4::test::max_abs_diff(u3, exact3) < 1e-9);
}

TEST_CASE("derivatives drop the Nyquist mode") {
  const GridSpec g{1, 8, 1.0};
  const auto u = ScalarField::sample(g, [](const RealVec& x) { return std::cos(4 * kTwoPi * x[0]); });
  CHECK(hom4::test::max_abs(derivative(u, {2, 0, 0})) == 0.0);
}

TEST_CASE("cos squared product identity") {
  const GridSpec g{1, 8, 1.0};
  const auto c = ScalarField::sample(g, [](const RealVec& x) { return std::cos(kTwoPi * x[0]); });
  const auto expected = ScalarField::sample(g, [](const RealVec& x) { return 0.5 + 0.5 * std::cos(2 * kTwoPi * x[0]); });
  for (bool dealias : {true, false}) {
    CHECK(hom4::test::max_abs_diff(pointwise_product(c, c, dealias), expected) < 1e-15);
  }
}

TEST_CASE("dealiased product equals the truncated convolution") {
  // Oracle: direct convolution of the coefficient arrays, no wraparound.
  const int n = 8;
  const GridSpec g{1, n, 1.0};
  std::mt19937_64 rng(5);
  const auto u = hom4::test::random_field(g, 3, rng);
  const auto v = hom4::test::random_field(g, 3, rng);
  auto t = ModeTable::get(1, n);
  auto coeff = [&](const ScalarField& f, int k) { return std::abs(k) > 3 ? Complex(0.0) : f.spectrum()[t->slot({k, 0, 0})]; };
  const auto w = pointwise_product(u, v, true);
  const auto aliased = pointwise_product(u, v, false);
  double err = 0.0, alias_gap = 0.0;
  for (int k = -3; k <= 3; ++k) {
    Complex exact = 0.0;
    for (int a = -3; a <= 3; ++a) exact += coeff(u, a) * coeff(v, k - a);
    err = std::max(err, std::abs(w.spectrum()[t->slot({k, 0, 0})] - exact));
    alias_gap = std::max(alias_gap, std::abs(aliased.spectrum()[t->slot({k, 0, 0})] - exact));
  }
  CHECK(err < 1e-14);
  CHECK(alias_gap > 1e-3);
  // Without dealiasing the product is the nodal product.
  for (std::size_t i = 0; i < u.values().size(); ++i)
    CHECK(aliased.values()[i] == doctest::Approx(u.values()[i] * v.values()[i]).epsilon(1e-13));
}

TEST_CASE("D and D* are adjoint (property)") {
  std::mt19937_64 rng(21);
  for (int dim = 1; dim <= 3; ++dim) {
    const GridSpec g{dim, dim == 3 ? 8 : 24, 1.0};
    for (int trial = 0; trial < 10; ++trial) {
      const auto v = hom4::test::random_field(g, 3, rng);
      std::vector<ScalarField> e;
      for (int p = 0; p < pair_count(dim); ++p) e.push_back(hom4::test::random_field(g, 3, rng));
      const MatrixField eta(g, dim, e);
      const auto Dv = apply_D(v);
      const double lhs = inner(apply_Dstar(eta), v);
      const double rhs = inner(eta, Dv);
      CHECK(std::abs(lhs - rhs) <= 1e-12 * l2_norm(eta) * l2_norm(Dv));
    }
  }
}

TEST_CASE("Parseval inner product equals the nodal sum for band-limited fields") {
  std::mt19937_64 rng(3);
  const GridSpec g{2, 16, 2.0};
  for (int trial = 0; trial < 5; ++trial) {
    const auto u = hom4::test::random_field(g, 5, rng);
    const auto v = hom4::test::random_field(g, 5, rng);
    double nodal = 0.0;
    for (std::size_t i = 0; i < u.values().size(); ++i) nodal += u.values()[i] * v.values()[i];
    nodal *= g.volume() / static_cast<double>(g.size());
    CHECK(inner(u, v) == doctest::Approx(nodal).epsilon(1e-12));
  }
}

TEST_CASE("Sobolev norms of a single mode") {
  const GridSpec g{2, 16, 1.0};
  const auto u = ScalarField::sample(g, [](const RealVec& x) { return std::cos(kTwoPi * (x[0] + 2 * x[1])); });
  const double x2 = kTwoPi * kTwoPi * 5.0;
  CHECK(sobolev_norm(u, Space::L2) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-14));
  CHECK(sobolev_norm(u, Space::H2) == doctest::Approx(std::sqrt(0.5 * (1 + x2 * x2))).epsilon(1e-14));
  CHECK(sobolev_norm(u, Space::Hminus2) == doctest::Approx(std::sqrt(0.5 / (1 + x2 * x2))).epsilon(1e-14));
}

TEST_CASE("inverse Laplacian power") {
  const GridSpec g{2, 16, 1.0};
  const auto u = ScalarField::sample(g, [](const RealVec& x) { return std::sin(kTwoPi * x[0]) + std::cos(kTwoPi * 3 * x[1]); });
  const auto w = inv_laplacian_power(u, 2);
  const auto exact = ScalarField::sample(g, [](const RealVec& x) {
    return std::sin(kTwoPi * x[0]) / std::pow(kTwoPi, 4) + std::cos(kTwoPi * 3 * x[1]) / std::pow(3 * kTwoPi, 4);
  });
  CHECK(hom4::test::max_abs_diff(w, exact) < 1e-16);
  CHECK_THROWS_AS(inv_laplacian_power(ScalarField::constant(g, 1.0), 1), Error);
}

TEST_CASE("fourth-order operator with identity tensor is the bilaplacian") {
  const GridSpec g{2, 16, 1.0};
  const FourthOrderOperator op(Tensor4Field::constant(g, Tensor4::identity(2)));
  const auto u = ScalarField::sample(g, [](const RealVec& x) { return std::cos(kTwoPi * (x[0] - 2 * x[1])); });
  const double x2 = kTwoPi * kTwoPi * 5.0;
  const auto expected = (x2 * x2 + 1.0) * u;
  CHECK(hom4::test::max_abs_diff(op.apply(u, 1.0), expected) < 1e-13 * hom4::test::max_abs(expected));
}

TEST_CASE("mismatched grids are rejected") {
  const auto a = ScalarField::zeros({2, 8, 1.0});
  const auto b = ScalarField::zeros({2, 16, 1.0});
  CHECK_THROWS_AS(inner(a, b), Error);
}
