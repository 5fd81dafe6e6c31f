// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <random>

#include "errors.hpp"
#include "support.hpp"
#include "tensor.hpp"

using namespace hom4;

namespace {

// Full component array of a_ijst = alpha d_ij d_st + mu (d_is d_jt + d_it d_js).
std::vector<double> lame(int d, double alpha, double mu) {
  std::vector<double> c;
  auto del = [](int a, int b) { return a == b ? 1.0 : 0.0; };
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int s = 0; s < d; ++s)
        for (int t = 0; t < d; ++t)
          c.push_back(alpha * del(i, j) * del(s, t) + mu * (del(i, s) * del(j, t) + del(i, t) * del(j, s)));
  return c;
}

}  // namespace

TEST_CASE("identity tensor maps a matrix to its symmetric part") {
  const Tensor4 id = Tensor4::identity(3);
  const std::vector<double> xi{1, 2, 3, 4, 5, 6, 7, 8, 9};
  const SymMatrix s = id.apply(xi);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) CHECK(s(i, j) == doctest::Approx(0.5 * (xi[i * 3 + j] + xi[j * 3 + i])).epsilon(1e-15));
  auto [lo, hi] = id.eigen_range();
  CHECK(lo == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(hi == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(id.quartic_form({1.0, 2.0, -1.0}) == doctest::Approx(36.0).epsilon(1e-14));
}

TEST_CASE("component import round-trips and checks both symmetries") {
  const auto c = lame(2, 0.5, 1.25);
  const Tensor4 t = Tensor4::from_components(2, c);
  const auto back = t.components();
  for (std::size_t i = 0; i < c.size(); ++i) CHECK(back[i] == doctest::Approx(c[i]).epsilon(1e-15));
  // Eigenvalues of the Lame tensor on symmetric matrices: 2 mu (deviatoric)
  // and 2 mu + d alpha (spherical).
  auto [lo, hi] = t.eigen_range();
  CHECK(lo == doctest::Approx(2.5).epsilon(1e-13));
  CHECK(hi == doctest::Approx(3.5).epsilon(1e-13));

  auto bad = c;
  bad[1] += 0.1;  // a_0001 without a_0100
  CHECK_THROWS_AS(Tensor4::from_components(2, bad), Error);
}

TEST_CASE("symmetric part action (property)") {
  std::mt19937_64 rng(8);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int d = 1; d <= 3; ++d) {
    std::vector<double> c = lame(d, 0.3, 1.1);
    const Tensor4 t = Tensor4::from_components(d, c);
    for (int trial = 0; trial < 20; ++trial) {
      std::vector<double> xi(d * d), sym(d * d);
      for (double& x : xi) x = normal(rng);
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) sym[i * d + j] = 0.5 * (xi[i * d + j] + xi[j * d + i]);
      const SymMatrix a = t.apply(xi);
      const SymMatrix b = t.apply(sym);
      for (int p = 0; p < pair_count(d); ++p) CHECK(std::abs(a.pair(p) - b.pair(p)) <= 1e-14);
    }
  }
}

TEST_CASE("validation of the default family") {
  const GridSpec g{2, 32, 1.0};
  const Tensor4Field a = make_family({FamilyKind::ScalarIsotropic, {1.5, 0.5}}, g);
  const Validation v = validate(a);
  CHECK(v.min_eigenvalue == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(v.max_eigenvalue == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(v.lambda == doctest::Approx(0.5).epsilon(1e-14));
  CHECK_FALSE(v.needs_rescale);
}

TEST_CASE("families below the unit floor and non-elliptic tensors are rejected") {
  const GridSpec g{2, 16, 1.0};
  CHECK_THROWS_AS(make_family({FamilyKind::ScalarIsotropic, {1.0, 0.5}}, g), Error);
  try {
    make_family({FamilyKind::ScalarIsotropic, {1.0, 0.5}}, g);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::BadParameters);
  }
  Tensor4 neg = Tensor4::identity(2);
  neg.set_pair_entry(0, 0, -1.0);
  try {
    validate(Tensor4Field::constant(g, neg));
    FAIL("expected NotElliptic");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotElliptic);
  }
  // Elliptic but below 1: accepted by validate with rescaling advice.
  Tensor4 half = Tensor4::identity(2);
  for (int p = 0; p < 3; ++p) half.set_pair_entry(p, p, 0.5 * half.pair_entry(p, p));
  const Validation v = validate(Tensor4Field::constant(g, half));
  CHECK(v.needs_rescale);
  CHECK(v.lambda == doctest::Approx(1.0).epsilon(1e-14));
  CHECK_FALSE(v.advice.empty());
}

TEST_CASE("family names and parameter checks") {
  CHECK(family_kind_from_string("scalar_isotropic") == FamilyKind::ScalarIsotropic);
  CHECK(family_kind_from_string("d1_profile") == FamilyKind::D1Profile);
  CHECK(family_kind_from_string("constant") == FamilyKind::Constant);
  CHECK(family_kind_name(FamilyKind::D1Profile) == "d1_profile");
  CHECK(family_kind_from_string("checkerboard") == FamilyKind::Checkerboard);
  CHECK_THROWS_AS(make_family({FamilyKind::Checkerboard, {2.0}}, {2, 16, 1.0}), Error);
  CHECK_THROWS_AS(family_kind_from_string("piecewise"), Error);
  CHECK_THROWS_AS(make_family({FamilyKind::D1Profile, {2.0, 1.0}}, {2, 16, 1.0}), Error);
  CHECK_THROWS_AS(make_family({FamilyKind::ScalarIsotropic, {2.0}}, {2, 16, 1.0}), Error);
  CHECK_THROWS_AS(make_family({FamilyKind::Constant, {1.0, 2.0}}, {2, 16, 1.0}), Error);
}

TEST_CASE("d1 profile samples the closed form") {
  const GridSpec g{1, 64, 1.0};
  const Tensor4Field a = make_family({FamilyKind::D1Profile, {2.0, 1.0}}, g);
  for (std::size_t n = 0; n < g.size(); n += 7) {
    const double y = static_cast<double>(n) / 64.0;
    CHECK(a.at(n)(0, 0, 0, 0) == doctest::Approx(2.0 + std::sin(hom4::test::kTwoPi * y)).epsilon(1e-14));
  }
  CHECK(a.mean()(0, 0, 0, 0) == doctest::Approx(2.0).epsilon(1e-14));
}
