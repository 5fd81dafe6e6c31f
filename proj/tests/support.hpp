// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include "spectral.hpp"

namespace hom4::test {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Random real trigonometric polynomial with |k_j| <= band on every axis.
inline ScalarField random_field(const GridSpec& g, int band, std::mt19937_64& rng, bool zero_mean = false) {
  std::normal_distribution<double> normal(0.0, 1.0);
  auto modes = ModeTable::get(g.dim, g.points);
  Spectrum s(g.size(), Complex(0.0));
  for (std::size_t l = 0; l < s.size(); ++l) {
    const IntVec& k = modes->k(l);
    bool inside = !modes->nyquist(l);
    for (int j = 0; j < g.dim; ++j) inside = inside && std::abs(k[j]) <= band;
    if (inside) s[l] = Complex(normal(rng), normal(rng));
  }
  if (zero_mean) s[0] = 0.0;
  return ScalarField::from_spectrum(g, std::move(s));
}

inline double max_abs_diff(const ScalarField& a, const ScalarField& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.values().size(); ++i) m = std::max(m, std::abs(a.values()[i] - b.values()[i]));
  return m;
}

inline double max_abs(const ScalarField& a) {
  double m = 0.0;
  for (double v : a.values()) m = std::max(m, std::abs(v));
  return m;
}

/// Trapezoidal mean of the nodal values, independent of the FFT path.
inline double nodal_mean(const ScalarField& a) {
  double s = 0.0;
  for (double v : a.values()) s += v;
  return s / static_cast<double>(a.values().size());
}

}  // namespace hom4::test
