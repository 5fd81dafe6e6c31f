// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "spectral.hpp"

namespace hom4 {

struct SmoothingSpec {
  int order = 1;
  double eps = 0.25;
};

/// prod_j sinc(eps xi_j / 2)^k with xi = 2 pi freq / period, sinc(0) = 1.
double steklov_multiplier(int k, double eps, const IntVec& freq, int dim, double period = 1.0);
/// Same multiplier for a physical wavevector.
double steklov_symbol(int k, double eps, const RealVec& xi, int dim);

/// (S^eps)^k u as a spectral multiplier.
ScalarField apply_smoothing(const ScalarField& u, const SmoothingSpec& spec);

/// One-dimensional kernel of (S^eps)^k, k in {1,2,3}; UnsupportedOrder otherwise.
double kernel_chi(int k, double s);
/// int chi_k by piecewise Gauss-Legendre quadrature between the breakpoints.
double kernel_integral(int k);
/// gamma_k = (1/2) int s^2 chi_k(s) ds by the same quadrature.
double gamma_coefficient(int k);

struct InequalityCheck {
  std::string id;
  std::string statement;
  /// Constant on the right-hand side (exact ones are 1 or sqrt(d)/2).
  double constant = 1.0;
  double worst_ratio = 0.0;
  int trials = 0;
  /// Seed, trial and eps of the worst case.
  std::string worst_input;
};

struct InequalityReport {
  std::vector<InequalityCheck> checks;
  bool passed() const;
};

/// Random inequality checks for the smoothing estimates on a 2-d torus with
/// eps in {1/2, 1/4, 1/8}. Test functions are trigonometric polynomials of
/// band 4, periodic coefficients are 1/eps-periodic polynomials of band 2 in
/// the fast variable, so every product is exact on the 128^2 grid.
InequalityReport check_inequality_suite(std::uint64_t seed, int trials);
/// Throws PropertyViolation naming the first failing inequality.
void require_passed(const InequalityReport& report);

}  // namespace hom4
