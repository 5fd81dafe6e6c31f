// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <sstream>
#include <string>

#include "errors.hpp"
#include "spectral.hpp"

namespace hom4 {

struct CgResult {
  int iterations = 0;
  /// Final relative preconditioned residual sqrt(r.Pr / b.Pb).
  double residual = 0.0;
};

inline double real_dot(const Spectrum& a, const Spectrum& b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i].real() * b[i].real() + a[i].imag() * b[i].imag();
  return acc;
}

/// Preconditioned conjugate gradients on spectra, with the real inner product
/// Re sum conj(a) b. `apply` and `precondition` map a Spectrum to a Spectrum;
/// both must be symmetric positive definite on the subspace the iteration
/// lives in. `x` holds the initial guess on entry. Throws NoConvergence
/// after max_iter iterations.
template <class Apply, class Precond>
CgResult pcg(Apply&& apply, Precond&& precondition, const Spectrum& b, Spectrum& x, double tol,
             int max_iter, const std::string& what) {
  Spectrum r = apply(x);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = b[i] - r[i];
  Spectrum z = precondition(r);
  const double bnorm = std::sqrt(std::max(0.0, real_dot(b, precondition(b))));
  CgResult res;
  if (bnorm == 0.0) {
    std::fill(x.begin(), x.end(), Complex(0.0));
    return res;
  }
  Spectrum p = z;
  double rz = real_dot(r, z);
  res.residual = std::sqrt(std::max(0.0, rz)) / bnorm;
  while (res.residual > tol) {
    if (res.iterations >= max_iter) {
      std::ostringstream os;
      os << what << ": no convergence after " << max_iter << " iterations (residual " << res.residual << ")";
      throw Error(ErrorCode::NoConvergence, os.str());
    }
    Spectrum ap = apply(p);
    const double alpha = rz / real_dot(p, ap);
    for (std::size_t i = 0; i < x.size(); ++i) {
      x[i] += alpha * p[i];
      r[i] -= alpha * ap[i];
    }
    z = precondition(r);
    const double rz_new = real_dot(r, z);
    const double beta = rz_new / rz;
    rz = rz_new;
    for (std::size_t i = 0; i < p.size(); ++i) p[i] = z[i] + beta * p[i];
    ++res.iterations;
    res.residual = std::sqrt(std::max(0.0, rz)) / bnorm;
  }
  return res;
}

}  // namespace hom4
