// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <span>

namespace hom4 {

using Complex = std::complex<double>;

namespace fft {

// Convention: values(x) = sum_k c_k exp(+2 pi i k.x / period). `forward`
// returns the coefficients c_k (already divided by the node count),
// `inverse` evaluates the sum on the nodes.
//
// Plans are created once per (dim, points, direction) under a global lock;
// execution goes through per-thread aligned scratch so results do not depend
// on the caller's buffer alignment.

void forward(int dim, int points, std::span<const double> values, std::span<Complex> coeffs);
void forward(int dim, int points, std::span<const Complex> values, std::span<Complex> coeffs);
void inverse(int dim, int points, std::span<const Complex> coeffs, std::span<Complex> values);
void inverse_real(int dim, int points, std::span<const Complex> coeffs, std::span<double> values);

/// Version string of the FFT backend.
const char* library_version();

}  // namespace fft
}  // namespace hom4
