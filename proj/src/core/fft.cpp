// SPDX-License-Identifier: Apache-2.0
#include "fft.hpp"

#include <fftw3.h>

#include <cstring>
#include <map>
#include <mutex>
#include <tuple>

#include "errors.hpp"

namespace hom4::fft {
namespace {

class AlignedBuffer {
 public:
  AlignedBuffer() = default;
  AlignedBuffer(const AlignedBuffer&) = delete;
  AlignedBuffer& operator=(const AlignedBuffer&) = delete;
  ~AlignedBuffer() {
    if (data_) fftw_free(data_);
  }

  fftw_complex* reserve(std::size_t n) {
    if (n > capacity_) {
      if (data_) fftw_free(data_);
      data_ = fftw_alloc_complex(n);
      if (!data_) throw Error(ErrorCode::BadArgument, "FFT scratch allocation failed");
      capacity_ = n;
    }
    return data_;
  }

 private:
  fftw_complex* data_ = nullptr;
  std::size_t capacity_ = 0;
};

struct Scratch {
  AlignedBuffer in;
  AlignedBuffer out;
};

Scratch& scratch() {
  thread_local Scratch s;
  return s;
}

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

std::size_t total(int dim, int points) {
  std::size_t n = 1;
  for (int j = 0; j < dim; ++j) n *= static_cast<std::size_t>(points);
  return n;
}

// Plans are never destroyed; the set of distinct grid shapes in a process is
// small.
fftw_plan get_plan(int dim, int points, int sign) {
  static std::map<std::tuple<int, int, int>, fftw_plan> plans;
  std::lock_guard<std::mutex> lock(planner_mutex());
  auto key = std::make_tuple(dim, points, sign);
  auto it = plans.find(key);
  if (it != plans.end()) return it->second;
  const std::size_t n = total(dim, points);
  fftw_complex* in = fftw_alloc_complex(n);
  fftw_complex* out = fftw_alloc_complex(n);
  int dims[3] = {points, points, points};
  fftw_plan plan = fftw_plan_dft(dim, dims, in, out, sign, FFTW_ESTIMATE);
  fftw_free(in);
  fftw_free(out);
  if (!plan) throw Error(ErrorCode::BadArgument, "FFTW could not create a plan");
  plans.emplace(key, plan);
  return plan;
}

void check_sizes(int dim, int points, std::size_t a, std::size_t b) {
  const std::size_t n = total(dim, points);
  if (a != n || b != n) throw Error(ErrorCode::GridMismatch, "FFT buffer size does not match grid");
}

}  // namespace

void forward(int dim, int points, std::span<const double> values, std::span<Complex> coeffs) {
  check_sizes(dim, points, values.size(), coeffs.size());
  const std::size_t n = values.size();
  fftw_plan plan = get_plan(dim, points, FFTW_FORWARD);
  Scratch& s = scratch();
  fftw_complex* in = s.in.reserve(n);
  fftw_complex* out = s.out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    in[i][0] = values[i];
    in[i][1] = 0.0;
  }
  fftw_execute_dft(plan, in, out);
  const double scale = 1.0 / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) coeffs[i] = Complex(out[i][0] * scale, out[i][1] * scale);
}

void forward(int dim, int points, std::span<const Complex> values, std::span<Complex> coeffs) {
  check_sizes(dim, points, values.size(), coeffs.size());
  const std::size_t n = values.size();
  fftw_plan plan = get_plan(dim, points, FFTW_FORWARD);
  Scratch& s = scratch();
  fftw_complex* in = s.in.reserve(n);
  fftw_complex* out = s.out.reserve(n);
  std::memcpy(in, values.data(), n * sizeof(fftw_complex));
  fftw_execute_dft(plan, in, out);
  const double scale = 1.0 / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) coeffs[i] = Complex(out[i][0] * scale, out[i][1] * scale);
}

void inverse(int dim, int points, std::span<const Complex> coeffs, std::span<Complex> values) {
  check_sizes(dim, points, coeffs.size(), values.size());
  const std::size_t n = coeffs.size();
  fftw_plan plan = get_plan(dim, points, FFTW_BACKWARD);
  Scratch& s = scratch();
  fftw_complex* in = s.in.reserve(n);
  fftw_complex* out = s.out.reserve(n);
  std::memcpy(in, coeffs.data(), n * sizeof(fftw_complex));
  fftw_execute_dft(plan, in, out);
  std::memcpy(static_cast<void*>(values.data()), out, n * sizeof(fftw_complex));
}

void inverse_real(int dim, int points, std::span<const Complex> coeffs, std::span<double> values) {
  check_sizes(dim, points, coeffs.size(), values.size());
  const std::size_t n = coeffs.size();
  fftw_plan plan = get_plan(dim, points, FFTW_BACKWARD);
  Scratch& s = scratch();
  fftw_complex* in = s.in.reserve(n);
  fftw_complex* out = s.out.reserve(n);
  std::memcpy(in, coeffs.data(), n * sizeof(fftw_complex));
  fftw_execute_dft(plan, in, out);
  for (std::size_t i = 0; i < n; ++i) values[i] = out[i][0];
}

const char* library_version() { return fftw_version; }

}  // namespace hom4::fft
