// SPDX-License-Identifier: Apache-2.0
#include "grid.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <string>
#include <utility>

#include "errors.hpp"

namespace hom4 {

std::size_t GridSpec::size() const {
  std::size_t n = 1;
  for (int j = 0; j < dim; ++j) n *= static_cast<std::size_t>(points);
  return n;
}

double GridSpec::volume() const { return std::pow(period, dim); }

void GridSpec::validate() const {
  if (dim < 1 || dim > 3)
    throw Error(ErrorCode::BadArgument, "grid dimension must be 1, 2 or 3, got " + std::to_string(dim));
  if (points < 4 || points % 2 != 0)
    throw Error(ErrorCode::BadArgument,
                "points per axis must be even and >= 4, got " + std::to_string(points));
  if (!(period > 0.0) || !std::isfinite(period))
    throw Error(ErrorCode::BadArgument, "grid period must be positive");
}

bool GridSpec::operator==(const GridSpec& other) const {
  return dim == other.dim && points == other.points && period == other.period;
}

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

std::size_t linear_index(int dim, int points, const IntVec& idx) {
  std::size_t l = 0;
  for (int j = 0; j < dim; ++j) l = l * static_cast<std::size_t>(points) + static_cast<std::size_t>(idx[j]);
  return l;
}

IntVec multi_index(int dim, int points, std::size_t linear) {
  IntVec idx{0, 0, 0};
  for (int j = dim - 1; j >= 0; --j) {
    idx[j] = static_cast<int>(linear % static_cast<std::size_t>(points));
    linear /= static_cast<std::size_t>(points);
  }
  return idx;
}

ModeTable::ModeTable(int dim, int points) : dim_(dim), points_(points) {
  GridSpec{dim, points, 1.0}.validate();
  const std::size_t n = GridSpec{dim, points, 1.0}.size();
  k_.resize(n);
  nyquist_.resize(n);
  for (std::size_t l = 0; l < n; ++l) {
    IntVec idx = multi_index(dim, points, l);
    IntVec k{0, 0, 0};
    bool nyq = false;
    for (int j = 0; j < dim; ++j) {
      k[j] = idx[j] <= points / 2 - 1 ? idx[j] : idx[j] - points;
      if (idx[j] == points / 2) nyq = true;
    }
    k_[l] = k;
    nyquist_[l] = nyq ? 1 : 0;
  }
}

std::shared_ptr<const ModeTable> ModeTable::get(int dim, int points) {
  static std::mutex mutex;
  static std::map<std::pair<int, int>, std::shared_ptr<const ModeTable>> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto& slot = cache[{dim, points}];
  if (!slot) slot.reset(new ModeTable(dim, points));
  return slot;
}

std::size_t ModeTable::slot(const IntVec& k) const {
  IntVec idx{0, 0, 0};
  for (int j = 0; j < dim_; ++j) idx[j] = k[j] < 0 ? k[j] + points_ : k[j];
  return linear_index(dim_, points_, idx);
}

}  // namespace hom4
