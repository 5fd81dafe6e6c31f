// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstddef>
#include <memory>
#include <vector>

namespace hom4 {

/// Uniform periodic grid on [0, period)^dim with `points` nodes per axis.
/// Nodes are stored row-major with the last axis fastest.
struct GridSpec {
  int dim = 1;
  int points = 4;
  double period = 1.0;

  std::size_t size() const;
  double volume() const;
  double spacing() const { return period / points; }

  /// Throws BadArgument unless dim in {1,2,3}, points >= 4 and even, and
  /// period > 0. Odd point counts are rejected because the dealiasing pad
  /// needs 3N/2 to be an integer.
  void validate() const;

  bool operator==(const GridSpec& other) const;
  bool operator!=(const GridSpec& other) const { return !(*this == other); }
};

bool is_power_of_two(int n);

using IntVec = std::array<int, 3>;

/// Integer wavenumbers of every spectral slot of a grid (FFT ordering), plus
/// a flag for slots sitting on the Nyquist frequency of any axis.
class ModeTable {
 public:
  static std::shared_ptr<const ModeTable> get(int dim, int points);

  int dim() const { return dim_; }
  int points() const { return points_; }
  std::size_t size() const { return k_.size(); }
  const IntVec& k(std::size_t idx) const { return k_[idx]; }
  bool nyquist(std::size_t idx) const { return nyquist_[idx] != 0; }

  /// Linear slot of wavenumber k, which must satisfy |k_j| < points/2 or
  /// k_j == -points/2.
  std::size_t slot(const IntVec& k) const;

 private:
  ModeTable(int dim, int points);

  int dim_;
  int points_;
  std::vector<IntVec> k_;
  std::vector<unsigned char> nyquist_;
};

/// Row-major multi-index helpers.
std::size_t linear_index(int dim, int points, const IntVec& idx);
IntVec multi_index(int dim, int points, std::size_t linear);

}  // namespace hom4
