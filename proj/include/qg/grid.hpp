#pragma once

#include <cmath>
#include <numbers>

#include "qg/util.hpp"

namespace qg {

// Uniform n x n grid on the periodic square [0, 2*pi)^2.  Collocation points
// x_i = i*h, spectral modes are integer wavevectors with components in
// [-n/2, n/2).
struct Grid2D {
  int n = 0;

  static constexpr double length = 2.0 * std::numbers::pi;

  static Grid2D make(int n) {
    if (n < 16) throw Error("grid: n must be at least 16");
    if ((n & (n - 1)) != 0) throw Error("grid: n must be a power of two");
    return Grid2D{n};
  }

  std::size_t size() const { return static_cast<std::size_t>(n) * n; }

  double h() const { return length / n; }

  // FFT bin -> signed wavenumber
  int wavenumber(int i) const { return i < n / 2 ? i : i - n; }

  double k_mag(int i1, int i2) const {
    double k1 = wavenumber(i1);
    double k2 = wavenumber(i2);
    return std::sqrt(k1 * k1 + k2 * k2);
  }
};

}  // namespace qg
