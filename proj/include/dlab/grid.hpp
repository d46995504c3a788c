#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace dlab {

/// Uniform grid {start + i*step : 0 <= i < size}.
struct UniformGrid {
  double start = 0.0;
  double step = 1.0;
  std::size_t size = 0;

  double operator[](std::size_t i) const { return start + static_cast<double>(i) * step; }
  double back() const { return (*this)[size - 1]; }

  void validate() const {
    if (size == 0 || !(step > 0.0)) throw std::invalid_argument("UniformGrid: empty grid or non-positive step");
  }

  /// Grid of `n` points covering [a, b) (b excluded).
  static UniformGrid half_open(double a, double b, std::size_t n) {
    if (n == 0 || !(b > a)) throw std::invalid_argument("UniformGrid::half_open: bad range");
    return {a, (b - a) / static_cast<double>(n), n};
  }

  /// Grid of `n` points covering [a, b] with both endpoints.
  static UniformGrid closed(double a, double b, std::size_t n) {
    if (n < 2 || !(b > a)) throw std::invalid_argument("UniformGrid::closed: bad range");
    return {a, (b - a) / static_cast<double>(n - 1), n};
  }

  std::vector<double> points() const {
    std::vector<double> p(size);
    for (std::size_t i = 0; i < size; ++i) p[i] = (*this)[i];
    return p;
  }
};

}  // namespace dlab
