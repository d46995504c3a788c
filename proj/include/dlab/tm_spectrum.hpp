#pragma once

// The Thue-Morse spectral measure mu on [0, 1]: Volterra iteration for its
// distribution function F, Riesz-product densities, moments, and the
// middle-thirds Cantor function used as a comparator.

#include <complex>
#include <cstddef>
#include <vector>

#include "dlab/comb.hpp"
#include "dlab/grid.hpp"

namespace dlab {

/// Distribution function on the uniform partition of [0, 1] into `cells()`
/// cells. Cell masses are the primary data; F is their running sum, so the
/// increment F(x+h) - F(x) is available without cancellation.
struct DistributionFunction {
  std::vector<double> masses;  // mu([x_i, x_{i+1}])

  std::size_t cells() const { return masses.size(); }
  double step() const { return 1.0 / static_cast<double>(masses.size()); }
  UniformGrid grid() const { return UniformGrid::closed(0.0, 1.0, masses.size() + 1); }
  /// F at the grid nodes, F(0) = 0.
  std::vector<double> values() const;
  double min_increment() const;
  /// Throws if a mass is negative or the total differs from 1 by more than tol.
  void validate(double tol = 1e-9) const;

  /// F(x) = x.
  static DistributionFunction uniform(std::size_t cells);
};

/// F_{n+1}(x) = 1/2 int_0^{2x} (1 - cos(pi y)) dF_n(y), with F_n extended by
/// F(y + 1) = F(y) + 1. Each cell of the target receives two cells of the
/// source, weighted by the kernel at their midpoints.
DistributionFunction volterra_step(const DistributionFunction& f);

/// f_n(x) = prod_{m<n} (1 - cos(2^{m+1} pi x)), f_0 = 1.
double riesz_density(int n, double x);

struct TmDistributionResult {
  DistributionFunction function;
  std::vector<double> cauchy;  // cauchy[i] = sup |F_{i+1} - F_i|
};

/// Iterates volterra_step from F_0(x) = x.
TmDistributionResult tm_distribution(int iterations, std::size_t grid_size);

/// Middle-thirds Cantor function from the first `depth` ternary digits of x.
double cantor_function(double x, int depth);

/// int_0^1 e^{2 pi i m y} dF(y), as a sum over cell midpoints.
std::complex<double> moments_from_F(const DistributionFunction& f, int m);

/// F' as mass / h at the cell midpoints.
EmpiricalDensity derivative(const DistributionFunction& f);

/// Largest violation of F(x/2) + F((x+1)/2) - F(1/2) = F(x), the cumulative
/// form of dF(x/2) + dF((x+1)/2) = dF(x), over grid points x with x/2 on the grid.
double functional_relation_residual(const DistributionFunction& f);

/// Largest |F(x) + F(1-x) - 1| over the grid.
double symmetry_residual(const DistributionFunction& f);

}  // namespace dlab
