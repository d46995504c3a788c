#pragma once

// Complex-valued stationary random measures, represented by atomic
// realizations: reduced second moment, realization-wise autocorrelation,
// polar decomposition, Palm-type intensity and the Campbell pairing.

#include <complex>
#include <functional>
#include <span>
#include <vector>

#include "dlab/comb.hpp"
#include "dlab/random.hpp"
#include "dlab/renewal.hpp"

namespace dlab {

/// A realization of Phi restricted to the centred window [-r, r].
using ComplexMeasureRealization = WeightedComb;

struct PolarDecomposition {
  std::vector<double> positions;
  std::vector<double> moduli;  // |w_j| > 0
  std::vector<double> phases;  // arg w_j in [0, 2 pi)

  std::vector<std::complex<double>> reconstruct() const;
};

/// Zero-weight atoms are dropped.
PolarDecomposition polar_decompose(const ComplexMeasureRealization& phi);

/// Atom at 0 plus a binned complex density on a symmetric grid of bin centres.
struct ReducedSecondMoment {
  std::complex<double> atom0{};
  UniformGrid grid;
  std::vector<std::complex<double>> density;
  double bin_width = 0.0;

  bool is_hermitian() const;
  /// Sum of density * bin_width over bins with centre in [a, b].
  std::complex<double> mass(double a, double b) const;
  /// L1 distance of the densities over bins with centre in [lo, hi] (grids must match).
  double l1_distance(const ReducedSecondMoment& other, double lo, double hi) const;
  ReducedSecondMoment conj() const;
};

/// (Phi_n * Phi_n~) / (2n) binned on [-R, R): pairs with both atoms in [-n, n].
/// The Alternative reduction collects w_i conj(w_j) at x_j - x_i.
ReducedSecondMoment empirical_autocorr(const ComplexMeasureRealization& phi, double n, double max_dist,
                                       double bin_width, PairReduction reduction = PairReduction::Standard);

/// Total variation of (Phi_n * Phi~ - Phi_n * Phi_n~) / (2n) on the bins of [-R, R).
double boundary_term_check(const ComplexMeasureRealization& phi, double n, double max_dist, double bin_width);

/// rho * I_{P0} estimated from Palm configurations: every atom x_i in [-n, n]
/// contributes |w_i| times the configuration rotated by e^{-i phi_i} and seen
/// from x_i. `rho` is the empirical intensity of |Phi| on [-n, n]; the
/// estimate is averaged over realizations.
struct PalmEstimate {
  double rho = 0.0;
  ReducedSecondMoment rho_times_intensity;  // rho * I_{P0} on the bins
  ReducedSecondMoment intensity() const;    // I_{P0}
};
PalmEstimate palm_intensity_estimate(std::span<const ComplexMeasureRealization> realizations, double n,
                                     double max_dist, double bin_width);

/// The configuration e^{-i phi(x)} Phi seen by the Campbell integrand.
class RotatedConfiguration {
 public:
  RotatedConfiguration(const ComplexMeasureRealization& phi, std::complex<double> rotation)
      : phi_(&phi), rotation_(rotation) {}
  /// Rotated mass of [a, b].
  std::complex<double> mass(double a, double b) const;
  std::complex<double> rotation() const { return rotation_; }
  const ComplexMeasureRealization& base() const { return *phi_; }

 private:
  const ComplexMeasureRealization* phi_;
  std::complex<double> rotation_;
};

using CampbellIntegrand = std::function<std::complex<double>(double x, const RotatedConfiguration& config)>;

/// Mean over realizations of sum_i |w_i| g(x_i, e^{-i phi_i} Phi).
std::complex<double> campbell_pairing(const CampbellIntegrand& g,
                                      std::span<const ComplexMeasureRealization> realizations);

/// Exact pair sum (1/2n) sum_{x_i, x_j in [-n, n]} w_i conj(w_j) g(x_i - x_j).
std::complex<double> pair_functional(const ComplexMeasureRealization& phi, double n, double support,
                                     const std::function<double(double)>& g);

/// Cubic B-spline M4 on [-2, 2]; s M4(v/s) = (f * f~)(v) for the triangle f(x) = max(1 - |x|/s, 0).
double cubic_bspline(double u);

// ---------------------------------------------------------------------------

/// Complex Gaussian marks W = mean + Z, E|Z|^2 = variance.
struct MarkLaw {
  std::complex<double> mean{1.0, 0.0};
  double variance = 0.0;

  std::complex<double> sample(RandomSource& rng) const;
  double second_moment() const { return std::norm(mean) + variance; }
};

/// Ground process (Poisson of given rate, or a renewal law) with i.i.d. marks.
struct MarkedProcessModel {
  enum class Ground { Poisson, Renewal };
  Ground ground = Ground::Poisson;
  double rate = 1.0;         // Poisson intensity
  WaitingTime waiting;       // renewal law
  MarkLaw marks;

  double intensity() const;
  /// One realization on [-r, r].
  ComplexMeasureRealization sample(double radius, RandomSource& rng) const;
  /// Independent realizations from rng.split(i), generated in parallel.
  std::vector<ComplexMeasureRealization> sample_many(double radius, std::size_t count, const RandomSource& rng) const;
  /// Marked Poisson: atom rho E|W|^2 and flat density rho^2 |E W|^2 on the bins.
  ReducedSecondMoment analytic(double max_dist, double bin_width) const;
};

}  // namespace dlab
