#pragma once

// Weighted Dirac combs and the estimators shared by every model: lattice and
// point-set autocorrelation, periodogram, kernel smoothing, Fejer-summed
// density reconstruction and the Wiener sum.
//
// Fourier convention throughout: f^(k) = sum_x f(x) exp(-2 pi i k x).

#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dlab/grid.hpp"

namespace dlab {

using cplx = std::complex<double>;

/// Finite realization of sum_j w_j delta_{x_j} observed on [-window_radius, window_radius].
struct WeightedComb {
  std::vector<double> positions;  // strictly increasing
  std::vector<cplx> weights;
  double window_radius = 0.0;

  std::size_t size() const { return positions.size(); }
  bool empty() const { return positions.empty(); }
  double volume() const { return 2.0 * window_radius; }

  /// Throws std::invalid_argument if an invariant is violated.
  void validate() const;

  /// Unit weights at the given positions.
  static WeightedComb unit(std::vector<double> positions, double window_radius);
  /// Integer positions -N..N carrying the given weights (size 2N+1); each point
  /// owns its unit cell, so the window radius is N + 1/2.
  static WeightedComb lattice(std::span<const cplx> weights);
  static WeightedComb lattice(std::span<const int> weights);

  /// Atoms inside [-r, r], with window radius r.
  WeightedComb restricted(double r) const;
};

/// A +-1 sequence on consecutive integers first_index, first_index+1, ...
struct SignedSequence {
  std::int64_t first_index = 0;
  std::vector<int> values;

  std::size_t size() const { return values.size(); }
  int at(std::int64_t n) const { return values.at(static_cast<std::size_t>(n - first_index)); }
  void validate() const;
  std::vector<cplx> complex_weights() const;
  /// Comb on the integers with window radius max(|first|, |last|) + 1/2.
  WeightedComb comb() const;
};

/// Lattice autocorrelation coefficients eta(m), |m| <= max_lag.
struct AutocorrCoeffs {
  double spacing = 1.0;
  std::vector<cplx> values;  // index m + max_lag

  int max_lag() const { return static_cast<int>(values.size() / 2); }
  cplx at(int m) const { return values.at(static_cast<std::size_t>(m + max_lag())); }
  cplx& at(int m) { return values.at(static_cast<std::size_t>(m + max_lag())); }

  static AutocorrCoeffs from_nonnegative(std::span<const cplx> eta_nonneg, double spacing = 1.0);
  bool is_hermitian(double tol = 0.0) const;
};

/// Density samples on a uniform grid.
struct EmpiricalDensity {
  UniformGrid grid;
  std::vector<double> values;
  double bandwidth = 0.0;

  void validate() const;
  /// Riemann sum of values * step.
  double integral() const;
  /// Integral over grid points with a <= k <= b.
  double integral(double a, double b) const;
};

struct Atom {
  double position;
  double intensity;
};

/// Lebesgue decomposition restricted to a finite window: Bragg atoms plus an
/// absolutely continuous density.
struct SpectralMeasure {
  std::vector<Atom> atoms;
  EmpiricalDensity ac_density;
  std::string label;

  void validate(double tol = 1e-9) const;
};

// ---------------------------------------------------------------------------

/// eta(m) = 1/(2N+1-|m|) sum_n w(n) conj(w(n-m)), w indexed -N..N.
AutocorrCoeffs autocorr_lattice(std::span<const cplx> weights, int max_lag);
AutocorrCoeffs autocorr_lattice(const SignedSequence& seq, int max_lag);

/// Pair histogram with sign-symmetric bins of width `bin_width` covering
/// [-H b, H b), H = ceil(R / b). Bin j collects distances d with
/// floor(|d|/b) = |j - H| on the matching side; bins are closed toward zero.
struct PairHistogram {
  cplx atom0{};              // sum |w_i|^2 / volume
  UniformGrid grid;          // bin centres
  std::vector<cplx> values;  // density per unit length
  double bin_width = 0.0;

  /// Mass sum values * bin_width over bins whose centre lies in [a, b].
  cplx mass(double a, double b) const;
};

enum class PairReduction {
  Standard,     ///< w_i conj(w_j) at x_i - x_j
  Alternative,  ///< w_i conj(w_j) at x_j - x_i (conjugate measure)
};

/// Core pair accumulation shared by comb-core and the Palm estimators.
/// Only atoms with |x| < inner_radius contribute as the first partner; the
/// second partner is restricted to |x| < outer_radius. Normalized by 2*inner_radius.
PairHistogram pair_histogram(const WeightedComb& comb, double max_dist, double bin_width, double inner_radius,
                             double outer_radius, PairReduction reduction = PairReduction::Standard,
                             bool symmetrize = true);

/// Volume-averaged autocorrelation of a point comb: atom at 0 and binned density.
struct PointsetAutocorr {
  double atom0 = 0.0;
  EmpiricalDensity density;
};
PointsetAutocorr autocorr_pointset(const WeightedComb& comb, double max_dist, double bin_width);

enum class PeriodogramMethod { Auto, Direct, LatticeFft, NonuniformFft };

/// Lattice descriptor: positions == origin + spacing * n_j with integer n_j.
struct LatticeFit {
  double origin;
  double spacing;
  std::vector<std::int64_t> indices;
};
std::optional<LatticeFit> detect_lattice(std::span<const double> positions);

/// I(k) = |sum_j w_j exp(-2 pi i k x_j)|^2 / (2 window_radius).
EmpiricalDensity periodogram(const WeightedComb& comb, const UniformGrid& k_grid,
                             PeriodogramMethod method = PeriodogramMethod::Auto);

/// Exponential sums S(k) = sum_j w_j exp(-2 pi i k x_j) on a uniform grid.
std::vector<cplx> exponential_sums(std::span<const double> x, std::span<const cplx> w, const UniformGrid& k_grid,
                                   PeriodogramMethod method = PeriodogramMethod::Auto);

/// Subtracts the diffuse image of the k = 0 Bragg peak, rho^2 |int_window e^{-2 pi i k x} dx|^2 / vol,
/// with rho = (sum w) / vol taken from the comb itself.
EmpiricalDensity remove_mean_peak(const EmpiricalDensity& periodogram, const WeightedComb& comb);

/// Convolution with the normalized triangular kernel of half-width `bandwidth`.
/// Mass leaving the grid is reflected back, so the total is preserved.
EmpiricalDensity smooth(const EmpiricalDensity& density, double bandwidth);

/// Fejer-summed series sum_{|m|<=M} (1-|m|/(M+1)) eta(m) exp(-2 pi i k m s) / s.
EmpiricalDensity eta_to_density(const AutocorrCoeffs& coeffs, const UniformGrid& k_grid);

/// Sigma(N) = sum_{|m|<=N} |eta(m)|^2.
double wiener_sigma(const AutocorrCoeffs& coeffs, int n);

/// Bragg-peak test by window scaling: periodogram value at k for the comb
/// restricted to r_small and to its full window.
struct AtomEstimate {
  double value_small;
  double value_large;
  double ratio;      // value_large / value_small
  double intensity;  // slope of value against window volume
  bool is_atom;      // ratio above the detection threshold
};
inline constexpr double kAtomRatioThreshold = 1.5;
AtomEstimate estimate_atom(const WeightedComb& comb, double k, double r_small);

/// Periodogram on [kmin, kmax] at the natural resolution of the window
/// (step 1/M on a detected lattice of spacing s, M the smallest power of two
/// with s M >= 2 * extent; step 1/(2 vol) otherwise), optionally with the
/// central-peak image removed, then smoothed with `bandwidth`.
EmpiricalDensity spectrum_estimate(const WeightedComb& comb, double kmin, double kmax, double bandwidth,
                                   bool remove_peak = false);

/// Every stride-th sample so that at most `max_points` remain (stride >= 1).
EmpiricalDensity decimate(const EmpiricalDensity& d, std::size_t max_points);

/// Samples f on a grid.
template <class F>
EmpiricalDensity sample_on(const UniformGrid& grid, F&& f) {
  EmpiricalDensity d;
  d.grid = grid;
  d.values.resize(grid.size);
  for (std::size_t i = 0; i < grid.size; ++i) d.values[i] = f(grid[i]);
  return d;
}

/// L1 distance sum |a_i - b_i| * step over grid points in [lo, hi]; grids must match.
double l1_distance(const EmpiricalDensity& a, const EmpiricalDensity& b, double lo, double hi);
/// L1 distance to a function.
template <class F>
double l1_distance_to(const EmpiricalDensity& a, F&& f, double lo, double hi) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.values.size(); ++i) {
    const double k = a.grid[i];
    if (k < lo || k > hi) continue;
    const double d = a.values[i] - f(k);
    s += (d < 0 ? -d : d) * a.grid.step;
  }
  return s;
}

}  // namespace dlab
