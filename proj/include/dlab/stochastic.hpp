#pragma once

// Random combs with known diffraction: Bernoulli comb and Bernoullisation,
// close-packed random dimers and their factor, the Ledrappier shift, and
// unfolded GUE eigenvalue point sets.

#include <complex>
#include <cstdint>
#include <vector>

#include "dlab/comb.hpp"
#include "dlab/random.hpp"

namespace dlab {

// --- Bernoulli -------------------------------------------------------------

/// i.i.d. signs on [-N, N] with P(+1) = p.
SignedSequence bernoulli_comb(double p, std::int64_t n, RandomSource& rng);

/// (2p-1)^2 delta_Z + 4p(1-p) lambda; atoms at the integers of the grid range.
SpectralMeasure bernoulli_analytic(double p, const UniformGrid& k_grid);

/// -p log p - (1-p) log(1-p), natural log.
double entropy(double p);

/// w(n) X(n) with X i.i.d. signs, P(X = +1) = p.
SignedSequence bernoullise(const SignedSequence& w, double p, RandomSource& rng);

// --- Random dimers ---------------------------------------------------------

/// Close-packed dimer configuration. Blocks occupy {2k + offset, 2k + offset + 1}
/// and carry (1, -1) or (-1, 1), so w(n) = w(n+1) only across block boundaries:
/// M(w) is contained in 2Z + offset + 1.
struct DimerWord {
  SignedSequence sequence;
  int offset = 0;

  void validate() const;
  /// M(w) = {n : w(n) = w(n+1)}.
  std::vector<std::int64_t> equal_neighbours() const;
};

/// Configuration on [-N, N] with a uniform offset and independent fair blocks.
DimerWord dimer_sample(std::int64_t n, RandomSource& rng);

/// Diffraction for block weights (h+, h-):
/// |h+ + h-|^2/4 delta_Z + |h+ - h-|^2/4 (1 - cos 2 pi k) lambda.
SpectralMeasure dimer_analytic(std::complex<double> h_plus, std::complex<double> h_minus, const UniformGrid& k_grid);

/// (phi w)(n) = -w(n) w(n+1); one entry shorter than w.
SignedSequence dimer_factor(const DimerWord& w);

/// 1/2 lambda + 1/4 delta_{Z/2}.
SpectralMeasure factor_analytic(const UniformGrid& k_grid);

// --- Ledrappier shift ------------------------------------------------------

/// N x N patch, row 0 at the bottom; value(row, col).
struct LedrappierPatch {
  std::size_t n = 0;
  std::vector<int> values;  // row-major

  int at(std::size_t row, std::size_t col) const { return values[row * n + col]; }
  /// Number of sites with w(x) w(x+e1) w(x+e2) != 1.
  std::size_t constraint_violations() const;
};

/// Haar-distributed patch: i.i.d. bottom row of length 2N-1, rows above from
/// w(x + e2) = w(x) w(x + e1), trimmed to N columns.
LedrappierPatch ledrappier_sample(std::size_t n, RandomSource& rng);
/// Same construction from a given bottom row of length 2N-1.
LedrappierPatch ledrappier_from_row(const std::vector<int>& bottom);
/// i.i.d. fair signs at every site (control).
LedrappierPatch iid_patch(std::size_t n, RandomSource& rng);

/// Mean of w(x) w(x+e1) w(x+e2) over sites with x+e1, x+e2 in the patch.
double ledrappier_three_point(const LedrappierPatch& patch);

/// Row autocorrelation eta(m), 0 <= m <= max_lag, averaged over rows (or columns).
std::vector<double> patch_autocorr(const LedrappierPatch& patch, int max_lag, bool along_rows = true);

// --- GUE -------------------------------------------------------------------

/// Spectral radius sqrt(2N/pi) of the semicircle for entry variance 1/(2 pi).
double gue_radius(std::size_t n);
inline constexpr double kGueCentralFraction = 0.5;

/// Raw eigenvalues of one N x N GUE matrix, ascending.
std::vector<double> gue_eigenvalues(std::size_t n, RandomSource& rng);

/// Eigenvalues with |lambda| <= 0.5 * radius, unfolded by the semicircle
/// counting function to unit mean density and centred; unit weights.
WeightedComb gue_eigenvalue_points(std::size_t n, RandomSource& rng);

/// `samples` independent point sets from rng.split(i), computed in parallel.
std::vector<WeightedComb> gue_ensemble(std::size_t n, std::size_t samples, const RandomSource& rng);

/// Sample-averaged periodogram with the central peak image removed per sample.
EmpiricalDensity gue_diffraction_empirical(const std::vector<WeightedComb>& samples, const UniformGrid& k_grid);

/// Limit density h(k) = min(|k|, 1).
double gue_target(double k);

}  // namespace dlab
