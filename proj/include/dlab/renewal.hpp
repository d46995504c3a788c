#pragma once

// Stationary renewal processes on the line: waiting-time laws, sampler,
// renewal measure, autocorrelation and the closed-form diffraction, plus the
// Fibonacci random tiling.
//
// Laws with mean m != 1 are supported throughout: the point density is 1/m,
// the autocorrelation is (1/m)(delta_0 + nu + nu~), and the diffraction has an
// absolutely continuous density (1/m)(1 - |rho^|^2)/|1 - rho^|^2 with Bragg
// weight 1/m^2. For m = 1 the density equals 1 - h with
// h = 2(|rho^|^2 - Re rho^)/|1 - rho^|^2.

#include <complex>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "dlab/comb.hpp"
#include "dlab/random.hpp"

namespace dlab {

class WaitingTimeDistribution {
 public:
  virtual ~WaitingTimeDistribution() = default;

  virtual std::string name() const = 0;
  virtual double sample(RandomSource& rng) const = 0;
  /// rho^(k) = int e^{-2 pi i k x} drho(x).
  virtual std::complex<double> fourier(double k) const = 0;
  virtual double mean() const = 0;
  virtual double variance() const = 0;
  /// Largest b with supp rho in bZ, if any.
  virtual std::optional<double> lattice() const = 0;

  /// Absolutely continuous laws report their density; discrete laws their atoms.
  virtual bool has_density() const { return false; }
  virtual double density(double) const { return 0.0; }
  virtual std::vector<Atom> atoms() const { return {}; }
};

using WaitingTime = std::shared_ptr<const WaitingTimeDistribution>;

/// Gamma law with shape a and rate a (mean 1, variance 1/a).
class GammaLaw final : public WaitingTimeDistribution {
 public:
  explicit GammaLaw(double shape);
  std::string name() const override;
  double sample(RandomSource& rng) const override;
  std::complex<double> fourier(double k) const override;
  double mean() const override { return 1.0; }
  double variance() const override { return 1.0 / shape_; }
  std::optional<double> lattice() const override { return std::nullopt; }
  bool has_density() const override { return true; }
  double density(double x) const override;
  double shape() const { return shape_; }

 private:
  double shape_;
  double log_norm_;
};

/// Finitely many atoms {(position, probability)} on (0, inf).
class DiscreteLaw final : public WaitingTimeDistribution {
 public:
  DiscreteLaw(std::vector<Atom> atoms, std::string name);
  std::string name() const override { return name_; }
  double sample(RandomSource& rng) const override;
  std::complex<double> fourier(double k) const override;
  double mean() const override { return mean_; }
  double variance() const override { return variance_; }
  std::optional<double> lattice() const override { return lattice_; }
  std::vector<Atom> atoms() const override { return atoms_; }

 private:
  std::vector<Atom> atoms_;
  std::string name_;
  double mean_;
  double variance_;
  std::optional<double> lattice_;
};

/// Coarsest b with every x_i in bZ, found from rational approximations of
/// x_i / x_0 with denominators up to 10^4; nullopt if none fits to 1e-12.
std::optional<double> coarsest_lattice(const std::vector<double>& support);

WaitingTime gamma_family(double shape);
WaitingTime exponential_law();
WaitingTime point_mass(double at = 1.0);
/// Gaps tau and 1 with probabilities 1/tau and 1/tau^2.
WaitingTime fib_random_tiling();

/// Registry: "gamma:A", "exp", "point" or "point:X", "fibrt".
WaitingTime parse_distribution(const std::string& spec);

// ---------------------------------------------------------------------------

struct RenewalRealization {
  std::vector<double> points;  // increasing, in (0, L]
  double length = 0.0;

  /// Points shifted by -L/2 on the window [-L/2, L/2], unit weights.
  WeightedComb centred_comb() const;
};

/// Cumulative gaps started burn_in mean gaps before 0; points in (0, L].
/// Throws ModelError if the law returns a gap <= 0.
RenewalRealization renewal_sample(const WaitingTimeDistribution& dist, double length, RandomSource& rng,
                                  double burn_in = 1000.0);

/// Truncated series nu = sum_{n>=1} rho^{*n} on [0, X].
struct RenewalMeasure {
  bool lattice = false;
  /// Continuous laws: density of nu at x_i = i dx, i = 0..X/dx.
  EmpiricalDensity density;
  /// Lattice laws: atoms of nu at multiples of the lattice constant in (0, X].
  std::vector<Atom> atoms;
  int terms = 0;
  bool converged = false;
  /// L1 norm of nu - rho - rho * nu on [0, 0.8 X] (sum of |.| for atoms).
  double residual = 0.0;
};

/// Terms are added until the mass of rho^{*n} on [0, X] drops below 1e-8 or
/// `max_terms` is reached; `converged` reports which. Continuous laws use
/// trapezoidal convolution on the grid of step dx.
RenewalMeasure renewal_measure(const WaitingTimeDistribution& dist, double x_max, double dx = 5e-4,
                               int max_terms = 100000);

/// (1/m)(delta_0 + nu + nu~) on [-X, X].
struct RenewalAutocorr {
  double atom0 = 0.0;
  bool lattice = false;
  EmpiricalDensity density;  // symmetric grid, continuous laws
  std::vector<Atom> atoms;   // nonzero lags, lattice laws
  RenewalMeasure nu;
};
RenewalAutocorr renewal_autocorr(const WaitingTimeDistribution& dist, double x_max, double dx = 5e-4);

struct RenewalDiffraction {
  SpectralMeasure measure;
  /// Grid indices where |1 - rho^| < 1e-12 off the Bragg set (density set to 0).
  std::vector<std::size_t> singular;
};

/// Closed-form diffraction. Bragg atoms of weight 1/m^2 at 0 (non-lattice) or on
/// Z/b (lattice b). On the Bragg set the density takes its limit Var/m^3.
RenewalDiffraction renewal_diffraction(const WaitingTimeDistribution& dist, const UniformGrid& k_grid);

/// h(k) = 2(|rho^|^2 - Re rho^)/|1 - rho^|^2; nullopt where |1 - rho^| < 1e-12.
std::optional<double> renewal_h(const WaitingTimeDistribution& dist, double k);

/// ac density from a numerical Fourier transform of the renewal measure:
/// (1/m)(1 + 2 Re int_0^X (u(x) - 1/m) e^{-2 pi i k x} dx), u the density of nu.
EmpiricalDensity renewal_density_from_measure(const RenewalMeasure& nu, double mean, const UniformGrid& k_grid);

/// Closed form of the random-tiling density; value is nullopt where the
/// denominator is below 1e-14.
std::optional<double> fib_rt_density(double k);

}  // namespace dlab
