#include "dlab/palm.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "dlab/parallel.hpp"

namespace dlab {

using std::numbers::pi;
using cplx = std::complex<double>;

namespace {

/// Symmetric bins of width b on [-H b, H b), closed toward zero (same layout as pair_histogram).
struct SymmetricBins {
  std::size_t half;
  double width;

  std::size_t count() const { return 2 * half; }
  double reach() const { return static_cast<double>(half) * width; }
  UniformGrid grid() const { return {-reach() + 0.5 * width, width, count()}; }
  std::ptrdiff_t operator()(double d) const {
    const double q = std::floor(std::abs(d) / width);
    if (!(q < static_cast<double>(half))) return -1;
    const auto qi = static_cast<std::size_t>(q);
    return static_cast<std::ptrdiff_t>(d >= 0.0 ? half + qi : half - 1 - qi);
  }
};

SymmetricBins make_bins(double max_dist, double bin_width) {
  if (!(bin_width > 0.0) || !(max_dist > 0.0)) throw std::invalid_argument("bad bin width or range");
  return {static_cast<std::size_t>(std::ceil(max_dist / bin_width - 1e-9)), bin_width};
}

ReducedSecondMoment from_histogram(const PairHistogram& h) {
  return {h.atom0, h.grid, h.values, h.bin_width};
}

void check_window(const ComplexMeasureRealization& phi, double n, const char* what) {
  if (!(n > 0.0)) throw std::invalid_argument(std::string(what) + ": n must be positive");
  if (n > phi.window_radius * (1.0 + 1e-12)) throw std::invalid_argument(std::string(what) + ": n exceeds the window radius");
}

}  // namespace

// --- Polar decomposition ---------------------------------------------------

std::vector<cplx> PolarDecomposition::reconstruct() const {
  std::vector<cplx> w(moduli.size());
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = std::polar(moduli[i], phases[i]);
  return w;
}

PolarDecomposition polar_decompose(const ComplexMeasureRealization& phi) {
  PolarDecomposition p;
  for (std::size_t i = 0; i < phi.size(); ++i) {
    const cplx w = phi.weights[i];
    const double r = std::abs(w);
    if (r == 0.0) continue;
    double a = std::arg(w);
    if (a < 0.0) a += 2.0 * pi;
    if (a >= 2.0 * pi) a = 0.0;
    p.positions.push_back(phi.positions[i]);
    p.moduli.push_back(r);
    p.phases.push_back(a);
  }
  return p;
}

// --- Reduced second moment -------------------------------------------------

bool ReducedSecondMoment::is_hermitian() const {
  if (atom0.imag() != 0.0) return false;
  const std::size_t n = density.size();
  for (std::size_t k = 0; k < n; ++k)
    if (density[k] != std::conj(density[n - 1 - k])) return false;
  return true;
}

cplx ReducedSecondMoment::mass(double a, double b) const {
  cplx s{};
  for (std::size_t i = 0; i < density.size(); ++i) {
    const double x = grid[i];
    if (x >= a && x <= b) s += density[i];
  }
  return s * bin_width;
}

double ReducedSecondMoment::l1_distance(const ReducedSecondMoment& other, double lo, double hi) const {
  if (density.size() != other.density.size() || grid.start != other.grid.start || grid.step != other.grid.step)
    throw std::invalid_argument("ReducedSecondMoment::l1_distance: grids differ");
  double s = 0.0;
  for (std::size_t i = 0; i < density.size(); ++i) {
    const double x = grid[i];
    if (x >= lo && x <= hi) s += std::abs(density[i] - other.density[i]);
  }
  return s * bin_width;
}

ReducedSecondMoment ReducedSecondMoment::conj() const {
  ReducedSecondMoment c = *this;
  c.atom0 = std::conj(atom0);
  for (auto& v : c.density) v = std::conj(v);
  return c;
}

ReducedSecondMoment empirical_autocorr(const ComplexMeasureRealization& phi, double n, double max_dist,
                                       double bin_width, PairReduction reduction) {
  check_window(phi, n, "empirical_autocorr");
  return from_histogram(pair_histogram(phi, max_dist, bin_width, n, n, reduction, true));
}

double boundary_term_check(const ComplexMeasureRealization& phi, double n, double max_dist, double bin_width) {
  check_window(phi, n, "boundary_term_check");
  const auto full = pair_histogram(phi, max_dist, bin_width, n, phi.window_radius, PairReduction::Standard, false);
  const auto inner = pair_histogram(phi, max_dist, bin_width, n, n, PairReduction::Standard, false);
  double s = 0.0;
  for (std::size_t k = 0; k < full.values.size(); ++k) s += std::abs(full.values[k] - inner.values[k]);
  return s * bin_width;
}

// --- Palm intensity --------------------------------------------------------

ReducedSecondMoment PalmEstimate::intensity() const {
  ReducedSecondMoment r = rho_times_intensity;
  r.atom0 /= rho;
  for (auto& v : r.density) v /= rho;
  return r;
}

PalmEstimate palm_intensity_estimate(std::span<const ComplexMeasureRealization> realizations, double n,
                                     double max_dist, double bin_width) {
  if (realizations.empty()) throw std::invalid_argument("palm_intensity_estimate: no realizations");
  const auto bins = make_bins(max_dist, bin_width);
  const std::size_t nb = bins.count();
  const double reach = bins.reach();

  struct Partial {
    double total_variation = 0.0;
    cplx atom{};
    std::vector<cplx> values;
  };
  std::vector<Partial> parts(realizations.size());
  parallel_for_chunks(realizations.size(), [&](std::size_t r) {
    const auto& phi = realizations[r];
    check_window(phi, n, "palm_intensity_estimate");
    const auto& x = phi.positions;
    const auto& w = phi.weights;
    Partial p;
    p.values.assign(nb, cplx{});
    std::size_t lo = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (x[i] < -n || x[i] > n) continue;
      const double modulus = std::abs(w[i]);
      if (modulus == 0.0) continue;
      p.total_variation += modulus;
      // Palm configuration: e^{-i phi_i} Phi seen from x_i, weighted by |w_i|.
      const cplx rotation = std::conj(w[i]) / modulus;
      while (lo < x.size() && x[lo] < x[i] - reach) ++lo;
      for (std::size_t j = lo; j < x.size() && x[j] <= x[i] + reach; ++j) {
        const cplx term = modulus * (rotation * w[j]);
        if (j == i) {
          p.atom += term;
          continue;
        }
        const auto k = bins(x[j] - x[i]);
        if (k >= 0) p.values[static_cast<std::size_t>(k)] += term;
      }
    }
    parts[r] = std::move(p);
  });

  bool any = false;
  PalmEstimate est;
  ReducedSecondMoment& m = est.rho_times_intensity;
  m.grid = bins.grid();
  m.bin_width = bin_width;
  m.density.assign(nb, cplx{});
  const double vol = 2.0 * n;
  const auto count = static_cast<double>(realizations.size());
  for (const auto& p : parts) {
    any = any || p.total_variation > 0.0;
    est.rho += p.total_variation / vol / count;
    m.atom0 += p.atom / vol / count;
    for (std::size_t k = 0; k < nb; ++k) m.density[k] += p.values[k] / (vol * bin_width) / count;
  }
  if (!any) throw std::invalid_argument("palm_intensity_estimate: empty support");
  return est;
}

// --- Campbell pairing ------------------------------------------------------

cplx RotatedConfiguration::mass(double a, double b) const {
  const auto& x = phi_->positions;
  const auto lo = static_cast<std::size_t>(std::lower_bound(x.begin(), x.end(), a) - x.begin());
  const auto hi = static_cast<std::size_t>(std::upper_bound(x.begin(), x.end(), b) - x.begin());
  cplx s{};
  for (std::size_t j = lo; j < hi; ++j) s += phi_->weights[j];
  return rotation_ * s;
}

cplx campbell_pairing(const CampbellIntegrand& g, std::span<const ComplexMeasureRealization> realizations) {
  if (realizations.empty()) throw std::invalid_argument("campbell_pairing: no realizations");
  std::vector<cplx> per(realizations.size());
  parallel_for_chunks(realizations.size(), [&](std::size_t r) {
    const auto& phi = realizations[r];
    cplx s{};
    for (std::size_t i = 0; i < phi.size(); ++i) {
      const double modulus = std::abs(phi.weights[i]);
      if (modulus == 0.0) continue;
      s += modulus * g(phi.positions[i], RotatedConfiguration(phi, std::conj(phi.weights[i]) / modulus));
    }
    per[r] = s;
  });
  cplx total{};
  for (const auto& v : per) total += v;
  return total / static_cast<double>(realizations.size());
}

cplx pair_functional(const ComplexMeasureRealization& phi, double n, double support,
                     const std::function<double(double)>& g) {
  check_window(phi, n, "pair_functional");
  const auto& x = phi.positions;
  const auto& w = phi.weights;
  const auto lo = static_cast<std::size_t>(std::lower_bound(x.begin(), x.end(), -n) - x.begin());
  const auto hi = static_cast<std::size_t>(std::upper_bound(x.begin(), x.end(), n) - x.begin());
  const std::size_t count = hi > lo ? hi - lo : 0;
  constexpr std::size_t kChunk = 2048;
  std::vector<cplx> partial(chunk_count(count, kChunk));
  parallel_for_chunks(partial.size(), [&](std::size_t c) {
    const auto [b, e] = chunk_range(c, count, kChunk);
    cplx s{};
    std::size_t first = lo;
    for (std::size_t ii = b; ii < e; ++ii) {
      const std::size_t i = lo + ii;
      while (first < hi && x[first] < x[i] - support) ++first;
      for (std::size_t j = first; j < hi && x[j] <= x[i] + support; ++j) s += w[i] * std::conj(w[j]) * g(x[i] - x[j]);
    }
    partial[c] = s;
  });
  cplx total{};
  for (const auto& v : partial) total += v;
  return total / (2.0 * n);
}

double cubic_bspline(double u) {
  const double a = std::abs(u);
  if (a < 1.0) return 2.0 / 3.0 - a * a + 0.5 * a * a * a;
  if (a < 2.0) return (2.0 - a) * (2.0 - a) * (2.0 - a) / 6.0;
  return 0.0;
}

// --- Marked models ---------------------------------------------------------

cplx MarkLaw::sample(RandomSource& rng) const {
  if (variance == 0.0) return mean;
  const double s = std::sqrt(0.5 * variance);
  const double re = rng.normal();
  const double im = rng.normal();
  return mean + s * cplx(re, im);
}

double MarkedProcessModel::intensity() const {
  if (ground == Ground::Poisson) return rate;
  if (!waiting) throw std::invalid_argument("MarkedProcessModel: renewal ground without a waiting-time law");
  return 1.0 / waiting->mean();
}

ComplexMeasureRealization MarkedProcessModel::sample(double radius, RandomSource& rng) const {
  if (!(radius > 0.0)) throw std::invalid_argument("MarkedProcessModel::sample: radius must be positive");
  std::vector<double> x;
  if (ground == Ground::Poisson) {
    if (!(rate > 0.0)) throw std::invalid_argument("MarkedProcessModel: Poisson rate must be positive");
    double t = -radius;
    for (;;) {
      double u = rng.uniform();
      while (u == 0.0) u = rng.uniform();
      t += -std::log(u) / rate;
      if (t > radius) break;
      x.push_back(t);
    }
  } else {
    if (!waiting) throw std::invalid_argument("MarkedProcessModel: renewal ground without a waiting-time law");
    const auto r = renewal_sample(*waiting, 2.0 * radius, rng);
    x.reserve(r.points.size());
    for (double p : r.points) x.push_back(p - radius);
  }
  ComplexMeasureRealization phi;
  phi.window_radius = radius;
  phi.weights.reserve(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) phi.weights.push_back(marks.sample(rng));
  phi.positions = std::move(x);
  return phi;
}

std::vector<ComplexMeasureRealization> MarkedProcessModel::sample_many(double radius, std::size_t count,
                                                                       const RandomSource& rng) const {
  std::vector<ComplexMeasureRealization> out(count);
  parallel_for_chunks(count, [&](std::size_t i) {
    RandomSource r = rng.split(i);
    out[i] = sample(radius, r);
  });
  return out;
}

ReducedSecondMoment MarkedProcessModel::analytic(double max_dist, double bin_width) const {
  if (ground != Ground::Poisson) throw std::invalid_argument("MarkedProcessModel::analytic: only the Poisson ground is closed-form");
  const auto bins = make_bins(max_dist, bin_width);
  ReducedSecondMoment m;
  m.grid = bins.grid();
  m.bin_width = bin_width;
  m.atom0 = rate * marks.second_moment();
  m.density.assign(bins.count(), cplx(rate * rate * std::norm(marks.mean), 0.0));
  return m;
}

}  // namespace dlab
