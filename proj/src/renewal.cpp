#include "dlab/renewal.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include "dlab/errors.hpp"
#include "dlab/parallel.hpp"
#include "dlab/substitution.hpp"
#include "fft.hpp"

namespace dlab {

using std::numbers::pi;

namespace {

std::complex<double> unit_phase(double a) {
  const double f = a - std::floor(a);
  return std::polar(1.0, -2.0 * pi * f);
}

/// Marsaglia-Tsang sampler for Gamma(shape, 1).
double standard_gamma(double shape, RandomSource& rng) {
  if (shape < 1.0) {
    const double g = standard_gamma(shape + 1.0, rng);
    double u = rng.uniform();
    while (u == 0.0) u = rng.uniform();
    return g * std::pow(u, 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    const double x = rng.normal();
    const double t = 1.0 + c * x;
    if (t <= 0.0) continue;
    const double v = t * t * t;
    const double u = rng.uniform();
    if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
    if (u > 0.0 && std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
  }
}

/// Best rational approximation p/q of x with q <= qmax (continued fractions).
std::optional<std::pair<long long, long long>> rational_approx(double x, long long qmax, double tol) {
  long long p0 = 0, q0 = 1, p1 = 1, q1 = 0;
  double r = x;
  for (int it = 0; it < 64; ++it) {
    const double a = std::floor(r);
    if (a > 1e12) break;
    const auto ai = static_cast<long long>(a);
    const long long p2 = ai * p1 + p0;
    const long long q2 = ai * q1 + q0;
    if (q2 > qmax) break;
    p0 = p1;
    q0 = q1;
    p1 = p2;
    q1 = q2;
    if (std::abs(static_cast<double>(p1) / static_cast<double>(q1) - x) <= tol) return std::pair{p1, q1};
    const double frac = r - a;
    if (frac <= 0.0) break;
    r = 1.0 / frac;
  }
  return std::nullopt;
}

/// (a * b)(x_i) by the trapezoidal rule on the common grid of step dx.
std::vector<double> trapezoid_convolve(const std::vector<double>& a, const std::vector<double>& b, double dx) {
  auto full = detail::convolve_real(a, b);
  std::vector<double> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = dx * (full[i] - 0.5 * (a[0] * b[i] + a[i] * b[0]));
  return out;
}

double trapezoid_mass(const std::vector<double>& f, double dx, std::size_t upto) {
  if (upto == 0) return 0.0;
  double s = 0.5 * (f[0] + f[upto]);
  for (std::size_t i = 1; i < upto; ++i) s += f[i];
  return s * dx;
}

}  // namespace

// --- Laws ------------------------------------------------------------------

GammaLaw::GammaLaw(double shape) : shape_(shape) {
  if (!(shape > 0.0) || !std::isfinite(shape)) throw std::invalid_argument("GammaLaw: shape must be positive");
  log_norm_ = shape * std::log(shape) - std::lgamma(shape);
}

std::string GammaLaw::name() const {
  if (shape_ == 1.0) return "exp";
  char buf[64];
  std::snprintf(buf, sizeof buf, "gamma:%.17g", shape_);
  return buf;
}

double GammaLaw::sample(RandomSource& rng) const { return standard_gamma(shape_, rng) / shape_; }

std::complex<double> GammaLaw::fourier(double k) const {
  const std::complex<double> z(1.0, 2.0 * pi * k / shape_);
  return std::exp(-shape_ * std::log(z));
}

double GammaLaw::density(double x) const {
  if (x < 0.0) return 0.0;
  if (x == 0.0) return shape_ > 1.0 ? 0.0 : (shape_ == 1.0 ? 1.0 : INFINITY);
  return std::exp(log_norm_ + (shape_ - 1.0) * std::log(x) - shape_ * x);
}

DiscreteLaw::DiscreteLaw(std::vector<Atom> atoms, std::string name) : atoms_(std::move(atoms)), name_(std::move(name)) {
  if (atoms_.empty()) throw std::invalid_argument("DiscreteLaw: no atoms");
  double total = 0.0;
  for (const auto& a : atoms_) {
    if (!(a.position > 0.0)) throw std::invalid_argument("DiscreteLaw: atoms must lie in (0, inf)");
    if (!(a.intensity > 0.0)) throw std::invalid_argument("DiscreteLaw: probabilities must be positive");
    total += a.intensity;
  }
  if (std::abs(total - 1.0) > 1e-12) throw std::invalid_argument("DiscreteLaw: probabilities must sum to 1");
  mean_ = 0.0;
  double second = 0.0;
  std::vector<double> support;
  for (const auto& a : atoms_) {
    mean_ += a.intensity * a.position;
    second += a.intensity * a.position * a.position;
    support.push_back(a.position);
  }
  variance_ = std::max(0.0, second - mean_ * mean_);
  lattice_ = coarsest_lattice(support);
}

double DiscreteLaw::sample(RandomSource& rng) const {
  const double u = rng.uniform();
  double c = 0.0;
  for (const auto& a : atoms_) {
    c += a.intensity;
    if (u < c) return a.position;
  }
  return atoms_.back().position;
}

std::complex<double> DiscreteLaw::fourier(double k) const {
  std::complex<double> s{};
  for (const auto& a : atoms_) s += a.intensity * unit_phase(k * a.position);
  return s;
}

std::optional<double> coarsest_lattice(const std::vector<double>& support) {
  if (support.empty()) return std::nullopt;
  const double x0 = support[0];
  if (!(x0 > 0.0)) return std::nullopt;
  std::vector<std::pair<long long, long long>> ratios;
  long long l = 1;
  for (double x : support) {
    const double r = x / x0;
    const auto pq = rational_approx(r, 10000, 1e-12 * std::max(1.0, r));
    if (!pq) return std::nullopt;
    ratios.push_back(*pq);
    l = std::lcm(l, pq->second);
    if (l > 10000) return std::nullopt;
  }
  long long g = 0;
  for (const auto& [p, q] : ratios) g = std::gcd(g, p * (l / q));
  return x0 * static_cast<double>(g) / static_cast<double>(l);
}

WaitingTime gamma_family(double shape) { return std::make_shared<GammaLaw>(shape); }
WaitingTime exponential_law() { return std::make_shared<GammaLaw>(1.0); }

WaitingTime point_mass(double at) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "point:%.17g", at);
  return std::make_shared<DiscreteLaw>(std::vector<Atom>{{at, 1.0}}, at == 1.0 ? "point" : buf);
}

WaitingTime fib_random_tiling() {
  return std::make_shared<DiscreteLaw>(std::vector<Atom>{{kTau, 1.0 / kTau}, {1.0, 1.0 / (kTau * kTau)}}, "fibrt");
}

WaitingTime parse_distribution(const std::string& spec) {
  const auto colon = spec.find(':');
  const std::string head = spec.substr(0, colon);
  const std::string arg = colon == std::string::npos ? "" : spec.substr(colon + 1);
  auto number = [&](const char* what) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(arg, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (arg.empty() || used != arg.size()) throw std::invalid_argument(std::string("distribution '") + spec + "': bad " + what);
    return v;
  };
  if (head == "exp" && arg.empty()) return exponential_law();
  if (head == "gamma") return gamma_family(number("shape"));
  if (head == "point") return point_mass(arg.empty() ? 1.0 : number("position"));
  if (head == "fibrt" && arg.empty()) return fib_random_tiling();
  throw std::invalid_argument("unknown distribution '" + spec + "' (expected exp, gamma:A, point[:X], fibrt)");
}

// --- Sampling --------------------------------------------------------------

WeightedComb RenewalRealization::centred_comb() const {
  const double half = 0.5 * length;
  std::vector<double> x(points.size());
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = points[i] - half;
  return WeightedComb::unit(std::move(x), half);
}

RenewalRealization renewal_sample(const WaitingTimeDistribution& dist, double length, RandomSource& rng,
                                  double burn_in) {
  if (!(length > 0.0)) throw std::invalid_argument("renewal_sample: L must be positive");
  if (!(burn_in >= 0.0)) throw std::invalid_argument("renewal_sample: burn-in must be nonnegative");
  RenewalRealization r;
  r.length = length;
  r.points.reserve(static_cast<std::size_t>(length / dist.mean() * 1.1) + 16);
  double t = -burn_in * dist.mean();
  for (;;) {
    const double gap = dist.sample(rng);
    if (!(gap > 0.0)) throw ModelError("renewal_sample: waiting time " + dist.name() + " produced a non-positive gap");
    t += gap;
    if (t > length) break;
    if (t > 0.0) r.points.push_back(t);
  }
  return r;
}

// --- Renewal measure -------------------------------------------------------

RenewalMeasure renewal_measure(const WaitingTimeDistribution& dist, double x_max, double dx, int max_terms) {
  if (!(x_max > 0.0) || !(dx > 0.0) || dx >= x_max) throw std::invalid_argument("renewal_measure: need 0 < dx < X");
  if (max_terms < 1) throw std::invalid_argument("renewal_measure: need at least one term");
  constexpr double kTailMass = 1e-8;
  RenewalMeasure out;
  const auto lat = dist.lattice();
  if (lat) {
    out.lattice = true;
    const double b = *lat;
    const auto j_max = static_cast<std::size_t>(std::floor(x_max / b + 1e-9));
    std::vector<double> f(j_max + 1, 0.0);
    for (const auto& a : dist.atoms()) {
      const auto j = static_cast<std::size_t>(std::llround(a.position / b));
      if (j <= j_max) f[j] += a.intensity;
    }
    auto conv = [&](const std::vector<double>& a, const std::vector<double>& c) {
      std::vector<double> r(j_max + 1, 0.0);
      for (std::size_t i = 0; i <= j_max; ++i)
        if (a[i] != 0.0)
          for (std::size_t j = 0; i + j <= j_max; ++j) r[i + j] += a[i] * c[j];
      return r;
    };
    std::vector<double> term = f, nu = f;
    out.terms = 1;
    while (true) {
      const double mass = std::accumulate(term.begin(), term.end(), 0.0);
      if (mass < kTailMass) {
        out.converged = true;
        break;
      }
      if (out.terms >= max_terms) break;
      term = conv(term, f);
      for (std::size_t i = 0; i <= j_max; ++i) nu[i] += term[i];
      ++out.terms;
    }
    const auto fnu = conv(f, nu);
    const auto upto = static_cast<std::size_t>(std::floor(0.8 * x_max / b + 1e-9));
    for (std::size_t i = 0; i <= std::min(upto, j_max); ++i) out.residual += std::abs(nu[i] - f[i] - fnu[i]);
    for (std::size_t i = 1; i <= j_max; ++i)
      if (nu[i] > 0.0) out.atoms.push_back({static_cast<double>(i) * b, nu[i]});
    return out;
  }
  if (!dist.has_density()) throw std::invalid_argument("renewal_measure: law is neither absolutely continuous nor lattice");
  const auto n = static_cast<std::size_t>(std::llround(x_max / dx));
  const double step = x_max / static_cast<double>(n);
  std::vector<double> f(n + 1);
  for (std::size_t i = 0; i <= n; ++i) f[i] = dist.density(static_cast<double>(i) * step);
  if (!std::isfinite(f[0])) throw std::invalid_argument("renewal_measure: waiting-time density unbounded at 0");
  std::vector<double> term = f, nu = f;
  out.terms = 1;
  while (true) {
    if (trapezoid_mass(term, step, n) < kTailMass) {
      out.converged = true;
      break;
    }
    if (out.terms >= max_terms) break;
    term = trapezoid_convolve(term, f, step);
    for (std::size_t i = 0; i <= n; ++i) nu[i] += term[i];
    ++out.terms;
  }
  const auto fnu = trapezoid_convolve(f, nu, step);
  std::vector<double> r(n + 1);
  for (std::size_t i = 0; i <= n; ++i) r[i] = std::abs(nu[i] - f[i] - fnu[i]);
  out.residual = trapezoid_mass(r, step, static_cast<std::size_t>(std::floor(0.8 * static_cast<double>(n))));
  out.density.grid = {0.0, step, n + 1};
  out.density.values = std::move(nu);
  return out;
}

RenewalAutocorr renewal_autocorr(const WaitingTimeDistribution& dist, double x_max, double dx) {
  RenewalAutocorr out;
  out.nu = renewal_measure(dist, x_max, dx);
  const double inv_m = 1.0 / dist.mean();
  out.atom0 = inv_m;
  out.lattice = out.nu.lattice;
  if (out.lattice) {
    for (auto it = out.nu.atoms.rbegin(); it != out.nu.atoms.rend(); ++it)
      out.atoms.push_back({-it->position, inv_m * it->intensity});
    for (const auto& a : out.nu.atoms) out.atoms.push_back({a.position, inv_m * a.intensity});
    return out;
  }
  const auto& u = out.nu.density;
  const std::size_t n = u.grid.size - 1;
  out.density.grid = {-static_cast<double>(n) * u.grid.step, u.grid.step, 2 * n + 1};
  out.density.values.resize(2 * n + 1);
  for (std::size_t i = 0; i <= n; ++i) {
    out.density.values[n + i] = inv_m * u.values[i];
    out.density.values[n - i] = inv_m * u.values[i];
  }
  return out;
}

// --- Diffraction -----------------------------------------------------------

std::optional<double> renewal_h(const WaitingTimeDistribution& dist, double k) {
  const auto rho = dist.fourier(k);
  const double d = std::norm(1.0 - rho);
  if (std::sqrt(d) < 1e-12) return std::nullopt;
  return 2.0 * (std::norm(rho) - rho.real()) / d;
}

RenewalDiffraction renewal_diffraction(const WaitingTimeDistribution& dist, const UniformGrid& k_grid) {
  k_grid.validate();
  const double m = dist.mean();
  const auto lat = dist.lattice();
  RenewalDiffraction out;
  out.measure.label = "renewal:" + dist.name();
  out.measure.ac_density.grid = k_grid;
  out.measure.ac_density.values.resize(k_grid.size);
  auto on_bragg = [&](double k) {
    if (!lat) return std::abs(k) < 1e-12;
    const double t = k * *lat;
    return std::abs(t - std::round(t)) < 1e-9;
  };
  for (std::size_t i = 0; i < k_grid.size; ++i) {
    const double k = k_grid[i];
    double v;
    if (on_bragg(k)) {
      v = dist.variance() / (m * m * m);
    } else {
      const auto rho = dist.fourier(k);
      const double d = std::norm(1.0 - rho);
      if (std::sqrt(d) < 1e-12) {
        out.singular.push_back(i);
        v = 0.0;
      } else {
        v = (1.0 - std::norm(rho)) / (m * d);
      }
    }
    out.measure.ac_density.values[i] = v;
  }
  const double w = 1.0 / (m * m);
  if (lat) {
    const double b = *lat;
    const auto lo = static_cast<long long>(std::ceil(k_grid.start * b - 1e-9));
    const auto hi = static_cast<long long>(std::floor(k_grid.back() * b + 1e-9));
    for (long long j = lo; j <= hi; ++j) out.measure.atoms.push_back({static_cast<double>(j) / b, w});
  } else if (k_grid.start <= 0.0 && k_grid.back() >= 0.0) {
    out.measure.atoms.push_back({0.0, w});
  }
  return out;
}

EmpiricalDensity renewal_density_from_measure(const RenewalMeasure& nu, double mean, const UniformGrid& k_grid) {
  if (nu.lattice) throw std::invalid_argument("renewal_density_from_measure: needs an absolutely continuous renewal measure");
  k_grid.validate();
  const auto& u = nu.density;
  const double inv_m = 1.0 / mean;
  const double dx = u.grid.step;
  const std::size_t n = u.grid.size;
  EmpiricalDensity out;
  out.grid = k_grid;
  out.values.resize(k_grid.size);
  constexpr std::size_t kChunk = 16;
  parallel_for_chunks(chunk_count(k_grid.size, kChunk), [&](std::size_t c) {
    const auto [b, e] = chunk_range(c, k_grid.size, kChunk);
    for (std::size_t i = b; i < e; ++i) {
      const double k = k_grid[i];
      double s = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        const double wt = (j == 0 || j + 1 == n) ? 0.5 : 1.0;
        s += wt * (u.values[j] - inv_m) * unit_phase(k * static_cast<double>(j) * dx).real();
      }
      out.values[i] = inv_m * (1.0 + 2.0 * s * dx);
    }
  });
  return out;
}

std::optional<double> fib_rt_density(double k) {
  const double t = kTau;
  const double a = std::sin(pi * k / t);
  const double b = std::sin(pi * k * t);
  const double c = std::sin(pi * k);
  const double den = t * t * b * b + t * c * c - a * a;
  if (std::abs(den) < 1e-14) return std::nullopt;
  return (t + 2.0) / 5.0 * a * a / den;
}

}  // namespace dlab
