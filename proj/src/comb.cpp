#include "dlab/comb.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "dlab/parallel.hpp"
#include "fft.hpp"

namespace dlab {

using std::numbers::pi;

namespace {

/// exp(-2 pi i a) with the argument reduced modulo 1 first.
cplx unit_phase(double a) {
  const double f = a - std::floor(a);
  return std::polar(1.0, -2.0 * pi * f);
}

}  // namespace

// --- WeightedComb ----------------------------------------------------------

void WeightedComb::validate() const {
  if (positions.size() != weights.size()) throw std::invalid_argument("WeightedComb: positions/weights size mismatch");
  if (!(window_radius > 0.0)) throw std::invalid_argument("WeightedComb: window radius must be positive");
  for (std::size_t i = 0; i < positions.size(); ++i) {
    if (std::abs(positions[i]) > window_radius) throw std::invalid_argument("WeightedComb: position outside window");
    if (i > 0 && !(positions[i] > positions[i - 1]))
      throw std::invalid_argument("WeightedComb: positions must be strictly increasing");
  }
}

WeightedComb WeightedComb::unit(std::vector<double> positions, double window_radius) {
  WeightedComb c;
  c.weights.assign(positions.size(), cplx(1.0, 0.0));
  c.positions = std::move(positions);
  c.window_radius = window_radius;
  return c;
}

WeightedComb WeightedComb::lattice(std::span<const cplx> weights) {
  if (weights.size() % 2 == 0) throw std::invalid_argument("WeightedComb::lattice: need 2N+1 weights");
  const auto n = static_cast<long long>(weights.size() / 2);
  WeightedComb c;
  c.positions.resize(weights.size());
  for (std::size_t i = 0; i < weights.size(); ++i) c.positions[i] = static_cast<double>(static_cast<long long>(i) - n);
  c.weights.assign(weights.begin(), weights.end());
  c.window_radius = static_cast<double>(n) + 0.5;
  return c;
}

WeightedComb WeightedComb::lattice(std::span<const int> weights) {
  std::vector<cplx> w(weights.begin(), weights.end());
  return lattice(std::span<const cplx>(w));
}

WeightedComb WeightedComb::restricted(double r) const {
  if (!(r > 0.0)) throw std::invalid_argument("WeightedComb::restricted: radius must be positive");
  WeightedComb c;
  c.window_radius = r;
  const auto lo = std::lower_bound(positions.begin(), positions.end(), -r);
  const auto hi = std::upper_bound(positions.begin(), positions.end(), r);
  const auto a = static_cast<std::size_t>(lo - positions.begin());
  const auto b = static_cast<std::size_t>(hi - positions.begin());
  c.positions.assign(positions.begin() + static_cast<std::ptrdiff_t>(a), positions.begin() + static_cast<std::ptrdiff_t>(b));
  c.weights.assign(weights.begin() + static_cast<std::ptrdiff_t>(a), weights.begin() + static_cast<std::ptrdiff_t>(b));
  return c;
}

// --- SignedSequence --------------------------------------------------------

void SignedSequence::validate() const {
  for (int v : values)
    if (v != 1 && v != -1) throw std::invalid_argument("SignedSequence: entries must be +1 or -1");
}

std::vector<cplx> SignedSequence::complex_weights() const { return {values.begin(), values.end()}; }

WeightedComb SignedSequence::comb() const {
  WeightedComb c;
  c.positions.resize(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) c.positions[i] = static_cast<double>(first_index + static_cast<std::int64_t>(i));
  c.weights = complex_weights();
  const double last = static_cast<double>(first_index + static_cast<std::int64_t>(values.size()) - 1);
  c.window_radius = std::max(std::abs(static_cast<double>(first_index)), std::abs(last)) + 0.5;
  return c;
}

// --- AutocorrCoeffs --------------------------------------------------------

AutocorrCoeffs AutocorrCoeffs::from_nonnegative(std::span<const cplx> eta_nonneg, double spacing) {
  if (eta_nonneg.empty()) throw std::invalid_argument("AutocorrCoeffs: need eta(0)");
  const int m = static_cast<int>(eta_nonneg.size()) - 1;
  AutocorrCoeffs c;
  c.spacing = spacing;
  c.values.resize(static_cast<std::size_t>(2 * m + 1));
  for (int k = 0; k <= m; ++k) {
    c.at(k) = eta_nonneg[static_cast<std::size_t>(k)];
    c.at(-k) = std::conj(eta_nonneg[static_cast<std::size_t>(k)]);
  }
  c.at(0) = cplx(eta_nonneg[0].real(), 0.0);
  return c;
}

bool AutocorrCoeffs::is_hermitian(double tol) const {
  for (int m = 0; m <= max_lag(); ++m)
    if (std::abs(at(-m) - std::conj(at(m))) > tol) return false;
  return true;
}

// --- EmpiricalDensity / SpectralMeasure ------------------------------------

void EmpiricalDensity::validate() const {
  grid.validate();
  if (values.size() != grid.size) throw std::invalid_argument("EmpiricalDensity: size mismatch");
  for (double v : values)
    if (!std::isfinite(v)) throw std::invalid_argument("EmpiricalDensity: non-finite value");
}

double EmpiricalDensity::integral() const {
  double s = 0.0;
  for (double v : values) s += v;
  return s * grid.step;
}

double EmpiricalDensity::integral(double a, double b) const {
  double s = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double k = grid[i];
    if (k >= a && k <= b) s += values[i];
  }
  return s * grid.step;
}

void SpectralMeasure::validate(double tol) const {
  ac_density.validate();
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    if (!(atoms[i].intensity > 0.0)) throw std::invalid_argument("SpectralMeasure: atom intensity must be positive");
    for (std::size_t j = 0; j < i; ++j)
      if (atoms[j].position == atoms[i].position) throw std::invalid_argument("SpectralMeasure: duplicate atom");
  }
  for (double v : ac_density.values)
    if (v < -tol) throw std::invalid_argument("SpectralMeasure: negative density");
}

// --- Lattice autocorrelation -----------------------------------------------

AutocorrCoeffs autocorr_lattice(std::span<const cplx> w, int max_lag) {
  if (w.size() % 2 == 0) throw std::invalid_argument("autocorr_lattice: need weights on [-N, N]");
  const auto n = static_cast<long long>(w.size() / 2);
  if (max_lag < 0 || max_lag >= n) throw std::invalid_argument("autocorr_lattice: need 0 <= max_lag < N");
  const std::size_t len = w.size();
  std::vector<cplx> eta(static_cast<std::size_t>(max_lag) + 1);
  constexpr std::size_t kChunk = 8;
  const std::size_t lags = eta.size();
  parallel_for_chunks(chunk_count(lags, kChunk), [&](std::size_t c) {
    const auto [b, e] = chunk_range(c, lags, kChunk);
    for (std::size_t m = b; m < e; ++m) {
      cplx s{};
      for (std::size_t i = m; i < len; ++i) s += w[i] * std::conj(w[i - m]);
      eta[m] = s / static_cast<double>(len - m);
    }
  });
  return AutocorrCoeffs::from_nonnegative(eta);
}

AutocorrCoeffs autocorr_lattice(const SignedSequence& seq, int max_lag) {
  const auto w = seq.complex_weights();
  return autocorr_lattice(std::span<const cplx>(w), max_lag);
}

// --- Pair histogram --------------------------------------------------------

cplx PairHistogram::mass(double a, double b) const {
  cplx s{};
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double x = grid[i];
    if (x >= a && x <= b) s += values[i];
  }
  return s * bin_width;
}

PairHistogram pair_histogram(const WeightedComb& comb, double max_dist, double bin_width, double inner_radius,
                             double outer_radius, PairReduction reduction, bool symmetrize) {
  if (!(bin_width > 0.0) || !(max_dist > 0.0)) throw std::invalid_argument("pair_histogram: bad bin width or range");
  if (!(inner_radius > 0.0)) throw std::invalid_argument("pair_histogram: inner radius must be positive");
  const auto half = static_cast<std::size_t>(std::ceil(max_dist / bin_width - 1e-9));
  const std::size_t bins = 2 * half;
  const double reach = static_cast<double>(half) * bin_width;

  PairHistogram out;
  out.bin_width = bin_width;
  out.grid = {-reach + 0.5 * bin_width, bin_width, bins};
  out.values.assign(bins, cplx{});

  const auto& x = comb.positions;
  const auto& w = comb.weights;
  const std::size_t n = x.size();
  const auto in_lo = static_cast<std::size_t>(std::lower_bound(x.begin(), x.end(), -inner_radius) - x.begin());
  const auto in_hi = static_cast<std::size_t>(std::upper_bound(x.begin(), x.end(), inner_radius) - x.begin());
  const auto out_lo = static_cast<std::size_t>(std::lower_bound(x.begin(), x.end(), -outer_radius) - x.begin());
  const auto out_hi = static_cast<std::size_t>(std::upper_bound(x.begin(), x.end(), outer_radius) - x.begin());
  const std::size_t first = std::min(in_lo, n);
  const std::size_t count = in_hi > first ? in_hi - first : 0;

  auto bin_of = [&](double d) -> std::ptrdiff_t {
    if (d >= 0.0) {
      const double q = std::floor(d / bin_width);
      return q < static_cast<double>(half) ? static_cast<std::ptrdiff_t>(half + static_cast<std::size_t>(q)) : -1;
    }
    const double q = std::floor(-d / bin_width);
    return q < static_cast<double>(half) ? static_cast<std::ptrdiff_t>(half - 1 - static_cast<std::size_t>(q)) : -1;
  };

  constexpr std::size_t kChunk = 2048;
  const std::size_t chunks = chunk_count(count, kChunk);
  std::vector<std::vector<cplx>> partial(chunks);
  std::vector<cplx> partial_atom(chunks);
  parallel_for_chunks(chunks, [&](std::size_t c) {
    const auto [b, e] = chunk_range(c, count, kChunk);
    std::vector<cplx> h(bins);
    cplx atom{};
    std::size_t lo = out_lo;
    for (std::size_t ii = b; ii < e; ++ii) {
      const std::size_t i = first + ii;
      while (lo < out_hi && x[lo] < x[i] - reach) ++lo;
      for (std::size_t j = lo; j < out_hi && x[j] <= x[i] + reach; ++j) {
        const cplx term = w[i] * std::conj(w[j]);
        if (j == i) {
          atom += term;
          continue;
        }
        const double d = reduction == PairReduction::Standard ? x[i] - x[j] : x[j] - x[i];
        const auto k = bin_of(d);
        if (k >= 0) h[static_cast<std::size_t>(k)] += term;
      }
    }
    partial[c] = std::move(h);
    partial_atom[c] = atom;
  });

  cplx atom{};
  for (std::size_t c = 0; c < chunks; ++c) {
    atom += partial_atom[c];
    for (std::size_t k = 0; k < bins; ++k) out.values[k] += partial[c][k];
  }
  const double vol = 2.0 * inner_radius;
  out.atom0 = atom / vol;
  for (auto& v : out.values) v /= vol * bin_width;
  if (symmetrize) {
    std::vector<cplx> s(bins);
    for (std::size_t k = 0; k < bins; ++k) s[k] = (out.values[k] + std::conj(out.values[bins - 1 - k])) * 0.5;
    out.values = std::move(s);
  }
  return out;
}

PointsetAutocorr autocorr_pointset(const WeightedComb& comb, double max_dist, double bin_width) {
  if (!(bin_width > 0.0)) throw std::invalid_argument("autocorr_pointset: bin width must be positive");
  if (!(max_dist < 2.0 * comb.window_radius)) throw std::invalid_argument("autocorr_pointset: need R < 2 r");
  const auto h = pair_histogram(comb, max_dist, bin_width, comb.window_radius, comb.window_radius);
  PointsetAutocorr out;
  out.atom0 = h.atom0.real();
  out.density.grid = h.grid;
  out.density.bandwidth = 0.0;
  out.density.values.resize(h.values.size());
  for (std::size_t i = 0; i < h.values.size(); ++i) out.density.values[i] = h.values[i].real();
  return out;
}

// --- Periodogram -----------------------------------------------------------

std::optional<LatticeFit> detect_lattice(std::span<const double> x) {
  if (x.size() < 2) return std::nullopt;
  double min_gap = INFINITY;
  double scale = 1.0;
  for (std::size_t i = 1; i < x.size(); ++i) {
    const double g = x[i] - x[i - 1];
    if (!(g > 0.0)) return std::nullopt;
    min_gap = std::min(min_gap, g);
  }
  for (double v : x) scale = std::max(scale, std::abs(v));
  const double tol = 1e-12 * scale;
  for (int divisor = 1; divisor <= 8; ++divisor) {
    const double s = min_gap / divisor;
    if (tol > 1e-6 * s) break;  // spacing too fine to certify at this magnitude
    LatticeFit fit{x[0], s, std::vector<std::int64_t>(x.size())};
    bool ok = true;
    for (std::size_t i = 0; i < x.size() && ok; ++i) {
      const double q = std::round((x[i] - x[0]) / s);
      fit.indices[i] = static_cast<std::int64_t>(q);
      ok = std::abs(x[0] + s * q - x[i]) <= tol;
    }
    if (ok) return fit;
  }
  return std::nullopt;
}

namespace {

std::vector<cplx> sums_direct(std::span<const double> x, std::span<const cplx> w, const UniformGrid& g) {
  std::vector<cplx> out(g.size);
  constexpr std::size_t kChunk = 256;
  parallel_for_chunks(chunk_count(g.size, kChunk), [&](std::size_t c) {
    const auto [b, e] = chunk_range(c, g.size, kChunk);
    std::vector<cplx> acc(e - b);
    for (std::size_t j = 0; j < x.size(); ++j) {
      cplx z = w[j] * unit_phase(g[b] * x[j]);
      const cplx rot = unit_phase(g.step * x[j]);
      for (std::size_t i = 0; i < acc.size(); ++i) {
        acc[i] += z;
        z *= rot;
      }
    }
    std::copy(acc.begin(), acc.end(), out.begin() + static_cast<std::ptrdiff_t>(b));
  });
  return out;
}

std::optional<std::size_t> fft_length(const LatticeFit& fit, const UniformGrid& g) {
  if (g.size < 2) return std::nullopt;
  const double m = 1.0 / (fit.spacing * g.step);
  const double r = std::round(m);
  if (r < 1.0 || r > 0x1p28 || std::abs(m - r) > 1e-9 * r) return std::nullopt;
  return static_cast<std::size_t>(r);
}

std::vector<cplx> sums_lattice(std::span<const cplx> w, const LatticeFit& fit, const UniformGrid& g, std::size_t m) {
  std::vector<cplx> a(m);
  const auto mm = static_cast<std::int64_t>(m);
  for (std::size_t j = 0; j < w.size(); ++j) {
    const std::int64_t n = fit.indices[j];
    std::int64_t idx = n % mm;
    if (idx < 0) idx += mm;
    a[static_cast<std::size_t>(idx)] += w[j] * unit_phase(g.start * fit.spacing * static_cast<double>(n));
  }
  a = detail::fft_forward(std::move(a));
  std::vector<cplx> out(g.size);
  for (std::size_t i = 0; i < g.size; ++i) out[i] = a[i % m] * unit_phase(g[i] * fit.origin);
  return out;
}

}  // namespace

std::vector<cplx> exponential_sums(std::span<const double> x, std::span<const cplx> w, const UniformGrid& g,
                                   PeriodogramMethod method) {
  g.validate();
  if (x.size() != w.size()) throw std::invalid_argument("exponential_sums: size mismatch");
  std::optional<LatticeFit> fit;
  std::optional<std::size_t> m;
  if (method == PeriodogramMethod::Auto || method == PeriodogramMethod::LatticeFft) {
    fit = detect_lattice(x);
    if (fit) m = fft_length(*fit, g);
  }
  if (method == PeriodogramMethod::LatticeFft && !m)
    throw std::invalid_argument("exponential_sums: comb/grid not compatible with the lattice FFT path");
  if (m) return sums_lattice(w, *fit, g, *m);
  const bool large = static_cast<double>(x.size()) * static_cast<double>(g.size) > 4e7;
  if (method == PeriodogramMethod::NonuniformFft || (method == PeriodogramMethod::Auto && large && g.size >= 64))
    return detail::nufft_type1(x.data(), w.data(), x.size(), g.start, g.step, g.size);
  return sums_direct(x, w, g);
}

EmpiricalDensity periodogram(const WeightedComb& comb, const UniformGrid& k_grid, PeriodogramMethod method) {
  if (comb.empty()) throw std::invalid_argument("periodogram: empty comb");
  k_grid.validate();
  const auto s = exponential_sums(comb.positions, comb.weights, k_grid, method);
  EmpiricalDensity d;
  d.grid = k_grid;
  d.values.resize(s.size());
  const double vol = comb.volume();
  for (std::size_t i = 0; i < s.size(); ++i) d.values[i] = std::norm(s[i]) / vol;
  return d;
}

EmpiricalDensity remove_mean_peak(const EmpiricalDensity& p, const WeightedComb& comb) {
  cplx total{};
  for (const auto& v : comb.weights) total += v;
  const double vol = comb.volume();
  const double rho2 = std::norm(total / vol);
  const double r = comb.window_radius;
  EmpiricalDensity out = p;
  for (std::size_t i = 0; i < p.values.size(); ++i) {
    const double k = p.grid[i];
    const double ft = k == 0.0 ? vol : std::sin(2.0 * pi * k * r) / (pi * k);
    out.values[i] -= rho2 * ft * ft / vol;
  }
  return out;
}

// --- Smoothing -------------------------------------------------------------

EmpiricalDensity smooth(const EmpiricalDensity& density, double bandwidth) {
  density.validate();
  const double step = density.grid.step;
  if (bandwidth < step * (1.0 - 1e-12)) throw std::invalid_argument("smooth: bandwidth below grid step");
  const auto k = static_cast<std::size_t>(std::max(1.0, std::round(bandwidth / step)));
  const std::size_t n = density.values.size();
  // Linear convolution with the triangle (K - |j|)/K^2, |j| < K, on a zero-padded line,
  // done as two length-K box sums.
  const std::size_t pad = k;
  const std::size_t len = n + 2 * pad;
  std::vector<double> line(len, 0.0);
  for (std::size_t i = 0; i < n; ++i) line[i + pad] = density.values[i];

  std::vector<double> prefix(len + 1, 0.0);
  for (std::size_t i = 0; i < len; ++i) prefix[i + 1] = prefix[i] + line[i];
  std::vector<double> box(len, 0.0);  // sum over [i-K+1, i]
  for (std::size_t i = 0; i < len; ++i) box[i] = prefix[i + 1] - prefix[i + 1 >= k ? i + 1 - k : 0];
  for (std::size_t i = 0; i < len; ++i) prefix[i + 1] = prefix[i] + box[i];
  std::vector<double> tri(len, 0.0);  // sum of box over [i, i+K-1]
  const double norm = 1.0 / (static_cast<double>(k) * static_cast<double>(k));
  for (std::size_t i = 0; i < len; ++i) tri[i] = (prefix[std::min(len, i + k)] - prefix[i]) * norm;

  EmpiricalDensity out;
  out.grid = density.grid;
  out.bandwidth = static_cast<double>(k) * step;
  out.values.assign(n, 0.0);
  for (std::size_t p = 0; p < len; ++p) {
    // Half-sample reflection about both grid ends.
    auto q = static_cast<long long>(p) - static_cast<long long>(pad);
    const auto nn = static_cast<long long>(n);
    while (q < 0 || q >= nn) q = q < 0 ? -q - 1 : 2 * nn - q - 1;
    out.values[static_cast<std::size_t>(q)] += tri[p];
  }
  return out;
}

// --- Fejer series and Wiener sum -------------------------------------------

EmpiricalDensity eta_to_density(const AutocorrCoeffs& coeffs, const UniformGrid& k_grid) {
  k_grid.validate();
  double scale = 0.0;
  for (const auto& v : coeffs.values) scale = std::max(scale, std::abs(v));
  if (!coeffs.is_hermitian(1e-12 * std::max(scale, 1.0))) throw std::invalid_argument("eta_to_density: coefficients not hermitian");
  const int m_max = coeffs.max_lag();
  const double s = coeffs.spacing;
  EmpiricalDensity out;
  out.grid = k_grid;
  out.values.resize(k_grid.size);
  constexpr std::size_t kChunk = 64;
  parallel_for_chunks(chunk_count(k_grid.size, kChunk), [&](std::size_t c) {
    const auto [b, e] = chunk_range(c, k_grid.size, kChunk);
    for (std::size_t i = b; i < e; ++i) {
      const double k = k_grid[i];
      double acc = coeffs.at(0).real();
      for (int m = 1; m <= m_max; ++m) {
        const double fejer = 1.0 - static_cast<double>(m) / (m_max + 1.0);
        acc += 2.0 * fejer * (coeffs.at(m) * unit_phase(k * m * s)).real();
      }
      out.values[i] = acc / s;
    }
  });
  return out;
}

double wiener_sigma(const AutocorrCoeffs& coeffs, int n) {
  if (n < 0 || n > coeffs.max_lag()) throw std::invalid_argument("wiener_sigma: N exceeds available lags");
  double s = 0.0;
  for (int m = -n; m <= n; ++m) s += std::norm(coeffs.at(m));
  return s;
}

AtomEstimate estimate_atom(const WeightedComb& comb, double k, double r_small) {
  if (!(r_small < comb.window_radius)) throw std::invalid_argument("estimate_atom: small window must be inside the comb window");
  const UniformGrid g{k, 1.0, 1};
  const auto small = comb.restricted(r_small);
  AtomEstimate a{};
  a.value_small = small.empty() ? 0.0 : periodogram(small, g, PeriodogramMethod::Direct).values[0];
  a.value_large = periodogram(comb, g, PeriodogramMethod::Direct).values[0];
  a.ratio = a.value_small > 0.0 ? a.value_large / a.value_small : INFINITY;
  a.intensity = (a.value_large - a.value_small) / (comb.volume() - small.volume());
  a.is_atom = a.ratio > kAtomRatioThreshold;
  return a;
}

EmpiricalDensity spectrum_estimate(const WeightedComb& comb, double kmin, double kmax, double bandwidth,
                                   bool remove_peak) {
  if (comb.empty()) throw std::invalid_argument("spectrum_estimate: empty comb");
  if (!(kmax > kmin)) throw std::invalid_argument("spectrum_estimate: need kmin < kmax");
  double step;
  if (const auto fit = detect_lattice(comb.positions)) {
    const double extent = comb.positions.back() - comb.positions.front() + fit->spacing;
    double m = 1.0;
    while (m * fit->spacing < 2.0 * extent) m *= 2.0;
    step = 1.0 / (fit->spacing * m);
  } else {
    step = 1.0 / (2.0 * comb.volume());
  }
  const double first = std::floor(kmin / step) * step;
  const auto count = static_cast<std::size_t>(std::ceil((kmax - first) / step)) + 1;
  const UniformGrid g{first, step, count};
  auto p = periodogram(comb, g);
  if (remove_peak) p = remove_mean_peak(p, comb);
  return bandwidth > 0.0 ? smooth(p, bandwidth) : p;
}

EmpiricalDensity decimate(const EmpiricalDensity& d, std::size_t max_points) {
  if (max_points == 0) throw std::invalid_argument("decimate: need at least one point");
  const std::size_t stride = std::max<std::size_t>(1, (d.values.size() + max_points - 1) / max_points);
  EmpiricalDensity out;
  out.bandwidth = d.bandwidth;
  out.grid = {d.grid.start, d.grid.step * static_cast<double>(stride), (d.values.size() + stride - 1) / stride};
  out.values.resize(out.grid.size);
  for (std::size_t i = 0; i < out.grid.size; ++i) out.values[i] = d.values[i * stride];
  return out;
}

double l1_distance(const EmpiricalDensity& a, const EmpiricalDensity& b, double lo, double hi) {
  if (a.grid.size != b.grid.size || a.grid.start != b.grid.start || a.grid.step != b.grid.step)
    throw std::invalid_argument("l1_distance: grids differ");
  double s = 0.0;
  for (std::size_t i = 0; i < a.values.size(); ++i) {
    const double k = a.grid[i];
    if (k >= lo && k <= hi) s += std::abs(a.values[i] - b.values[i]);
  }
  return s * a.grid.step;
}

}  // namespace dlab
