#include "dlab/stochastic.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "dlab/parallel.hpp"

namespace dlab {

using std::numbers::pi;

namespace {

void check_probability(double p, const char* what) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument(std::string(what) + ": p must lie in [0, 1]");
}

/// Atoms of the given intensity at the points of (1/denominator) Z inside the grid range.
std::vector<Atom> lattice_atoms(const UniformGrid& g, int denominator, double intensity) {
  std::vector<Atom> atoms;
  if (!(intensity > 0.0)) return atoms;
  const auto lo = static_cast<long long>(std::ceil(g.start * denominator - 1e-9));
  const auto hi = static_cast<long long>(std::floor(g.back() * denominator + 1e-9));
  for (long long j = lo; j <= hi; ++j) atoms.push_back({static_cast<double>(j) / denominator, intensity});
  return atoms;
}

EmpiricalDensity sampled(const UniformGrid& g, auto&& f) {
  g.validate();
  EmpiricalDensity d;
  d.grid = g;
  d.values.resize(g.size);
  for (std::size_t i = 0; i < g.size; ++i) d.values[i] = f(g[i]);
  return d;
}

}  // namespace

// --- Bernoulli -------------------------------------------------------------

SignedSequence bernoulli_comb(double p, std::int64_t n, RandomSource& rng) {
  check_probability(p, "bernoulli_comb");
  if (n < 0) throw std::invalid_argument("bernoulli_comb: N must be nonnegative");
  SignedSequence s;
  s.first_index = -n;
  s.values.resize(static_cast<std::size_t>(2 * n + 1));
  for (auto& v : s.values) v = rng.sign(p);
  return s;
}

SpectralMeasure bernoulli_analytic(double p, const UniformGrid& k_grid) {
  check_probability(p, "bernoulli_analytic");
  const double a = (2.0 * p - 1.0) * (2.0 * p - 1.0);
  const double c = 4.0 * p * (1.0 - p);
  return {lattice_atoms(k_grid, 1, a), sampled(k_grid, [c](double) { return c; }), "bernoulli"};
}

double entropy(double p) {
  check_probability(p, "entropy");
  auto term = [](double q) { return q > 0.0 ? -q * std::log(q) : 0.0; };
  return term(p) + term(1.0 - p);
}

SignedSequence bernoullise(const SignedSequence& w, double p, RandomSource& rng) {
  check_probability(p, "bernoullise");
  SignedSequence out = w;
  for (auto& v : out.values) v *= rng.sign(p);
  return out;
}

// --- Random dimers ---------------------------------------------------------

void DimerWord::validate() const {
  sequence.validate();
  if (offset != 0 && offset != 1) throw std::invalid_argument("DimerWord: offset must be 0 or 1");
  for (std::int64_t n : equal_neighbours()) {
    const std::int64_t r = ((n - offset - 1) % 2 + 2) % 2;
    if (r != 0) throw std::invalid_argument("DimerWord: equal neighbours inside a dimer block");
  }
}

std::vector<std::int64_t> DimerWord::equal_neighbours() const {
  std::vector<std::int64_t> m;
  for (std::size_t i = 0; i + 1 < sequence.size(); ++i)
    if (sequence.values[i] == sequence.values[i + 1]) m.push_back(sequence.first_index + static_cast<std::int64_t>(i));
  return m;
}

DimerWord dimer_sample(std::int64_t n, RandomSource& rng) {
  if (n < 1) throw std::invalid_argument("dimer_sample: need N >= 1");
  DimerWord d;
  d.offset = rng.coin() ? 1 : 0;
  d.sequence.first_index = -n;
  d.sequence.values.resize(static_cast<std::size_t>(2 * n + 1));
  // First block start at or below -N with the chosen parity.
  std::int64_t start = -n - 1;
  if (((start - d.offset) % 2 + 2) % 2 != 0) --start;
  for (std::int64_t s = start; s <= n; s += 2) {
    const int first = rng.coin() ? 1 : -1;
    for (std::int64_t j = 0; j < 2; ++j) {
      const std::int64_t idx = s + j;
      if (idx >= -n && idx <= n) d.sequence.values[static_cast<std::size_t>(idx + n)] = j == 0 ? first : -first;
    }
  }
  return d;
}

SpectralMeasure dimer_analytic(std::complex<double> h_plus, std::complex<double> h_minus, const UniformGrid& k_grid) {
  const double a = std::norm(h_plus + h_minus) / 4.0;
  const double c = std::norm(h_plus - h_minus) / 4.0;
  return {lattice_atoms(k_grid, 1, a), sampled(k_grid, [c](double k) { return c * (1.0 - std::cos(2.0 * pi * k)); }),
          "dimer"};
}

SignedSequence dimer_factor(const DimerWord& w) {
  if (w.sequence.size() < 2) throw std::invalid_argument("dimer_factor: need at least two entries");
  SignedSequence v;
  v.first_index = w.sequence.first_index;
  v.values.resize(w.sequence.size() - 1);
  for (std::size_t i = 0; i + 1 < w.sequence.size(); ++i) v.values[i] = -w.sequence.values[i] * w.sequence.values[i + 1];
  return v;
}

SpectralMeasure factor_analytic(const UniformGrid& k_grid) {
  return {lattice_atoms(k_grid, 2, 0.25), sampled(k_grid, [](double) { return 0.5; }), "dimer-factor"};
}

// --- Ledrappier shift ------------------------------------------------------

std::size_t LedrappierPatch::constraint_violations() const {
  std::size_t bad = 0;
  for (std::size_t r = 0; r + 1 < n; ++r)
    for (std::size_t c = 0; c + 1 < n; ++c)
      if (at(r, c) * at(r, c + 1) * at(r + 1, c) != 1) ++bad;
  return bad;
}

LedrappierPatch ledrappier_from_row(const std::vector<int>& bottom) {
  if (bottom.size() < 3 || bottom.size() % 2 == 0) throw std::invalid_argument("ledrappier_from_row: need a row of length 2N-1, N >= 2");
  const std::size_t n = (bottom.size() + 1) / 2;
  LedrappierPatch p;
  p.n = n;
  p.values.resize(n * n);
  std::vector<int> row = bottom;
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) p.values[r * n + c] = row[c];
    std::vector<int> next(row.size() - 1);
    for (std::size_t c = 0; c + 1 < row.size(); ++c) next[c] = row[c] * row[c + 1];
    row = std::move(next);
  }
  return p;
}

LedrappierPatch ledrappier_sample(std::size_t n, RandomSource& rng) {
  if (n < 2) throw std::invalid_argument("ledrappier_sample: need N >= 2");
  std::vector<int> bottom(2 * n - 1);
  for (auto& v : bottom) v = rng.coin() ? 1 : -1;
  return ledrappier_from_row(bottom);
}

LedrappierPatch iid_patch(std::size_t n, RandomSource& rng) {
  if (n < 2) throw std::invalid_argument("iid_patch: need N >= 2");
  LedrappierPatch p;
  p.n = n;
  p.values.resize(n * n);
  for (auto& v : p.values) v = rng.coin() ? 1 : -1;
  return p;
}

double ledrappier_three_point(const LedrappierPatch& p) {
  if (p.n < 2) throw std::invalid_argument("ledrappier_three_point: patch too small");
  long long s = 0;
  for (std::size_t r = 0; r + 1 < p.n; ++r)
    for (std::size_t c = 0; c + 1 < p.n; ++c) s += p.at(r, c) * p.at(r, c + 1) * p.at(r + 1, c);
  return static_cast<double>(s) / static_cast<double>((p.n - 1) * (p.n - 1));
}

std::vector<double> patch_autocorr(const LedrappierPatch& p, int max_lag, bool along_rows) {
  if (max_lag < 0 || static_cast<std::size_t>(max_lag) >= p.n) throw std::invalid_argument("patch_autocorr: bad max_lag");
  std::vector<double> eta(static_cast<std::size_t>(max_lag) + 1);
  for (int m = 0; m <= max_lag; ++m) {
    long long s = 0;
    const auto mm = static_cast<std::size_t>(m);
    for (std::size_t line = 0; line < p.n; ++line)
      for (std::size_t i = 0; i + mm < p.n; ++i)
        s += along_rows ? p.at(line, i) * p.at(line, i + mm) : p.at(i, line) * p.at(i + mm, line);
    eta[mm] = static_cast<double>(s) / static_cast<double>(p.n * (p.n - mm));
  }
  return eta;
}

// --- GUE -------------------------------------------------------------------

double gue_radius(std::size_t n) { return std::sqrt(2.0 * static_cast<double>(n) / pi); }

std::vector<double> gue_eigenvalues(std::size_t n, RandomSource& rng) {
  // Entry variance E|H_ij|^2 = 1/(2 pi): semicircle radius 2 sqrt(N/(2 pi)) = sqrt(2N/pi).
  const double sigma = 1.0 / std::sqrt(2.0 * pi);
  const auto dim = static_cast<Eigen::Index>(n);
  Eigen::MatrixXcd h(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    h(i, i) = sigma * rng.normal();
    for (Eigen::Index j = i + 1; j < dim; ++j) {
      const double re = rng.normal();
      const double im = rng.normal();
      const std::complex<double> z = std::complex<double>(re, im) * (sigma / std::numbers::sqrt2);
      h(j, i) = z;
      h(i, j) = std::conj(z);
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw std::runtime_error("gue_eigenvalues: eigensolver failed");
  const auto& ev = solver.eigenvalues();
  std::vector<double> out(ev.data(), ev.data() + ev.size());
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

/// N times the semicircle distribution function minus N/2.
double unfold(double lambda, double radius, double n) {
  const double u = std::clamp(lambda / radius, -1.0, 1.0);
  return n * (u * std::sqrt(1.0 - u * u) + std::asin(u)) / pi;
}

}  // namespace

WeightedComb gue_eigenvalue_points(std::size_t n, RandomSource& rng) {
  if (n < 50) throw std::invalid_argument("gue_eigenvalue_points: need N >= 50");
  const double radius = gue_radius(n);
  const double cut = kGueCentralFraction * radius;
  const double nn = static_cast<double>(n);
  std::vector<double> pts;
  for (double l : gue_eigenvalues(n, rng))
    if (std::abs(l) <= cut) pts.push_back(unfold(l, radius, nn));
  return WeightedComb::unit(std::move(pts), unfold(cut, radius, nn));
}

std::vector<WeightedComb> gue_ensemble(std::size_t n, std::size_t samples, const RandomSource& rng) {
  std::vector<WeightedComb> out(samples);
  parallel_for_chunks(samples, [&](std::size_t i) {
    RandomSource r = rng.split(i);
    out[i] = gue_eigenvalue_points(n, r);
  });
  return out;
}

EmpiricalDensity gue_diffraction_empirical(const std::vector<WeightedComb>& samples, const UniformGrid& k_grid) {
  if (samples.size() < 100) throw std::invalid_argument("gue_diffraction_empirical: need at least 100 samples");
  k_grid.validate();
  std::vector<EmpiricalDensity> each(samples.size());
  parallel_for_chunks(samples.size(), [&](std::size_t i) {
    each[i] = remove_mean_peak(periodogram(samples[i], k_grid, PeriodogramMethod::Direct), samples[i]);
  });
  EmpiricalDensity out;
  out.grid = k_grid;
  out.values.assign(k_grid.size, 0.0);
  for (const auto& e : each)
    for (std::size_t j = 0; j < k_grid.size; ++j) out.values[j] += e.values[j];
  for (auto& v : out.values) v /= static_cast<double>(samples.size());
  return out;
}

double gue_target(double k) { return std::min(std::abs(k), 1.0); }

}  // namespace dlab
