#include "dlab/tm_spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "dlab/parallel.hpp"

namespace dlab {

using std::numbers::pi;

std::vector<double> DistributionFunction::values() const {
  std::vector<double> v(masses.size() + 1, 0.0);
  for (std::size_t i = 0; i < masses.size(); ++i) v[i + 1] = v[i] + masses[i];
  return v;
}

double DistributionFunction::min_increment() const {
  return masses.empty() ? 0.0 : *std::min_element(masses.begin(), masses.end());
}

void DistributionFunction::validate(double tol) const {
  if (masses.empty()) throw std::invalid_argument("DistributionFunction: empty grid");
  double total = 0.0;
  for (double m : masses) {
    if (!(m >= 0.0)) throw std::invalid_argument("DistributionFunction: negative or non-finite increment");
    total += m;
  }
  if (std::abs(total - 1.0) > tol) throw std::invalid_argument("DistributionFunction: total mass differs from 1");
}

DistributionFunction DistributionFunction::uniform(std::size_t cells) {
  if (cells == 0) throw std::invalid_argument("DistributionFunction::uniform: need at least one cell");
  return {std::vector<double>(cells, 1.0 / static_cast<double>(cells))};
}

DistributionFunction volterra_step(const DistributionFunction& f) {
  const std::size_t g = f.cells();
  if (g == 0 || g % 2 != 0) throw std::invalid_argument("volterra_step: grid size must be even");
  const double h = f.step();
  // Kernel 1 - cos(pi y) at the midpoints of the 2g cells covering [0, 2].
  DistributionFunction out{std::vector<double>(g)};
  constexpr std::size_t kChunk = 4096;
  parallel_for_chunks(chunk_count(g, kChunk), [&](std::size_t c) {
    const auto [b, e] = chunk_range(c, g, kChunk);
    for (std::size_t i = b; i < e; ++i) {
      double s = 0.0;
      for (std::size_t j = 2 * i; j < 2 * i + 2; ++j) {
        const double y = (static_cast<double>(j) + 0.5) * h;
        s += (1.0 - std::cos(pi * y)) * f.masses[j % g];
      }
      out.masses[i] = 0.5 * s;
    }
  });
  return out;
}

double riesz_density(int n, double x) {
  if (n < 0) throw std::invalid_argument("riesz_density: n must be nonnegative");
  double p = 1.0;
  double freq = 2.0 * pi;
  for (int m = 0; m < n; ++m) {
    // Reduce the argument modulo one period before taking the cosine.
    const double t = freq / (2.0 * pi) * x;
    p *= 1.0 - std::cos(2.0 * pi * (t - std::floor(t)));
    freq *= 2.0;
  }
  return p;
}

TmDistributionResult tm_distribution(int iterations, std::size_t grid_size) {
  if (iterations < 1) throw std::invalid_argument("tm_distribution: need at least one iteration");
  TmDistributionResult r{DistributionFunction::uniform(grid_size), {}};
  auto prev = r.function.values();
  for (int it = 0; it < iterations; ++it) {
    r.function = volterra_step(r.function);
    const auto cur = r.function.values();
    double d = 0.0;
    for (std::size_t i = 0; i < cur.size(); ++i) d = std::max(d, std::abs(cur[i] - prev[i]));
    r.cauchy.push_back(d);
    prev = cur;
  }
  return r;
}

double cantor_function(double x, int depth) {
  if (!(x >= 0.0 && x <= 1.0)) throw std::invalid_argument("cantor_function: x must lie in [0, 1]");
  if (depth < 1) throw std::invalid_argument("cantor_function: depth must be positive");
  if (x == 1.0) return 1.0;
  double value = 0.0;
  double scale = 0.5;
  for (int d = 0; d < depth; ++d) {
    x *= 3.0;
    const double digit = std::floor(x);
    x -= digit;
    if (digit == 1.0) return value + scale;
    if (digit == 2.0) value += scale;
    scale *= 0.5;
  }
  return value;
}

std::complex<double> moments_from_F(const DistributionFunction& f, int m) {
  const std::size_t g = f.cells();
  if (static_cast<std::size_t>(std::abs(m)) * 4 > g) throw std::invalid_argument("moments_from_F: |m| exceeds grid_size / 4");
  std::complex<double> s{};
  for (std::size_t i = 0; i < g; ++i) {
    // m * y reduced modulo 1 before forming the phase.
    const double t = static_cast<double>(m) * (static_cast<double>(i) + 0.5) / static_cast<double>(g);
    s += f.masses[i] * std::polar(1.0, 2.0 * pi * (t - std::floor(t)));
  }
  return s;
}

EmpiricalDensity derivative(const DistributionFunction& f) {
  const double h = f.step();
  EmpiricalDensity d;
  d.grid = {0.5 * h, h, f.cells()};
  d.values.resize(f.cells());
  for (std::size_t i = 0; i < f.cells(); ++i) d.values[i] = f.masses[i] / h;
  return d;
}

double functional_relation_residual(const DistributionFunction& f) {
  const std::size_t g = f.cells();
  if (g % 2 != 0) throw std::invalid_argument("functional_relation_residual: grid size must be even");
  const auto v = f.values();
  const std::size_t half = g / 2;
  double r = 0.0;
  for (std::size_t j = 0; j <= half; ++j) r = std::max(r, std::abs(v[j] + v[j + half] - v[half] - v[2 * j]));
  return r;
}

double symmetry_residual(const DistributionFunction& f) {
  const auto v = f.values();
  double r = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) r = std::max(r, std::abs(v[i] + v[v.size() - 1 - i] - 1.0));
  return r;
}

}  // namespace dlab
