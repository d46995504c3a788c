#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "dlab/substitution.hpp"
#include "dlab/tm_spectrum.hpp"

using namespace dlab;
using std::numbers::pi;

namespace {

double sup_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s = std::max(s, std::abs(a[i] - b[i]));
  return s;
}

}  // namespace

TEST_CASE("DistributionFunction basics") {
  const auto u = DistributionFunction::uniform(8);
  const auto v = u.values();
  REQUIRE(v.size() == 9);
  CHECK(v.front() == 0.0);
  CHECK(v.back() == doctest::Approx(1.0));
  CHECK(v[4] == doctest::Approx(0.5));
  CHECK(u.min_increment() == doctest::Approx(0.125));
  CHECK_NOTHROW(u.validate());
  DistributionFunction neg{{0.6, -0.1, 0.5}};
  CHECK_THROWS_AS(neg.validate(), std::invalid_argument);
  DistributionFunction light{{0.2, 0.2}};
  CHECK_THROWS_AS(light.validate(), std::invalid_argument);
}

TEST_CASE("volterra_step: first iterate in closed form") {
  const std::size_t g = 4096;
  const auto f1 = volterra_step(DistributionFunction::uniform(g));
  const auto v = f1.values();
  const auto grid = f1.grid();
  double worst = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double x = grid[i];
    worst = std::max(worst, std::abs(v[i] - (x - std::sin(2.0 * pi * x) / (2.0 * pi))));
  }
  CHECK(worst < 1e-6);
  CHECK(v[g / 2] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(v.back() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_THROWS_AS(volterra_step(DistributionFunction::uniform(7)), std::invalid_argument);
  CHECK_THROWS_AS(volterra_step(DistributionFunction{}), std::invalid_argument);
}

TEST_CASE("riesz_density") {
  CHECK(riesz_density(1, 0.25) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(riesz_density(0, 0.3) == 1.0);
  for (int n = 1; n <= 8; ++n) CHECK(riesz_density(n, 0.0) == 0.0);
  for (int n = 0; n <= 8; ++n) {
    // midpoint rule is exact for trigonometric polynomials of degree below the node count
    const int m = 1 << 12;
    double s = 0.0;
    for (int i = 0; i < m; ++i) s += riesz_density(n, (i + 0.5) / m) / m;
    CHECK(s == doctest::Approx(1.0).epsilon(1e-8));
  }
  // periodic and even
  CHECK(riesz_density(5, 0.37) == doctest::Approx(riesz_density(5, 1.37)).epsilon(1e-9));
  CHECK(riesz_density(5, 0.37) == doctest::Approx(riesz_density(5, 0.63)).epsilon(1e-9));
}

TEST_CASE("tm_distribution: symmetry, monotonicity, convergence") {
  const std::size_t g = 1 << 12;
  const auto r12 = tm_distribution(12, g);
  const auto& f = r12.function;
  CHECK_NOTHROW(f.validate(1e-12));
  CHECK(f.min_increment() > 0.0);
  CHECK(symmetry_residual(f) <= 1e-8);
  CHECK(r12.cauchy.size() == 12);
  for (int it : {1, 2, 5, 9, 12}) CHECK(tm_distribution(it, g).function.values()[g / 2] == doctest::Approx(0.5).epsilon(1e-12));

  const auto v8 = tm_distribution(8, g).function.values();
  const auto v10 = tm_distribution(10, g).function.values();
  const auto v12 = f.values();
  CHECK(sup_diff(v12, v10) < sup_diff(v10, v8));
  CHECK_THROWS_AS(tm_distribution(0, g), std::invalid_argument);
}

TEST_CASE("tm_distribution: symmetric at every iteration") {
  const std::size_t g = 1 << 12;
  auto f = DistributionFunction::uniform(g);
  for (int it = 1; it <= 14; ++it) {
    f = volterra_step(f);
    CHECK(symmetry_residual(f) <= 1e-8);
    CHECK(f.min_increment() > 0.0);
  }
}

TEST_CASE("cantor_function") {
  CHECK(cantor_function(1.0 / 3.0, 20) == doctest::Approx(0.5).epsilon(1e-6));
  CHECK(cantor_function(0.5, 20) == 0.5);
  CHECK(cantor_function(1.0 / 9.0, 20) == doctest::Approx(0.25).epsilon(1e-6));
  CHECK(cantor_function(0.0, 20) == 0.0);
  CHECK(cantor_function(1.0, 20) == 1.0);
  CHECK(cantor_function(0.75, 30) == doctest::Approx(2.0 / 3.0).epsilon(1e-8));  // 0.75 = 0.202020..._3
  CHECK_THROWS_AS(cantor_function(-0.1, 10), std::invalid_argument);
  CHECK_THROWS_AS(cantor_function(1.1, 10), std::invalid_argument);
  double prev = 0.0;
  for (int i = 0; i <= 1000; ++i) {
    const double v = cantor_function(i / 1000.0, 20);
    CHECK(v >= prev);
    prev = v;
  }
}

TEST_CASE("moments_from_F match the exact autocorrelation") {
  const auto f = tm_distribution(12, 1 << 12).function;
  CHECK(std::abs(moments_from_F(f, 0) - 1.0) < 1e-12);
  CHECK(std::abs(moments_from_F(f, 1) - (-1.0 / 3.0)) <= 0.01);
  CHECK(std::abs(moments_from_F(f, 5)) <= 0.01);
  TmEta eta;
  for (int m = -32; m <= 32; ++m) CHECK(std::abs(moments_from_F(f, m) - eta.value(m)) <= 0.01);
  CHECK_THROWS_AS(moments_from_F(DistributionFunction::uniform(16), 5), std::invalid_argument);
}

TEST_CASE("Volterra iterates differentiate to Riesz products") {
  const std::size_t g = 1 << 14;
  auto f = DistributionFunction::uniform(g);
  for (int n = 0; n <= 6; ++n) {
    if (n > 0) f = volterra_step(f);
    const auto d = derivative(f);
    REQUIRE(d.values.size() == g);
    double l1 = 0.0;
    for (std::size_t i = 0; i < g; ++i) l1 += std::abs(d.values[i] - riesz_density(n, d.grid[i])) * d.grid.step;
    CHECK(l1 <= 1e-3);
  }
}

TEST_CASE("functional relation of the limit") {
  const std::size_t g = 1 << 12;
  const auto f20 = tm_distribution(20, g).function;
  CHECK(functional_relation_residual(f20) <= 1e-3);
  // Lebesgue measure satisfies it as well
  CHECK(functional_relation_residual(DistributionFunction::uniform(g)) < 1e-12);
  // one Volterra step of the uniform law is far from a fixed point
  CHECK(functional_relation_residual(volterra_step(DistributionFunction::uniform(g))) > 1e-3);
}
