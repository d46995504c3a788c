#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "dlab/comb.hpp"
#include "dlab/errors.hpp"
#include "dlab/renewal.hpp"
#include "dlab/substitution.hpp"

using namespace dlab;
using std::numbers::pi;

TEST_CASE("waiting-time laws: moments and Fourier transforms") {
  for (double a : {0.5, 1.0, 2.0, 5.0, 100.0}) {
    const auto d = gamma_family(a);
    CHECK(d->mean() == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(d->variance() == doctest::Approx(1.0 / a));
    CHECK(std::abs(d->fourier(0.0) - 1.0) < 1e-15);
    for (double k : {0.1, 0.5, 1.0, 3.7}) CHECK(std::abs(d->fourier(k)) <= 1.0);
    RandomSource rng(static_cast<std::uint64_t>(a * 10));
    double s = 0.0, s2 = 0.0;
    for (int i = 0; i < 100000; ++i) {
      const double x = d->sample(rng);
      s += x;
      s2 += x * x;
    }
    CHECK(s / 1e5 == doctest::Approx(1.0).epsilon(0.01));
    CHECK(s2 / 1e5 - (s / 1e5) * (s / 1e5) == doctest::Approx(1.0 / a).epsilon(0.05));
    // density integrates to 1
    if (a >= 1.0) {
      double mass = 0.0;
      for (int i = 0; i < 200000; ++i) mass += d->density((i + 0.5) * 1e-4) * 1e-4;
      CHECK(mass == doctest::Approx(1.0).epsilon(1e-4));
    }
  }
  // exponential: rho^(k) = 1/(1 + 2 pi i k)
  const auto e = exponential_law();
  CHECK(std::abs(e->fourier(0.3) - 1.0 / std::complex<double>(1.0, 2 * pi * 0.3)) < 1e-14);
  CHECK_THROWS_AS(gamma_family(0.0), std::invalid_argument);
  CHECK_THROWS_AS(gamma_family(-1.0), std::invalid_argument);
}

TEST_CASE("discrete laws and lattice detection") {
  CHECK_THROWS_AS(DiscreteLaw({{1.0, 0.5}, {2.0, 0.4}}, "x"), std::invalid_argument);
  CHECK_THROWS_AS(DiscreteLaw({{0.0, 1.0}}, "x"), std::invalid_argument);
  CHECK_THROWS_AS(DiscreteLaw({}, "x"), std::invalid_argument);
  const DiscreteLaw two({{1.0, 0.5}, {3.0, 0.5}}, "two");
  CHECK(two.mean() == 2.0);
  CHECK(two.variance() == 1.0);
  CHECK(*two.lattice() == doctest::Approx(1.0));
  CHECK(*coarsest_lattice({0.5, 1.5}) == doctest::Approx(0.5));
  CHECK(*coarsest_lattice({2.0, 3.0}) == doctest::Approx(1.0));
  CHECK(*coarsest_lattice({0.4, 0.6}) == doctest::Approx(0.2));
  CHECK_FALSE(coarsest_lattice({1.0, kTau}).has_value());
  CHECK_FALSE(fib_random_tiling()->lattice().has_value());
  CHECK(*point_mass(2.0)->lattice() == 2.0);
}

TEST_CASE("parse_distribution") {
  CHECK(parse_distribution("exp")->variance() == doctest::Approx(1.0));
  CHECK(parse_distribution("gamma:5")->variance() == doctest::Approx(0.2));
  CHECK(parse_distribution("point")->mean() == 1.0);
  CHECK(parse_distribution("point:2.5")->mean() == 2.5);
  CHECK(parse_distribution("fibrt")->mean() == doctest::Approx((kTau + 2.0) / (kTau + 1.0)));
  for (const char* bad : {"weibull", "gamma", "gamma:x", "gamma:-1", "point:0", ""})
    CHECK_THROWS_AS(parse_distribution(bad), std::invalid_argument);
}

TEST_CASE("Fibonacci random tiling law") {
  const auto d = fib_random_tiling();
  const auto atoms = d->atoms();
  REQUIRE(atoms.size() == 2);
  double p_long = 0.0, p_short = 0.0;
  for (const auto& a : atoms) (a.position > 1.5 ? p_long : p_short) = a.intensity;
  CHECK(p_long == doctest::Approx(1.0 / kTau).epsilon(1e-14));
  CHECK(p_short == doctest::Approx(1.0 / (kTau * kTau)).epsilon(1e-14));
  CHECK(p_long / p_short == doctest::Approx(kTau).epsilon(1e-14));
  RandomSource rng(3);
  const double length = 1e5;
  const auto s = renewal_sample(*d, length, rng);
  const double density = static_cast<double>(s.points.size()) / length;
  CHECK(density * d->mean() == doctest::Approx(1.0).epsilon(0.01));
  const auto diff = renewal_diffraction(*d, UniformGrid{0.0, 0.01, 301});
  REQUIRE(diff.measure.atoms.size() == 1);
  CHECK(diff.measure.atoms[0].position == 0.0);
  CHECK(diff.measure.atoms[0].intensity == doctest::Approx((kTau + 1.0) / 5.0).epsilon(1e-12));
}

TEST_CASE("renewal_sample") {
  RandomSource rng(4);
  const auto lat = renewal_sample(*point_mass(), 100.5, rng);
  REQUIRE(lat.points.size() == 100);
  const double phase = lat.points.front();
  CHECK(phase > 0.0);
  CHECK(phase <= 1.0 + 1e-9);
  for (std::size_t i = 0; i < lat.points.size(); ++i) CHECK(lat.points[i] == doctest::Approx(phase + static_cast<double>(i)));

  const auto e = renewal_sample(*exponential_law(), 1e4, rng);
  CHECK(std::abs(static_cast<double>(e.points.size()) - 1e4) <= 400.0);

  const auto g = renewal_sample(*gamma_family(5.0), 1e5, rng);
  CHECK(static_cast<double>(g.points.size()) / 1e5 == doctest::Approx(1.0).epsilon(0.02));
  CHECK(std::is_sorted(g.points.begin(), g.points.end()));
  CHECK(g.points.front() > 0.0);
  CHECK(g.points.back() <= 1e5);
  CHECK_NOTHROW(g.centred_comb().validate());

  CHECK_THROWS_AS(renewal_sample(*gamma_family(1e-3), 100.0, rng), ModelError);
  CHECK_THROWS_AS(renewal_sample(*exponential_law(), -1.0, rng), std::invalid_argument);
}

TEST_CASE("renewal_sample: first point is stationary after burn-in") {
  // forward recurrence time of Gamma(5): mean E[X^2] / (2 E[X]) = 0.6
  for (double burn : {1000.0, 2000.0}) {
    RandomSource rng(static_cast<std::uint64_t>(burn));
    double s = 0.0;
    const int reps = 4000;
    for (int r = 0; r < reps; ++r) s += renewal_sample(*gamma_family(5.0), 5.0, rng, burn).points.front();
    CHECK(s / reps == doctest::Approx(0.6).epsilon(0.05));
  }
}

TEST_CASE("renewal_measure") {
  const auto lat = renewal_measure(*point_mass(), 12.0);
  CHECK(lat.lattice);
  REQUIRE(lat.atoms.size() == 12);
  for (std::size_t i = 0; i < lat.atoms.size(); ++i) {
    CHECK(lat.atoms[i].position == doctest::Approx(i + 1.0));
    CHECK(lat.atoms[i].intensity == doctest::Approx(1.0).epsilon(1e-12));
  }
  CHECK(lat.residual < 1e-12);

  const auto exp = renewal_measure(*exponential_law(), 10.0);
  CHECK_FALSE(exp.lattice);
  CHECK(exp.converged);
  double worst = 0.0;
  for (std::size_t i = 1; i + 1 < exp.density.values.size(); ++i) worst = std::max(worst, std::abs(exp.density.values[i] - 1.0));
  CHECK(worst <= 1e-6);

  for (double a : {1.0, 2.0, 5.0}) {
    const auto nu = renewal_measure(*gamma_family(a), 10.0);
    CHECK(nu.converged);
    CHECK(nu.residual <= 1e-4);
  }
  const auto two = renewal_measure(DiscreteLaw({{1.0, 0.5}, {2.0, 0.5}}, "12"), 20.0);
  CHECK(two.residual <= 1e-4);

  // nu(0, X] / X -> 1
  double prev = 1.0;
  for (double x : {5.0, 20.0, 60.0}) {
    const auto nu = renewal_measure(*gamma_family(2.0), x, 2e-3);
    const double dev = std::abs(nu.density.integral() / x - 1.0);
    CHECK(dev < prev);
    prev = dev;
  }
  CHECK(prev < 0.01);
  CHECK_THROWS_AS(renewal_measure(*fib_random_tiling(), 10.0), std::invalid_argument);
  CHECK_THROWS_AS(renewal_measure(*exponential_law(), -1.0), std::invalid_argument);
}

TEST_CASE("renewal_autocorr") {
  const auto e = renewal_autocorr(*exponential_law(), 5.0);
  CHECK(e.atom0 == 1.0);
  for (std::size_t i = 0; i < e.density.values.size(); ++i)
    if (std::abs(e.density.grid[i]) > 1e-9) CHECK(e.density.values[i] == doctest::Approx(1.0).epsilon(1e-5));
  const auto p = renewal_autocorr(*point_mass(), 4.0);
  CHECK(p.lattice);
  CHECK(p.atom0 == 1.0);
  REQUIRE(p.atoms.size() == 8);
  for (const auto& a : p.atoms) {
    CHECK(a.position == doctest::Approx(std::round(a.position)));
    CHECK(a.intensity == doctest::Approx(1.0));
  }
}

TEST_CASE("renewal_autocorr vs the pair histogram of a sample") {
  RandomSource rng(7);
  const auto dist = gamma_family(5.0);
  const auto comb = renewal_sample(*dist, 1e5, rng).centred_comb();
  const double x = 2.0, b = 0.2;
  const auto emp = autocorr_pointset(comb, x, b);
  const auto an = renewal_autocorr(*dist, x + b, 1e-3);
  double l1 = 0.0;
  for (std::size_t i = 0; i < emp.density.grid.size; ++i) {
    const double c = emp.density.grid[i];
    const double avg = an.density.integral(c - 0.5 * b, c + 0.5 * b - 1e-9) / b;
    l1 += std::abs(emp.density.values[i] - avg) * b;
  }
  CHECK(l1 <= 0.05);
  CHECK(emp.atom0 == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("renewal_diffraction: closed forms") {
  const UniformGrid g{0.0, 0.05, 61};
  const auto e = renewal_diffraction(*exponential_law(), g);
  REQUIRE(e.measure.atoms.size() == 1);
  CHECK(e.measure.atoms[0].intensity == doctest::Approx(1.0));
  for (double v : e.measure.ac_density.values) CHECK(v == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(e.singular.empty());
  for (double k : {0.1, 0.7, 2.3}) CHECK(std::abs(*renewal_h(*exponential_law(), k)) < 1e-12);

  const auto p = renewal_diffraction(*point_mass(), g);
  CHECK(p.measure.atoms.size() == 4);  // 0, 1, 2, 3
  for (const auto& a : p.measure.atoms) CHECK(a.intensity == doctest::Approx(1.0));
  for (double v : p.measure.ac_density.values) CHECK(std::abs(v) < 1e-12);
  CHECK(*renewal_h(*point_mass(), 0.3) == doctest::Approx(1.0));

  for (double a : {2.0, 5.0}) {
    const auto r = renewal_diffraction(*gamma_family(a), g);
    REQUIRE(r.measure.atoms.size() == 1);
    CHECK(r.measure.atoms[0].position == 0.0);
    CHECK_NOTHROW(r.measure.validate());
  }
  // sharp maxima near the integers for large shape
  const auto sharp = renewal_diffraction(*gamma_family(100.0), UniformGrid{0.5, 0.5, 4});
  CHECK(sharp.measure.ac_density.values[1] > 10.0 * sharp.measure.ac_density.values[0]);
  CHECK(sharp.measure.ac_density.values[3] > 10.0 * sharp.measure.ac_density.values[2]);

  // mean != 1: a two-point law on {1, 3} has lattice 1 and Bragg weight 1/4
  const DiscreteLaw two({{1.0, 0.5}, {3.0, 0.5}}, "two");
  const auto t = renewal_diffraction(two, g);
  for (const auto& a : t.measure.atoms) CHECK(a.intensity == doctest::Approx(0.25));
}

TEST_CASE("closed-form density vs Fourier transform of the renewal measure") {
  const auto g = UniformGrid::closed(0.1, 3.0, 581);
  for (double a : {1.0, 2.0, 5.0}) {
    const auto dist = gamma_family(a);
    const auto nu = renewal_measure(*dist, 10.0);
    const auto th = renewal_density_from_measure(nu, 1.0, g);
    const auto direct = renewal_diffraction(*dist, g).measure.ac_density;
    CHECK(l1_distance(th, direct, 0.1, 3.0) <= 0.02);
  }
}

TEST_CASE("fib_rt_density") {
  const auto d = fib_random_tiling();
  const auto half = fib_rt_density(0.5);
  REQUIRE(half.has_value());
  CHECK(*half > 0.0);
  CHECK(std::isfinite(*half));
  const auto r = renewal_diffraction(*d, UniformGrid{0.005, 0.005, 600});
  std::size_t flagged = 0;
  for (std::size_t i = 0; i < 600; ++i) {
    const double k = 0.005 * static_cast<double>(i + 1);
    const auto v = fib_rt_density(k);
    if (!v) {
      ++flagged;
      continue;
    }
    CHECK(*v >= 0.0);
    CHECK(std::abs(*v - r.measure.ac_density.values[i]) <= 1e-6);
  }
  CHECK(flagged == 0);
  CHECK_FALSE(fib_rt_density(0.0).has_value());
}
