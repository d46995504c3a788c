#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "dlab/comb.hpp"
#include "dlab/parallel.hpp"
#include "dlab/stochastic.hpp"
#include "dlab/substitution.hpp"

using namespace dlab;
using std::numbers::pi;

TEST_CASE("random: seeded streams are reproducible and split") {
  RandomSource a(42), b(42), c(43);
  const double x = a.uniform();
  CHECK(x == b.uniform());
  CHECK(x != c.uniform());
  const auto s1 = a.split(3), s2 = b.split(3), s3 = a.split(4);
  RandomSource t1 = s1, t2 = s2, t3 = s3;
  CHECK(t1.uniform() == t2.uniform());
  CHECK(t1.uniform() != t3.uniform());
  double mean = 0.0, var = 0.0;
  RandomSource n(1);
  for (int i = 0; i < 100000; ++i) {
    const double z = n.normal();
    mean += z / 1e5;
    var += z * z / 1e5;
  }
  CHECK(std::abs(mean) < 0.02);
  CHECK(var == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("bernoulli_comb") {
  RandomSource rng(1);
  for (int v : bernoulli_comb(1.0, 100, rng).values) CHECK(v == 1);
  for (int v : bernoulli_comb(0.0, 100, rng).values) CHECK(v == -1);
  const std::int64_t n = 1 << 17;
  const auto s = bernoulli_comb(0.5, n, rng);
  CHECK(s.size() == static_cast<std::size_t>(2 * n + 1));
  CHECK(s.first_index == -n);
  const double mean = std::accumulate(s.values.begin(), s.values.end(), 0.0) / static_cast<double>(s.size());
  CHECK(std::abs(mean) <= 4.0 / std::sqrt(2.0 * n));
  CHECK_THROWS_AS(bernoulli_comb(1.5, 10, rng), std::invalid_argument);
  CHECK_THROWS_AS(bernoulli_comb(0.5, -1, rng), std::invalid_argument);
}

TEST_CASE("bernoulli_analytic") {
  const UniformGrid g{0.0, 0.01, 101};
  const auto fair = bernoulli_analytic(0.5, g);
  CHECK(fair.atoms.empty());
  for (double v : fair.ac_density.values) CHECK(v == 1.0);
  const auto det = bernoulli_analytic(1.0, g);
  REQUIRE(det.atoms.size() == 2);
  CHECK(det.atoms[0].position == 0.0);
  CHECK(det.atoms[1].position == 1.0);
  CHECK(det.atoms[0].intensity == 1.0);
  for (double v : det.ac_density.values) CHECK(v == 0.0);
  const auto q = bernoulli_analytic(0.75, g);
  CHECK(q.atoms[0].intensity == doctest::Approx(0.25));
  CHECK(q.ac_density.values[37] == doctest::Approx(0.75));
  CHECK_NOTHROW(q.validate());
}

TEST_CASE("entropy") {
  CHECK(entropy(0.5) == doctest::Approx(std::log(2.0)).epsilon(1e-15));
  CHECK(entropy(0.0) == 0.0);
  CHECK(entropy(1.0) == 0.0);
  CHECK(entropy(0.25) == doctest::Approx(std::log(4.0) - 0.75 * std::log(3.0)).epsilon(1e-14));
  CHECK(entropy(0.25) == doctest::Approx(0.5623).epsilon(1e-4));
  CHECK_THROWS_AS(entropy(-0.1), std::invalid_argument);
}

TEST_CASE("bernoullise") {
  RandomSource rng(2);
  const auto w = rs_sequence(1000);
  CHECK(bernoullise(w, 1.0, rng).values == w.values);
  const auto neg = bernoullise(w, 0.0, rng);
  for (std::size_t i = 0; i < w.size(); ++i) CHECK(neg.values[i] == -w.values[i]);
  for (double p : {0.0, 0.3, 0.7, 1.0}) {
    const auto v = bernoullise(rs_sequence(1 << 17), p, rng);
    const auto c = autocorr_lattice(v, 32);
    double worst = 0.0;
    for (int m = 1; m <= 32; ++m) worst = std::max(worst, std::abs(c.at(m)));
    CHECK(worst <= 0.02);
  }
}

TEST_CASE("dimer_sample: structure") {
  RandomSource rng(3);
  for (int rep = 0; rep < 20; ++rep) {
    const auto d = dimer_sample(500, rng);
    CHECK_NOTHROW(d.validate());
    const auto& s = d.sequence;
    for (std::int64_t n = s.first_index; n + 1 < s.first_index + static_cast<std::int64_t>(s.size()); ++n) {
      const auto r = ((n - d.offset) % 2 + 2) % 2;
      if (r == 0) CHECK(s.at(n) * s.at(n + 1) == -1);
    }
    for (auto n : d.equal_neighbours()) CHECK(((n - d.offset - 1) % 2 + 2) % 2 == 0);
  }
  DimerWord bad{SignedSequence{0, {1, 1, -1, 1}}, 0};
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("dimer_sample: autocorrelation") {
  RandomSource rng(4);
  const auto d = dimer_sample(1 << 17, rng);
  const auto c = autocorr_lattice(d.sequence, 32);
  CHECK(c.at(0).real() == 1.0);
  CHECK(std::abs(c.at(1).real() + 0.5) <= 0.02);
  CHECK(std::abs(c.at(-1).real() + 0.5) <= 0.02);
  for (int m = 2; m <= 32; ++m) CHECK(std::abs(c.at(m)) <= 0.02);
}

TEST_CASE("dimer_analytic") {
  const UniformGrid g{0.0, 0.125, 9};
  const auto bal = dimer_analytic(1.0, -1.0, g);
  CHECK(bal.atoms.empty());
  for (std::size_t i = 0; i < g.size; ++i) CHECK(bal.ac_density.values[i] == doctest::Approx(1.0 - std::cos(2 * pi * g[i])));
  CHECK(bal.ac_density.values[4] == doctest::Approx(2.0));
  const auto same = dimer_analytic(1.0, 1.0, g);
  REQUIRE(same.atoms.size() == 2);
  CHECK(same.atoms[0].intensity == doctest::Approx(1.0));
  for (double v : same.ac_density.values) CHECK(v == doctest::Approx(0.0));
}

TEST_CASE("dimer_factor") {
  RandomSource rng(5);
  const auto d = dimer_sample(1 << 17, rng);
  DimerWord flipped = d;
  for (auto& v : flipped.sequence.values) v = -v;
  const auto f = dimer_factor(d);
  CHECK(f.values == dimer_factor(flipped).values);
  CHECK(f.size() == d.sequence.size() - 1);
  for (std::int64_t n = f.first_index; n < f.first_index + static_cast<std::int64_t>(f.size()); ++n)
    if (((n - d.offset) % 2 + 2) % 2 == 0) CHECK(f.at(n) == 1);
  auto odd = f;
  odd.values.pop_back();
  const auto c = autocorr_lattice(odd, 16);
  CHECK(c.at(0).real() == 1.0);
  for (int m = 1; m <= 16; ++m) CHECK(std::abs(c.at(m).real() - (m % 2 == 0 ? 0.5 : 0.0)) <= 0.02);
}

TEST_CASE("factor_analytic") {
  const auto f = factor_analytic(UniformGrid::half_open(0.0, 1.0, 1000));
  bool half = false;
  for (const auto& a : f.atoms) {
    CHECK(a.intensity == doctest::Approx(0.25));
    half = half || a.position == 0.5;
  }
  CHECK(half);
  for (double v : f.ac_density.values) CHECK(v == 0.5);
  CHECK(f.ac_density.integral() == doctest::Approx(0.5));
}

TEST_CASE("Ledrappier patches") {
  const std::size_t n = 512;
  const auto ones = ledrappier_from_row(std::vector<int>(2 * n - 1, 1));
  CHECK(std::all_of(ones.values.begin(), ones.values.end(), [](int v) { return v == 1; }));
  CHECK_THROWS_AS(ledrappier_from_row(std::vector<int>(4, 1)), std::invalid_argument);

  RandomSource rng(6);
  const auto p = ledrappier_sample(n, rng);
  CHECK(p.constraint_violations() == 0);
  CHECK(ledrappier_three_point(p) == 1.0);
  RandomSource control_rng(7);
  const auto iid = iid_patch(n, control_rng);
  CHECK(std::abs(ledrappier_three_point(iid)) <= 0.02);
  CHECK(iid.constraint_violations() > 0);
  for (bool rows : {true, false}) {
    const auto a = patch_autocorr(p, 16, rows);
    const auto b = patch_autocorr(iid, 16, rows);
    CHECK(a[0] == 1.0);
    for (int m = 1; m <= 16; ++m) {
      CHECK(std::abs(a[static_cast<std::size_t>(m)]) <= 0.05);
      CHECK(std::abs(b[static_cast<std::size_t>(m)]) <= 0.05);
    }
  }
}

TEST_CASE("GUE: calibration and level repulsion") {
  RandomSource rng(8);
  const std::size_t n = 200;
  const auto raw = gue_eigenvalues(n, rng);
  CHECK(std::is_sorted(raw.begin(), raw.end()));
  CHECK(std::max(-raw.front(), raw.back()) == doctest::Approx(gue_radius(n)).epsilon(0.02));

  const auto ens = gue_ensemble(n, 200, rng);
  double points = 0.0, vol = 0.0;
  std::size_t close = 0, gaps = 0;
  bool simple = true;
  for (const auto& s : ens) {
    CHECK_NOTHROW(s.validate());
    points += static_cast<double>(s.size());
    vol += s.volume();
    for (std::size_t i = 1; i < s.size(); ++i) {
      const double gap = s.positions[i] - s.positions[i - 1];
      simple = simple && gap > 0.0;
      close += gap < 0.05;
      ++gaps;
    }
  }
  CHECK(simple);
  CHECK(points / vol == doctest::Approx(1.0).epsilon(0.05));
  CHECK(static_cast<double>(close) / static_cast<double>(gaps) < 1.0 - std::exp(-0.05));

  // dip of the pair correlation near 0
  double near = 0.0, far = 0.0;
  for (const auto& s : ens) {
    const auto a = autocorr_pointset(s, 3.0, 0.25);
    near += a.density.integral(0.0, 0.3);
    far += a.density.integral(2.0, 2.6);
  }
  CHECK(near < 0.5 * far);

  CHECK_THROWS_AS(gue_eigenvalue_points(20, rng), std::invalid_argument);
}

TEST_CASE("GUE: diffraction density") {
  RandomSource rng(9);
  const auto ens = gue_ensemble(200, 200, rng);
  const double step = 1.0 / (2.0 * ens.front().volume());
  const UniformGrid g{0.0, step, static_cast<std::size_t>(2.5 / step)};
  const auto raw = gue_diffraction_empirical(ens, g);
  CHECK(raw.integral() >= 0.0);
  const auto h = smooth(raw, 0.1);
  auto mean_on = [&](double a, double b) { return h.integral(a, b) / (b - a); };
  CHECK(mean_on(0.1, 0.2) < 0.3);
  CHECK(mean_on(0.45, 0.55) == doctest::Approx(0.5).epsilon(0.2));
  CHECK(mean_on(1.2, 2.2) == doctest::Approx(1.0).epsilon(0.05));
  CHECK(gue_target(0.3) == 0.3);
  CHECK(gue_target(-0.3) == 0.3);
  CHECK(gue_target(1.7) == 1.0);
  const std::vector<WeightedComb> few(ens.begin(), ens.begin() + 10);
  CHECK_THROWS_AS(gue_diffraction_empirical(few, g), std::invalid_argument);
}

TEST_CASE("GUE ensemble is thread-count independent") {
  RandomSource rng(10);
  set_thread_count(1);
  const auto a = gue_ensemble(60, 8, rng);
  set_thread_count(4);
  const auto b = gue_ensemble(60, 8, rng);
  set_thread_count(1);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i].positions == b[i].positions);
}
