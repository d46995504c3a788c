#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <string>

#include "dlab/comb.hpp"
#include "dlab/io.hpp"
#include "dlab/substitution.hpp"

using namespace dlab;

TEST_CASE("substitute: Thue-Morse, period doubling, identity") {
  CHECK(substitute(SubstitutionRule::thue_morse(), "+", 3) == "+--+-++-");
  CHECK(substitute(SubstitutionRule::period_doubling(), "a", 2) == "abaa");
  CHECK(substitute(SubstitutionRule::fibonacci(), "ab", 0) == "ab");
  CHECK_THROWS_AS(substitute(SubstitutionRule::fibonacci(), "x", 1), std::invalid_argument);
  CHECK_THROWS_AS(substitute(SubstitutionRule::fibonacci(), "a", -1), std::invalid_argument);
  SubstitutionRule leaky{{{'a', "ax"}}};
  CHECK_THROWS_AS(leaky.validate(), std::invalid_argument);
  SubstitutionRule empty_image{{{'a', ""}}};
  CHECK_THROWS_AS(empty_image.validate(), std::invalid_argument);
}

TEST_CASE("substitution matrix and primitivity") {
  const auto m = SubstitutionRule::fibonacci().matrix();
  CHECK(m == std::vector<std::vector<long long>>{{1, 1}, {1, 0}});
  CHECK(SubstitutionRule::thue_morse().is_primitive());
  CHECK(SubstitutionRule::period_doubling().is_primitive());
  CHECK(SubstitutionRule::fibonacci().is_primitive());
  CHECK(SubstitutionRule::rudin_shapiro4().is_primitive());
  CHECK_FALSE(SubstitutionRule{{{'a', "a"}, {'b', "b"}}}.is_primitive());
  CHECK_FALSE(SubstitutionRule{{{'a', "ab"}, {'b', "b"}}}.is_primitive());
}

TEST_CASE("tm_value") {
  CHECK(tm_value(0) == 1);
  CHECK(tm_value(3) == 1);
  CHECK(tm_value(7) == -1);
  for (std::uint64_t i = 0; i < 5000; ++i) {
    CHECK(tm_value(2 * i) == tm_value(i));
    CHECK(tm_value(2 * i + 1) == -tm_value(i));
  }
  const auto word = substitute(SubstitutionRule::thue_morse(), "+", 16);
  const auto s = to_signed(word, {{'+', 1}, {'-', -1}});
  bool agree = true;
  for (std::size_t i = 0; i < word.size(); ++i) agree = agree && s.values[i] == tm_value(i);
  CHECK(agree);
  CHECK_THROWS_AS(to_signed("+x", {{'+', 1}}), std::invalid_argument);
}

TEST_CASE("tm_two_sided") {
  CHECK(tm_two_sided(-1) == 1);
  CHECK(tm_two_sided(0) == 1);
  CHECK(tm_two_sided(-4) == tm_value(3));
  for (std::int64_t i = 0; i < 100; ++i) CHECK(tm_two_sided(i) == tm_value(static_cast<std::uint64_t>(i)));
  const auto s = tm_sequence(10);
  CHECK(s.first_index == -10);
  CHECK(s.size() == 21);
  CHECK(s.at(-1) == 1);
}

TEST_CASE("tm_eta: exact values") {
  TmEta eta;
  CHECK(eta(0) == Rational(1));
  CHECK(eta(1) == Rational(-1, 3));
  CHECK(eta(-1) == Rational(-1, 3));
  CHECK(eta(2) == Rational(-1, 3));
  CHECK(eta(3) == Rational(1, 3));
  CHECK(eta(5) == Rational(0));
  CHECK(eta.sigma(1) == Rational(11, 9));
}

TEST_CASE("tm_eta: recursion vs direct average over 2^16 symbols") {
  TmEta eta;
  const auto c = autocorr_lattice(tm_sequence(1 << 16), 64);
  double worst = 0.0;
  for (int m = -64; m <= 64; ++m) worst = std::max(worst, std::abs(c.at(m).real() - eta.value(m)));
  CHECK(worst <= 5e-3);
}

TEST_CASE("tm_eta: Wiener inequality in exact arithmetic") {
  TmEta eta;
  bool holds = true;
  for (std::int64_t n = 1; n <= 1 << 10; ++n) holds = holds && eta.sigma(4 * n) * 2 <= eta.sigma(2 * n) * 3;
  CHECK(holds);
  const double ratio = static_cast<double>(eta.sigma(1 << 10)) / (1 << 10);
  CHECK(ratio <= 0.02);
}

TEST_CASE("rs_value") {
  CHECK(rs_value(0) == 1);
  CHECK(rs_value(-1) == -1);
  CHECK(rs_value(1) == 1);
  CHECK(rs_value(2) == 1);
  CHECK(rs_value(3) == -1);
  // four-letter route a -> ac, b -> dc, c -> ab, d -> db; a, c -> 1 and b, d -> -1
  const auto word = substitute(SubstitutionRule::rudin_shapiro4(), "a", 12);
  REQUIRE(word.size() == 1 << 12);
  const auto s = to_signed(word, {{'a', 1}, {'b', -1}, {'c', 1}, {'d', -1}});
  bool agree = true;
  for (std::int64_t i = 0; i < 1 << 12; ++i) agree = agree && rs_value(i) == s.values[static_cast<std::size_t>(i)];
  CHECK(agree);
  // Euclidean division for negative arguments: w(4n + l) with n = -1
  CHECK(rs_value(-4) == rs_value(-1));
  CHECK(rs_value(-3) == rs_value(-1));
  CHECK(rs_value(-2) == -rs_value(-1));  // (-1)^(-1+2) w(-1)
  CHECK(rs_value(-5) == -rs_value(-2));  // -5 = 4(-2) + 3
}

TEST_CASE("rs_eta_theta: exact delta") {
  RsEtaTheta rs;
  CHECK(rs(0) == std::pair<Rational, Rational>{1, 0});
  CHECK(rs(2) == std::pair<Rational, Rational>{0, 0});
  bool exact = true;
  for (int m = -512; m <= 512; ++m) {
    const auto [e, t] = rs(m);
    exact = exact && e == Rational(m == 0 ? 1 : 0) && t == 0;
  }
  CHECK(exact);
}

TEST_CASE("rs: empirical autocorrelation is a delta") {
  const auto c = autocorr_lattice(rs_sequence(1 << 17), 32);
  for (int m = 1; m <= 32; ++m) CHECK(std::abs(c.at(m)) <= 0.02);
  CHECK(c.at(0).real() == 1.0);
}

TEST_CASE("pd_block_map: two-to-one factor of Thue-Morse") {
  CHECK(pd_block_map(SignedSequence{0, {1, -1, -1, 1}}) == "aba");
  SignedSequence w = tm_sequence(50);
  SignedSequence neg = w;
  for (auto& v : neg.values) v = -v;
  CHECK(pd_block_map(w) == pd_block_map(neg));
  const std::size_t n = 1 << 14;
  const auto tm = to_signed(substitute(SubstitutionRule::thue_morse(), "+", 14), {{'+', 1}, {'-', -1}});
  const auto pd = substitute(SubstitutionRule::period_doubling(), "a", 14);
  CHECK(pd_block_map(tm) == pd.substr(0, n - 1));
  CHECK_THROWS_AS(pd_block_map(SignedSequence{0, {1}}), std::invalid_argument);
}

TEST_CASE("fibonacci_chain") {
  const auto c = fibonacci_chain(3);
  CHECK(c.interval_types == "abaab");
  const double t = kTau;
  const std::vector<double> want{0.0, t, t + 1.0, 2 * t + 1.0, 3 * t + 1.0};
  REQUIRE(c.left_endpoints.size() == want.size());
  for (std::size_t i = 0; i < want.size(); ++i) CHECK(c.left_endpoints[i] == doctest::Approx(want[i]).epsilon(1e-15));
  CHECK(c.length == doctest::Approx(3 * t + 2.0));
  CHECK_NOTHROW(c.validate());

  // F_{n+2} points after n steps
  std::size_t f0 = 1, f1 = 2;
  for (int n = 1; n <= 20; ++n) {
    CHECK(fibonacci_chain(n).left_endpoints.size() == f1);
    const std::size_t f2 = f0 + f1;
    f0 = f1;
    f1 = f2;
  }
  const auto big = fibonacci_chain(25);
  const auto longs = static_cast<double>(std::count(big.interval_types.begin(), big.interval_types.end(), 'a'));
  const double shorts = static_cast<double>(big.interval_types.size()) - longs;
  CHECK(longs / shorts == doctest::Approx(kTau).epsilon(1e-9));

  auto broken = c;
  broken.left_endpoints[2] += 0.1;
  CHECK_THROWS_AS(broken.validate(), std::invalid_argument);
  CHECK_THROWS_AS(fibonacci_chain(0), std::invalid_argument);

  const auto comb = c.centred_comb();
  CHECK(comb.window_radius == doctest::Approx(0.5 * c.length));
  CHECK_NOTHROW(comb.validate());
}

TEST_CASE("fibonacci_intensity: central peak and sinc envelope") {
  const auto p0 = fibonacci_intensity(0, 0);
  CHECK(p0.k == 0.0);
  CHECK(std::abs(p0.intensity - (kTau + 1.0) / 5.0) < 1e-12);
  CHECK(std::abs(p0.intensity - std::pow(kTau / std::sqrt(5.0), 2)) < 1e-12);
  for (int a = -30; a <= 30; ++a)
    for (int b = -30; b <= 30; ++b) {
      const auto p = fibonacci_intensity(a, b);
      CHECK(p.intensity <= p0.intensity + 1e-15);
      const double kc = (a + b * (1.0 - kTau)) / (-std::sqrt(5.0));
      if (std::abs(kc) > 1.0)
        CHECK(p.intensity <= p0.intensity / std::pow(std::numbers::pi * kTau * kc, 2) * (1.0 + 1e-12));
    }
}

TEST_CASE("fibonacci: perfect-chain peaks by window scaling") {
  const auto chain = fibonacci_chain(22);  // F_24 points
  REQUIRE(chain.left_endpoints.size() == 46368);
  const auto comb = chain.centred_comb();
  const auto central = estimate_atom(comb, 0.0, 0.5 * comb.window_radius);
  CHECK(central.intensity == doctest::Approx((kTau + 1.0) / 5.0).epsilon(0.05));
  for (auto [a, b] : {std::pair{0, 1}, std::pair{1, 0}, std::pair{1, 1}}) {
    const auto p = fibonacci_intensity(a, b);
    const auto e = estimate_atom(comb, p.k, 0.5 * comb.window_radius);
    CHECK(e.is_atom);
    CHECK(e.intensity == doctest::Approx(p.intensity).epsilon(0.10));
  }
}

TEST_CASE("io: sequence, chain and Bragg tables") {
  std::ostringstream seq, chain, bragg;
  write_sequence_csv(seq, SignedSequence{-1, {1, -1}});
  CHECK(seq.str() == "n,value\n-1,1\n0,-1\n");
  write_chain_csv(chain, fibonacci_chain(1));
  CHECK(chain.str().rfind("endpoint,type\n0,long\n", 0) == 0);
  write_bragg_csv(bragg, {fibonacci_intensity(0, 0)});
  CHECK(bragg.str().rfind("a,b,k,intensity\n0,0,0,", 0) == 0);
}
