#pragma once

// Deterministic sequences: Thue-Morse, Rudin-Shapiro, period doubling and the
// Fibonacci chain, with exact autocorrelation recursions.

#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "dlab/comb.hpp"

namespace dlab {

using Rational = boost::multiprecision::cpp_rational;

/// Symbol -> image word over a finite alphabet of chars.
struct SubstitutionRule {
  std::map<char, std::string> images;

  void validate() const;
  /// Substitution matrix M[a][b] = number of a's in the image of b, alphabet in map order.
  std::vector<std::vector<long long>> matrix() const;
  /// Some power of the substitution matrix is strictly positive.
  bool is_primitive() const;

  static SubstitutionRule thue_morse();        // '+' -> "+-", '-' -> "-+"
  static SubstitutionRule period_doubling();   // a -> ab, b -> aa
  static SubstitutionRule fibonacci();         // a -> ab, b -> a
  static SubstitutionRule rudin_shapiro4();    // a -> ac, b -> dc, c -> ab, d -> db
};

std::string substitute(const SubstitutionRule& rule, const std::string& seed, int steps);

/// Letter-to-sign reduction, e.g. {'+': 1, '-': -1}.
SignedSequence to_signed(const std::string& word, const std::map<char, int>& signs, std::int64_t first_index = 0);

// --- Thue-Morse ------------------------------------------------------------

/// (-1)^(binary digit sum of i).
int tm_value(std::uint64_t i);
/// Two-sided fixed point with legal seed w(-1) | w(0) = 1 | 1.
int tm_two_sided(std::int64_t i);
/// tm_two_sided on [-n, n].
SignedSequence tm_sequence(std::int64_t n);

/// Exact autocorrelation eta(m) from eta(2m) = eta(m), eta(2m+1) = -(eta(m)+eta(m+1))/2, eta(0) = 1.
class TmEta {
 public:
  Rational operator()(std::int64_t m);
  double value(std::int64_t m) { return static_cast<double>((*this)(m)); }
  /// Exact Sigma(N) = sum_{|m|<=N} eta(m)^2.
  Rational sigma(std::int64_t n);
  AutocorrCoeffs coeffs(int max_lag);

 private:
  std::unordered_map<std::int64_t, Rational> memo_;
  std::vector<Rational> sigma_prefix_;  // Sigma(0..n) computed so far
};

// --- Rudin-Shapiro ---------------------------------------------------------

/// w(-1) = -1, w(0) = 1, w(4n+l) = w(n) (l = 0,1), (-1)^(n+l) w(n) (l = 2,3),
/// with Euclidean division by 4.
int rs_value(std::int64_t n);
SignedSequence rs_sequence(std::int64_t n);

/// Exact solution of the coupled eta/theta recursions with eta(0) = 1, theta(0) = 0.
class RsEtaTheta {
 public:
  RsEtaTheta();
  std::pair<Rational, Rational> operator()(std::int64_t m);

 private:
  Rational eta(std::int64_t m);
  Rational theta(std::int64_t m);
  std::unordered_map<std::int64_t, Rational> eta_memo_;
  std::unordered_map<std::int64_t, Rational> theta_memo_;
};

// --- Period doubling -------------------------------------------------------

/// Sliding block map: 'a' where w(n) != w(n+1), 'b' otherwise.
std::string pd_block_map(const SignedSequence& w);

// --- Fibonacci -------------------------------------------------------------

inline const double kTau = (1.0 + std::sqrt(5.0)) / 2.0;

struct FibonacciChain {
  std::vector<double> left_endpoints;
  std::string interval_types;  // 'a' = long (tau), 'b' = short (1)
  double length = 0.0;         // right end of the last interval

  void validate() const;
  /// Unit-weight comb of the endpoints re-centred on the window [-length/2, length/2].
  WeightedComb centred_comb() const;
};

/// Geometric realization of substitute(fibonacci, "a", steps) from 0.
FibonacciChain fibonacci_chain(int steps);

struct BraggPeak {
  int a;
  int b;
  double k;
  double intensity;
};
/// Peak at k = (a + b tau)/sqrt5 with I = ((tau/sqrt5) sin(pi tau k')/(pi tau k'))^2.
BraggPeak fibonacci_intensity(int a, int b);

}  // namespace dlab
