#include "dlab/substitution.hpp"

#include <numbers>
#include <stdexcept>

namespace dlab {

// --- Substitution rules ----------------------------------------------------

void SubstitutionRule::validate() const {
  if (images.empty()) throw std::invalid_argument("SubstitutionRule: empty alphabet");
  for (const auto& [sym, img] : images) {
    if (img.empty()) throw std::invalid_argument("SubstitutionRule: empty image");
    for (char c : img)
      if (!images.contains(c)) throw std::invalid_argument("SubstitutionRule: image leaves the alphabet");
  }
}

std::vector<std::vector<long long>> SubstitutionRule::matrix() const {
  std::map<char, std::size_t> index;
  for (const auto& [sym, img] : images) index.emplace(sym, index.size());
  const std::size_t n = index.size();
  std::vector<std::vector<long long>> m(n, std::vector<long long>(n, 0));
  for (const auto& [sym, img] : images)
    for (char c : img) ++m[index.at(c)][index.at(sym)];
  return m;
}

bool SubstitutionRule::is_primitive() const {
  validate();
  const auto m = matrix();
  const std::size_t n = m.size();
  // Boolean powers; Wielandt: primitive iff M^((n-1)^2+1) > 0.
  std::vector<std::vector<bool>> p(n, std::vector<bool>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) p[i][j] = m[i][j] > 0;
  const std::size_t bound = (n - 1) * (n - 1) + 1;
  for (std::size_t step = 1; step <= bound; ++step) {
    bool positive = true;
    for (std::size_t i = 0; i < n && positive; ++i)
      for (std::size_t j = 0; j < n && positive; ++j) positive = p[i][j];
    if (positive) return true;
    std::vector<std::vector<bool>> q(n, std::vector<bool>(n, false));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t k = 0; k < n; ++k)
        if (p[i][k])
          for (std::size_t j = 0; j < n; ++j) q[i][j] = q[i][j] || m[k][j] > 0;
    p = std::move(q);
  }
  return false;
}

SubstitutionRule SubstitutionRule::thue_morse() { return {{{'+', "+-"}, {'-', "-+"}}}; }
SubstitutionRule SubstitutionRule::period_doubling() { return {{{'a', "ab"}, {'b', "aa"}}}; }
SubstitutionRule SubstitutionRule::fibonacci() { return {{{'a', "ab"}, {'b', "a"}}}; }
SubstitutionRule SubstitutionRule::rudin_shapiro4() {
  return {{{'a', "ac"}, {'b', "dc"}, {'c', "ab"}, {'d', "db"}}};
}

std::string substitute(const SubstitutionRule& rule, const std::string& seed, int steps) {
  if (steps < 0) throw std::invalid_argument("substitute: negative step count");
  for (char c : seed)
    if (!rule.images.contains(c)) throw std::invalid_argument("substitute: symbol outside alphabet");
  std::string word = seed;
  for (int s = 0; s < steps; ++s) {
    std::string next;
    std::size_t len = 0;
    for (char c : word) len += rule.images.at(c).size();
    next.reserve(len);
    for (char c : word) next += rule.images.at(c);
    word = std::move(next);
  }
  return word;
}

SignedSequence to_signed(const std::string& word, const std::map<char, int>& signs, std::int64_t first_index) {
  SignedSequence s;
  s.first_index = first_index;
  s.values.reserve(word.size());
  for (char c : word) {
    const auto it = signs.find(c);
    if (it == signs.end()) throw std::invalid_argument("to_signed: no sign for symbol");
    s.values.push_back(it->second);
  }
  s.validate();
  return s;
}

// --- Thue-Morse ------------------------------------------------------------

int tm_value(std::uint64_t i) { return (std::popcount(i) & 1) ? -1 : 1; }

int tm_two_sided(std::int64_t i) {
  return i >= 0 ? tm_value(static_cast<std::uint64_t>(i)) : tm_value(static_cast<std::uint64_t>(-i - 1));
}

SignedSequence tm_sequence(std::int64_t n) {
  SignedSequence s;
  s.first_index = -n;
  s.values.resize(static_cast<std::size_t>(2 * n + 1));
  for (std::int64_t i = -n; i <= n; ++i) s.values[static_cast<std::size_t>(i + n)] = tm_two_sided(i);
  return s;
}

Rational TmEta::operator()(std::int64_t m) {
  if (m < 0) m = -m;
  if (m == 0) return Rational(1);
  if (m == 1) return Rational(-1, 3);  // eta(1) = -(eta(0) + eta(1))/2
  if (const auto it = memo_.find(m); it != memo_.end()) return it->second;
  Rational v;
  if (m % 2 == 0) {
    v = (*this)(m / 2);
  } else {
    const std::int64_t q = m / 2;
    v = -((*this)(q) + (*this)(q + 1)) / 2;
  }
  memo_.emplace(m, v);
  return v;
}

Rational TmEta::sigma(std::int64_t n) {
  if (n < 0) throw std::invalid_argument("TmEta::sigma: n must be nonnegative");
  if (sigma_prefix_.empty()) sigma_prefix_.push_back(Rational(1));
  while (static_cast<std::int64_t>(sigma_prefix_.size()) <= n) {
    const Rational e = (*this)(static_cast<std::int64_t>(sigma_prefix_.size()));
    sigma_prefix_.push_back(sigma_prefix_.back() + 2 * e * e);
  }
  return sigma_prefix_[static_cast<std::size_t>(n)];
}

AutocorrCoeffs TmEta::coeffs(int max_lag) {
  std::vector<cplx> eta(static_cast<std::size_t>(max_lag) + 1);
  for (int m = 0; m <= max_lag; ++m) eta[static_cast<std::size_t>(m)] = value(m);
  return AutocorrCoeffs::from_nonnegative(eta);
}

// --- Rudin-Shapiro ---------------------------------------------------------

namespace {

std::int64_t floor_div4(std::int64_t n) { return n >= 0 ? n / 4 : -((-n + 3) / 4); }
int parity_sign(std::int64_t n) { return (n % 2 == 0) ? 1 : -1; }

}  // namespace

int rs_value(std::int64_t n) {
  int sign = 1;
  while (n != 0 && n != -1) {
    const std::int64_t q = floor_div4(n);
    const std::int64_t l = n - 4 * q;
    if (l >= 2) sign *= parity_sign(q + l);
    n = q;
  }
  return n == 0 ? sign : -sign;
}

SignedSequence rs_sequence(std::int64_t n) {
  SignedSequence s;
  s.first_index = -n;
  s.values.resize(static_cast<std::size_t>(2 * n + 1));
  for (std::int64_t i = -n; i <= n; ++i) s.values[static_cast<std::size_t>(i + n)] = rs_value(i);
  return s;
}

RsEtaTheta::RsEtaTheta() {
  // Initial values, then the three self-referential instances solved in closed form:
  //   theta(1)  = -theta(0)/4 + theta(1)/4   (m = 0 in the 4m+1 relation)
  //   theta(-1) =  theta(-1)/4 + theta(0)/4  (m = -1 in the 4m+3 relation)
  const Rational eta0(1), theta0(0);
  const Rational theta1 = -theta0 / 3;
  const Rational thetam1 = theta0 / 3;
  const Rational eta1 = theta0 / 4 - theta1 / 4;
  const Rational etam1 = thetam1 / 4 + theta0 / 4;
  eta_memo_ = {{0, eta0}, {1, eta1}, {-1, etam1}};
  theta_memo_ = {{0, theta0}, {1, theta1}, {-1, thetam1}};
}

std::pair<Rational, Rational> RsEtaTheta::operator()(std::int64_t m) { return {eta(m), theta(m)}; }

Rational RsEtaTheta::eta(std::int64_t n) {
  if (const auto it = eta_memo_.find(n); it != eta_memo_.end()) return it->second;
  const std::int64_t m = floor_div4(n);
  const std::int64_t l = n - 4 * m;
  const Rational s(parity_sign(m));  // (-1)^m
  Rational v;
  switch (l) {
    case 0:
      v = (1 + s) / 2 * eta(m);
      break;
    case 1:
      v = (1 - s) / 4 * eta(m) + s / 4 * theta(m) - theta(m + 1) / 4;
      break;
    case 2:
      v = 0;
      break;
    default:
      v = (1 + s) / 4 * eta(m + 1) - s / 4 * theta(m) + theta(m + 1) / 4;
      break;
  }
  eta_memo_.emplace(n, v);
  return v;
}

Rational RsEtaTheta::theta(std::int64_t n) {
  if (const auto it = theta_memo_.find(n); it != theta_memo_.end()) return it->second;
  const std::int64_t m = floor_div4(n);
  const std::int64_t l = n - 4 * m;
  const Rational s(parity_sign(m));
  Rational v;
  switch (l) {
    case 0:
      v = 0;
      break;
    case 1:
      v = (1 - s) / 4 * eta(m) - s / 4 * theta(m) + theta(m + 1) / 4;
      break;
    case 2:
      v = s / 2 * theta(m) + theta(m + 1) / 2;
      break;
    default:
      v = -(1 + s) / 4 * eta(m + 1) - s / 4 * theta(m) + theta(m + 1) / 4;
      break;
  }
  theta_memo_.emplace(n, v);
  return v;
}

// --- Period doubling -------------------------------------------------------

std::string pd_block_map(const SignedSequence& w) {
  if (w.size() < 2) throw std::invalid_argument("pd_block_map: need at least two entries");
  std::string out(w.size() - 1, 'b');
  for (std::size_t n = 0; n + 1 < w.size(); ++n)
    if (w.values[n] != w.values[n + 1]) out[n] = 'a';
  return out;
}

// --- Fibonacci -------------------------------------------------------------

void FibonacciChain::validate() const {
  if (left_endpoints.size() != interval_types.size()) throw std::invalid_argument("FibonacciChain: size mismatch");
  if (left_endpoints.empty() || left_endpoints.front() != 0.0) throw std::invalid_argument("FibonacciChain: must start at 0");
  for (std::size_t i = 0; i < left_endpoints.size(); ++i) {
    const double next = i + 1 < left_endpoints.size() ? left_endpoints[i + 1] : length;
    const double gap = next - left_endpoints[i];
    const double want = interval_types[i] == 'a' ? kTau : 1.0;
    if (std::abs(gap - want) > 1e-9 * std::max(1.0, next)) throw std::invalid_argument("FibonacciChain: gap/type mismatch");
  }
}

WeightedComb FibonacciChain::centred_comb() const {
  const double half = 0.5 * length;
  std::vector<double> x(left_endpoints.size());
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = left_endpoints[i] - half;
  return WeightedComb::unit(std::move(x), half);
}

FibonacciChain fibonacci_chain(int steps) {
  if (steps < 1) throw std::invalid_argument("fibonacci_chain: need steps >= 1");
  FibonacciChain c;
  c.interval_types = substitute(SubstitutionRule::fibonacci(), "a", steps);
  c.left_endpoints.reserve(c.interval_types.size());
  // Integer bookkeeping (#long, #short) keeps endpoints free of accumulated rounding.
  long long longs = 0, shorts = 0;
  for (char t : c.interval_types) {
    c.left_endpoints.push_back(static_cast<double>(longs) * kTau + static_cast<double>(shorts));
    (t == 'a' ? longs : shorts) += 1;
  }
  c.length = static_cast<double>(longs) * kTau + static_cast<double>(shorts);
  return c;
}

BraggPeak fibonacci_intensity(int a, int b) {
  const double sqrt5 = std::sqrt(5.0);
  const double k = (a + b * kTau) / sqrt5;
  const double kc = (a + b * (1.0 - kTau)) / (-sqrt5);
  const double amp = kTau / sqrt5;
  const double arg = std::numbers::pi * kTau * kc;
  const double sinc = arg == 0.0 ? 1.0 : std::sin(arg) / arg;
  return {a, b, k, amp * amp * sinc * sinc};
}

}  // namespace dlab
