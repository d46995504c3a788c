#include "fft.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace dlab::detail {
namespace {

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

class Plan {
 public:
  Plan(std::vector<std::complex<double>>& data, int sign) {
    std::lock_guard lock(planner_mutex());
    auto* p = reinterpret_cast<fftw_complex*>(data.data());
    plan_ = fftw_plan_dft_1d(static_cast<int>(data.size()), p, p, sign, FFTW_ESTIMATE);
    if (!plan_) throw std::runtime_error("fftw: plan creation failed");
  }
  Plan(const Plan&) = delete;
  Plan& operator=(const Plan&) = delete;
  ~Plan() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(plan_);
  }
  void execute() const { fftw_execute(plan_); }

 private:
  fftw_plan plan_;
};

std::vector<std::complex<double>> transform(std::vector<std::complex<double>> data, int sign) {
  if (data.empty()) return data;
  Plan plan(data, sign);
  plan.execute();
  return data;
}

}  // namespace

std::vector<std::complex<double>> fft_forward(std::vector<std::complex<double>> data) {
  return transform(std::move(data), FFTW_FORWARD);
}

std::vector<std::complex<double>> fft_backward(std::vector<std::complex<double>> data) {
  return transform(std::move(data), FFTW_BACKWARD);
}

std::vector<double> convolve_real(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.empty() || b.empty()) return {};
  const std::size_t out = a.size() + b.size() - 1;
  std::size_t n = 1;
  while (n < out) n <<= 1;
  std::vector<std::complex<double>> fa(n), fb(n);
  for (std::size_t i = 0; i < a.size(); ++i) fa[i] = a[i];
  for (std::size_t i = 0; i < b.size(); ++i) fb[i] = b[i];
  fa = fft_forward(std::move(fa));
  fb = fft_forward(std::move(fb));
  for (std::size_t i = 0; i < n; ++i) fa[i] *= fb[i];
  fa = fft_backward(std::move(fa));
  std::vector<double> r(out);
  const double scale = 1.0 / static_cast<double>(n);
  for (std::size_t i = 0; i < out; ++i) r[i] = fa[i].real() * scale;
  return r;
}

std::vector<std::complex<double>> nufft_type1(const double* x, const std::complex<double>* c, std::size_t n,
                                              double k0, double dk, std::size_t count) {
  using std::numbers::pi;
  constexpr int kSpread = 14;  // half-width in fine-grid points; error ~ exp(-2.2 * kSpread)
  const std::size_t centre = count / 2;
  const std::size_t fine = std::max<std::size_t>(2 * count, 2 * kSpread + 2);
  const double mr = static_cast<double>(fine);
  const double tau = kSpread / (2.0 * std::numbers::sqrt2 * pi * mr * mr);
  const double kc = k0 + static_cast<double>(centre) * dk;

  std::vector<std::complex<double>> grid(fine);
  for (std::size_t j = 0; j < n; ++j) {
    const double kx = kc * x[j];
    const double phase = kx - std::floor(kx);
    const std::complex<double> cj = c[j] * std::polar(1.0, -2.0 * pi * phase);
    const double tx = dk * x[j];
    const double t = tx - std::floor(tx);
    const double pos = t * mr;
    const auto l0 = static_cast<long long>(std::floor(pos));
    for (long long l = l0 - kSpread + 1; l <= l0 + kSpread; ++l) {
      const double u = (static_cast<double>(l) - pos) / mr;
      const double g = std::exp(-u * u / (4.0 * tau));
      long long idx = l % static_cast<long long>(fine);
      if (idx < 0) idx += static_cast<long long>(fine);
      grid[static_cast<std::size_t>(idx)] += cj * g;
    }
  }
  grid = fft_forward(std::move(grid));

  std::vector<std::complex<double>> out(count);
  const double norm = std::sqrt(4.0 * pi * tau);
  for (std::size_t m = 0; m < count; ++m) {
    const long long mp = static_cast<long long>(m) - static_cast<long long>(centre);
    const std::size_t q = mp >= 0 ? static_cast<std::size_t>(mp) : static_cast<std::size_t>(mp + static_cast<long long>(fine));
    const double ghat = norm * std::exp(-4.0 * pi * pi * tau * static_cast<double>(mp) * static_cast<double>(mp));
    out[m] = grid[q] / (mr * ghat);
  }
  return out;
}

}  // namespace dlab::detail
