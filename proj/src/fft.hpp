#pragma once

// Thin RAII layer over FFTW. Plans are created under a global lock (the FFTW
// planner is not thread-safe) with FFTW_ESTIMATE, which keeps the chosen
// algorithm, and therefore the output bits, independent of timing.

#include <complex>
#include <cstddef>
#include <vector>

namespace dlab::detail {

/// Forward transform: out[k] = sum_n in[n] exp(-2 pi i k n / size).
std::vector<std::complex<double>> fft_forward(std::vector<std::complex<double>> data);
/// Inverse transform without the 1/size factor.
std::vector<std::complex<double>> fft_backward(std::vector<std::complex<double>> data);

/// Linear convolution of two real sequences (length a.size() + b.size() - 1).
std::vector<double> convolve_real(const std::vector<double>& a, const std::vector<double>& b);

/// Type-1 nonuniform sums S_m = sum_j c_j exp(-2 pi i (k0 + m dk) x_j), m in [0, count),
/// by Gaussian gridding on a twofold oversampled periodic grid.
std::vector<std::complex<double>> nufft_type1(const double* x, const std::complex<double>* c, std::size_t n,
                                              double k0, double dk, std::size_t count);

}  // namespace dlab::detail
