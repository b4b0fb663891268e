#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace stylebasis {

/// Unnormalized 1-D complex DFT of arbitrary length. Power-of-two lengths use
/// an iterative radix-2 kernel; any other length is mapped onto a radix-2
/// convolution with Bluestein's chirp-z identity.
class FftPlan {
 public:
  explicit FftPlan(std::size_t n);

  std::size_t size() const noexcept { return n_; }

  /// X[k] = sum_j x[j] exp(-2 pi i jk / n)
  void forward(std::span<std::complex<double>> data) const;
  /// x[j] = sum_k X[k] exp(+2 pi i jk / n); no 1/n factor.
  void inverse(std::span<std::complex<double>> data) const;

 private:
  void radix2(std::span<std::complex<double>> data, bool inverse) const;
  void bluestein(std::span<std::complex<double>> data) const;

  std::size_t n_;
  bool pow2_;
  std::vector<std::complex<double>> twiddles_;  // radix-2 roots for length n_ (or m_)
  // Bluestein state
  std::size_t m_ = 0;
  std::vector<std::complex<double>> chirp_;
  std::vector<std::complex<double>> chirp_filter_fft_;
};

}  // namespace stylebasis
