#include "stylebasis/fft.hpp"

#include <bit>
#include <cmath>
#include <numbers>
#include <utility>

#include "stylebasis/error.hpp"

namespace stylebasis {

namespace {

std::vector<std::complex<double>> make_twiddles(std::size_t n) {
  std::vector<std::complex<double>> tw(n / 2);
  for (std::size_t k = 0; k < n / 2; ++k) {
    const double angle = -2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
    tw[k] = {std::cos(angle), std::sin(angle)};
  }
  return tw;
}

}  // namespace

FftPlan::FftPlan(std::size_t n) : n_(n), pow2_(std::has_single_bit(n)) {
  if (n == 0) fail(ErrorKind::InvalidArgument, "FFT length must be >= 1");
  if (pow2_) {
    twiddles_ = make_twiddles(n_);
    return;
  }
  m_ = std::bit_ceil(2 * n_ - 1);
  twiddles_ = make_twiddles(m_);
  chirp_.resize(n_);
  const std::size_t two_n = 2 * n_;
  for (std::size_t k = 0; k < n_; ++k) {
    // k^2 mod 2n keeps the phase argument small for long transforms.
    const std::size_t k2 = (k * k) % two_n;
    const double angle = -std::numbers::pi * static_cast<double>(k2) / static_cast<double>(n_);
    chirp_[k] = {std::cos(angle), std::sin(angle)};
  }
  chirp_filter_fft_.assign(m_, {0.0, 0.0});
  chirp_filter_fft_[0] = std::conj(chirp_[0]);
  for (std::size_t k = 1; k < n_; ++k) {
    chirp_filter_fft_[k] = std::conj(chirp_[k]);
    chirp_filter_fft_[m_ - k] = std::conj(chirp_[k]);
  }
  radix2(chirp_filter_fft_, false);
}

void FftPlan::forward(std::span<std::complex<double>> data) const {
  if (data.size() != n_) fail(ErrorKind::ShapeMismatch, "FFT input length mismatch");
  if (n_ == 1) return;
  if (pow2_) {
    radix2(data, false);
  } else {
    bluestein(data);
  }
}

void FftPlan::inverse(std::span<std::complex<double>> data) const {
  if (data.size() != n_) fail(ErrorKind::ShapeMismatch, "FFT input length mismatch");
  if (n_ == 1) return;
  if (pow2_) {
    radix2(data, true);
    return;
  }
  for (auto& z : data) z = std::conj(z);
  bluestein(data);
  for (auto& z : data) z = std::conj(z);
}

void FftPlan::radix2(std::span<std::complex<double>> data, bool inverse) const {
  const std::size_t n = data.size();
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(data[i], data[j]);
  }
  // twiddles_ was built for the longest length this plan runs (n_ or m_).
  const std::size_t table = twiddles_.size() * 2;
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const std::size_t stride = table / len;
    const std::size_t half = len / 2;
    for (std::size_t start = 0; start < n; start += len) {
      for (std::size_t k = 0; k < half; ++k) {
        auto w = twiddles_[k * stride];
        if (inverse) w = std::conj(w);
        const auto u = data[start + k];
        const auto v = data[start + k + half] * w;
        data[start + k] = u + v;
        data[start + k + half] = u - v;
      }
    }
  }
}

void FftPlan::bluestein(std::span<std::complex<double>> data) const {
  std::vector<std::complex<double>> work(m_, {0.0, 0.0});
  for (std::size_t k = 0; k < n_; ++k) work[k] = data[k] * chirp_[k];
  radix2(work, false);
  for (std::size_t k = 0; k < m_; ++k) work[k] *= chirp_filter_fft_[k];
  radix2(work, true);
  const double scale = 1.0 / static_cast<double>(m_);
  for (std::size_t k = 0; k < n_; ++k) data[k] = work[k] * scale * chirp_[k];
}

}  // namespace stylebasis
