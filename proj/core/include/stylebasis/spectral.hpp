#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "stylebasis/tensor.hpp"

namespace stylebasis {

enum class SpectrumKind { FFT, DCT };

/// Per-channel 2-D spectrum of a feature map. Coefficients share the
/// FeatureMap layout: index = (u * w + v) * c + ch, where u runs over the
/// height axis and v over the width axis. DCT coefficients are stored with a
/// zero imaginary part.
struct SpectrumRep {
  SpectrumKind kind = SpectrumKind::FFT;
  std::size_t h = 0, w = 0, c = 0;
  std::vector<std::complex<float>> coeffs;
  std::string source_layer;

  std::size_t index(std::size_t u, std::size_t v, std::size_t ch) const noexcept {
    return (u * w + v) * c + ch;
  }
  std::complex<float> at(std::size_t u, std::size_t v, std::size_t ch) const noexcept {
    return coeffs[index(u, v, ch)];
  }
  std::complex<float>& at(std::size_t u, std::size_t v, std::size_t ch) noexcept {
    return coeffs[index(u, v, ch)];
  }
  /// Number of frequency positions (one style basis per position).
  std::size_t basis_count() const noexcept { return h * w; }
};

/// H(u,v) = 1/(hw) sum_{x,y} F(x,y) exp(-2 pi i (ux/h + vy/w)), per channel.
/// H(0,0) is the channel mean.
SpectrumRep fft_forward(const FeatureMap& f);

/// Inverse DFT without a normalization factor. Throws NonNegligibleImaginary
/// if the result carries an imaginary residue above 1e-3; otherwise returns
/// the real part, which equals the inverse of the Hermitian-symmetrized
/// spectrum.
FeatureMap fft_inverse(const SpectrumRep& s);

/// Averages H(u,v) with conj(H(-u,-v)), restoring the symmetry of a real
/// signal's spectrum.
SpectrumRep hermitian_symmetrize(const SpectrumRep& s);

/// Orthonormal DCT-II per channel, c(0) = sqrt(1/N), c(k>0) = sqrt(2/N) with
/// N the length of the axis the index runs over.
SpectrumRep dct_forward(const FeatureMap& f);
FeatureMap dct_inverse(const SpectrumRep& s);

/// Dispatches on s.kind.
FeatureMap spectrum_inverse(const SpectrumRep& s);

struct FrequencyMask {
  enum class Mode {
    Keep,   // selected coefficients scaled, the rest zeroed
    Scale,  // selected coefficients scaled, the rest untouched
  };

  bool keep_dc = false;
  bool keep_rest = false;
  std::set<std::pair<std::size_t, std::size_t>> explicit_ids;
  Mode mode = Mode::Keep;

  static FrequencyMask dc_only() { return {true, false, {}, Mode::Keep}; }
  static FrequencyMask rest_only() { return {false, true, {}, Mode::Keep}; }
  static FrequencyMask all() { return {true, true, {}, Mode::Keep}; }

  bool selects(std::size_t u, std::size_t v) const {
    const bool dc = u == 0 && v == 0;
    return (dc && keep_dc) || (!dc && keep_rest) || explicit_ids.count({u, v}) != 0;
  }
};

/// Throws InvalidArgument for an empty mask and IndexOutOfRange for explicit
/// indices outside h x w.
SpectrumRep apply_mask(const SpectrumRep& s, const FrequencyMask& mask, float scale = 1.0f);

RawTensor to_raw(const SpectrumRep& s);
SpectrumRep spectrum_from_raw(const RawTensor& raw, SpectrumKind kind, std::string layer = {});

}  // namespace stylebasis
