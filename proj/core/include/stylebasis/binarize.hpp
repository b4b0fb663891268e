#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "stylebasis/tensor.hpp"

namespace stylebasis {

struct Threshold {
  enum class Kind { Otsu, Fixed };
  Kind kind = Kind::Otsu;
  double value = 0.5;  // Fixed only

  static Threshold otsu() { return {Kind::Otsu, 0.0}; }
  static Threshold fixed(double v) { return {Kind::Fixed, v}; }
};

/// 0.299 R + 0.587 G + 0.114 B per pixel, row-major.
std::vector<float> luminance(const ImageTensor& img);

/// 256-bin histogram of luminance; bin = round(lum * 255).
std::array<std::size_t, 256> luminance_histogram(const ImageTensor& img);

/// Bin index k maximizing between-class variance for the split
/// {0..k} | {k+1..255}; ties resolve to the middle of the maximal run.
std::size_t otsu_bin(const std::array<std::size_t, 256>& hist);

/// Luminance threshold in [0, 1] between bin k and k + 1.
double otsu_threshold(const ImageTensor& img);

/// 1 where luminance > threshold, else 0, written to all three channels.
/// Throws RangeViolation for a non-unit image.
ImageTensor binarize(const ImageTensor& img, const Threshold& threshold);

}  // namespace stylebasis
