#include "stylebasis/binarize.hpp"

#include <algorithm>
#include <cmath>

#include "stylebasis/error.hpp"

namespace stylebasis {

std::vector<float> luminance(const ImageTensor& img) {
  std::vector<float> lum(img.height() * img.width());
  const auto d = img.data();
  for (std::size_t p = 0; p < lum.size(); ++p) {
    lum[p] = static_cast<float>(0.299 * d[3 * p] + 0.587 * d[3 * p + 1] + 0.114 * d[3 * p + 2]);
  }
  return lum;
}

std::array<std::size_t, 256> luminance_histogram(const ImageTensor& img) {
  std::array<std::size_t, 256> hist{};
  for (float l : luminance(img)) {
    const long bin = std::lround(static_cast<double>(l) * 255.0);
    ++hist[static_cast<std::size_t>(std::clamp(bin, 0L, 255L))];
  }
  return hist;
}

std::size_t otsu_bin(const std::array<std::size_t, 256>& hist) {
  double total = 0.0, sum_all = 0.0;
  for (std::size_t i = 0; i < 256; ++i) {
    total += static_cast<double>(hist[i]);
    sum_all += static_cast<double>(i * hist[i]);
  }
  std::array<double, 256> score{};
  double w0 = 0.0, sum0 = 0.0, best = -1.0;
  for (std::size_t k = 0; k < 256; ++k) {
    w0 += static_cast<double>(hist[k]);
    sum0 += static_cast<double>(k * hist[k]);
    const double w1 = total - w0;
    if (w0 == 0.0 || w1 == 0.0) {
      score[k] = -1.0;
      continue;
    }
    const double d = sum0 / w0 - (sum_all - sum0) / w1;
    score[k] = w0 * w1 * d * d;
    best = std::max(best, score[k]);
  }
  if (best < 0.0) return 127;  // single-valued histogram
  const double tol = best * 1e-12;
  std::size_t first = 256, last = 0;
  for (std::size_t k = 0; k < 256; ++k) {
    if (score[k] >= best - tol) {
      if (first == 256) first = k;
      last = k;
    } else if (first != 256) {
      break;
    }
  }
  return (first + last) / 2;
}

double otsu_threshold(const ImageTensor& img) {
  return (static_cast<double>(otsu_bin(luminance_histogram(img))) + 0.5) / 255.0;
}

ImageTensor binarize(const ImageTensor& img, const Threshold& threshold) {
  if (img.range() != RangeTag::Unit) fail(ErrorKind::RangeViolation, "binarize expects a unit-range image");
  const double t = threshold.kind == Threshold::Kind::Otsu ? otsu_threshold(img) : threshold.value;
  const auto lum = luminance(img);
  std::vector<float> out(img.size());
  for (std::size_t p = 0; p < lum.size(); ++p) {
    const float v = static_cast<double>(lum[p]) > t ? 1.0f : 0.0f;
    out[3 * p] = out[3 * p + 1] = out[3 * p + 2] = v;
  }
  return ImageTensor(img.height(), img.width(), std::move(out), RangeTag::Unit);
}

}  // namespace stylebasis
