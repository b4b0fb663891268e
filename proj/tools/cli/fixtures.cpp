#include <algorithm>
#include <cmath>

#include "cli/commands.hpp"

namespace stylebasis::cli {

namespace {

void put(ImageTensor& img, std::size_t y, std::size_t x, float r, float g, float b) {
  img.at(y, x, 0) = r;
  img.at(y, x, 1) = g;
  img.at(y, x, 2) = b;
}

}  // namespace

ImageTensor demo_content(std::size_t size) {
  ImageTensor img(size, size);
  const double n = static_cast<double>(std::max<std::size_t>(size - 1, 1));
  for (std::size_t y = 0; y < size; ++y) {
    for (std::size_t x = 0; x < size; ++x) {
      const double t = static_cast<double>(y) / n, s = static_cast<double>(x) / n;
      double r = 0.35 + 0.4 * t, g = 0.55 + 0.2 * t, b = 0.85 - 0.45 * t;
      if (t > 0.7) {  // meadow
        r = 0.3;
        g = 0.6 - 0.2 * (t - 0.7);
        b = 0.25;
      }
      if (std::hypot(t - 0.25, s - 0.72) < 0.14) {  // sun
        r = 0.97;
        g = 0.82;
        b = 0.3;
      }
      if (t >= 0.5 && t <= 0.88 && s >= 0.15 && s <= 0.5) {  // house
        r = 0.62;
        g = 0.3;
        b = 0.22;
        if (t >= 0.62 && t <= 0.74 && s >= 0.25 && s <= 0.36) r = g = b = 0.9;  // window
      }
      if (t >= 0.36 && t < 0.5 && std::abs(s - 0.325) <= (t - 0.36) * 1.25) {  // roof
        r = 0.35;
        g = 0.12;
        b = 0.1;
      }
      put(img, y, x, static_cast<float>(r), static_cast<float>(g), static_cast<float>(b));
    }
  }
  return img;
}

ImageTensor demo_style(std::size_t size) {
  ImageTensor img(size, size);
  for (std::size_t y = 0; y < size; ++y) {
    for (std::size_t x = 0; x < size; ++x) {
      const double fy = static_cast<double>(y), fx = static_cast<double>(x);
      // Two hatching directions with a slight wobble, like quick pen strokes.
      const bool upper = y < size / 2;
      const double along = upper ? fx + fy : fx - fy;
      const double wobble = 0.8 * std::sin(0.45 * (upper ? fx - fy : fx + fy));
      const double phase = std::fmod(along + wobble + 1000.0, upper ? 5.0 : 4.0);
      const bool ink = phase < 1.2;
      const float v = ink ? 0.08f : 0.95f;
      put(img, y, x, v, v, ink ? 0.12f : 0.92f);
    }
  }
  return img;
}

}  // namespace stylebasis::cli
