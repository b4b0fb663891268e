#include "fixtures.hpp"

#include <cmath>
#include <numbers>
#include <cstdio>
#include <random>

namespace fixture {

using stylebasis::FeatureMap;
using stylebasis::StyleLabel;

IcaProblem ica_problem(std::uint64_t seed) {
  constexpr std::size_t n = 4096, k = 4, c = 8;
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::normal_distribution<double> g(0.0, 1.0);

  IcaProblem p;
  p.sources.assign(k, std::vector<double>(n));
  // Whole periods in disjoint frequency bands keep the sample correlations small.
  std::uniform_int_distribution<int> pick(0, 2);
  const double f1 = 2 + pick(gen), f2 = 6 + pick(gen), f3 = 11 + pick(gen);
  const double phase = 2.0 * std::numbers::pi * u(gen);
  for (std::size_t t = 0; t < n; ++t) {
    const double s = static_cast<double>(t) / static_cast<double>(n);
    p.sources[0][t] = std::sin(2.0 * std::numbers::pi * f1 * s + phase);
    p.sources[1][t] = std::sin(2.0 * std::numbers::pi * f2 * s) >= 0.0 ? 1.0 : -1.0;
    p.sources[2][t] = 2.0 * (f3 * s - std::floor(f3 * s)) - 1.0;
    const double e = u(gen) - 0.5;
    p.sources[3][t] = -std::copysign(1.0, e) * std::log(1.0 - 2.0 * std::abs(e));
  }
  Eigen::MatrixXd mix(c, k);
  for (Eigen::Index i = 0; i < mix.size(); ++i) mix.data()[i] = g(gen);

  std::vector<float> data(n * c);
  for (std::size_t t = 0; t < n; ++t)
    for (std::size_t ch = 0; ch < c; ++ch) {
      double v = 0.0;
      for (std::size_t j = 0; j < k; ++j) v += mix(static_cast<Eigen::Index>(ch), static_cast<Eigen::Index>(j)) * p.sources[j][t];
      data[t * c + ch] = static_cast<float>(v);
    }
  p.mixtures = FeatureMap(64, 64, c, std::move(data));
  return p;
}

Blobs blobs(std::size_t k, std::size_t per, std::size_t dim, double separation, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  // Scaled standard basis vectors are pairwise sqrt(2) apart.
  Blobs b;
  b.points.resize(static_cast<Eigen::Index>(k * per), static_cast<Eigen::Index>(std::max(dim, k)));
  for (std::size_t j = 0; j < k; ++j)
    for (std::size_t i = 0; i < per; ++i) {
      const auto row = static_cast<Eigen::Index>(j * per + i);
      for (Eigen::Index d = 0; d < b.points.cols(); ++d) {
        b.points(row, d) = g(gen) + (static_cast<std::size_t>(d) == j ? separation / std::sqrt(2.0) : 0.0);
      }
      b.truth.push_back(j);
    }
  return b;
}

PlantedStyles planted_styles(std::uint64_t seed, std::size_t noise_channels, double noise_amp) {
  constexpr std::size_t h = 8, w = 8, base_c = 8;
  const std::size_t c = base_c + noise_channels;
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  std::uniform_real_distribution<double> u(0.0, 1.0);

  struct Group {
    double color;
    double freq;
    std::size_t count;
  };
  const Group groups[3] = {{0.5, 1.0, 8}, {3.0, 2.0, 6}, {6.0, 3.0, 2}};
  PlantedStyles out;
  std::size_t serial = 0;
  for (std::size_t gi = 0; gi < 3; ++gi) {
    for (std::size_t i = 0; i < groups[gi].count; ++i, ++serial) {
      std::vector<float> data(h * w * c);
      const double phase = 2.0 * std::numbers::pi * u(gen);
      for (std::size_t y = 0; y < h; ++y)
        for (std::size_t x = 0; x < w; ++x)
          for (std::size_t ch = 0; ch < c; ++ch) {
            double v;
            if (ch < base_c) {
              const double stroke = std::cos(2.0 * std::numbers::pi * groups[gi].freq * static_cast<double>(x) / w + phase +
                                             0.3 * static_cast<double>(ch));
              v = groups[gi].color * (1.0 + 0.1 * static_cast<double>(ch)) + stroke + 0.05 * g(gen);
            } else {
              v = noise_amp * g(gen);
            }
            data[(y * w + x) * c + ch] = static_cast<float>(v);
          }
      char id[16];
      std::snprintf(id, sizeof id, "s%02zu", serial);
      StyleLabel label = StyleLabel::Oil;
      if (gi == 0) label = i % 2 == 0 ? StyleLabel::Chinese : StyleLabel::Pen;
      out.maps.emplace(id, FeatureMap(h, w, c, std::move(data), id));
      out.labels.emplace(id, label);
      out.group.emplace(id, gi);
    }
  }
  return out;
}

Arc noisy_arc(std::size_t n, double noise, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> u(0.0, std::numbers::pi / 2.0);
  std::normal_distribution<double> g(0.0, noise);
  Arc a;
  a.points.resize(static_cast<Eigen::Index>(n), 3);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = u(gen);
    a.theta.push_back(t);
    const auto r = static_cast<Eigen::Index>(i);
    a.points(r, 0) = std::cos(t) + g(gen);
    a.points(r, 1) = std::sin(t) + g(gen);
    a.points(r, 2) = g(gen);
  }
  return a;
}

}  // namespace fixture
