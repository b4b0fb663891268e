#pragma once

// Seeded synthetic problems with known ground truth.

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "stylebasis/atlas.hpp"
#include "stylebasis/tensor.hpp"

namespace fixture {

struct IcaProblem {
  stylebasis::FeatureMap mixtures;            // 64 x 64 x 8
  std::vector<std::vector<double>> sources;  // 4 x 4096
};

/// Four non-Gaussian sources (sine, square, sawtooth, Laplacian noise) mixed
/// into eight channels by a random 8 x 4 matrix.
IcaProblem ica_problem(std::uint64_t seed);

struct Blobs {
  Eigen::MatrixXd points;
  std::vector<std::size_t> truth;
};

/// k isotropic Gaussian blobs of `per` points with unit sigma; centres lie
/// on a simplex with pairwise distance `separation`.
Blobs blobs(std::size_t k, std::size_t per, std::size_t dim, double separation, std::uint64_t seed);

struct PlantedStyles {
  std::map<std::string, stylebasis::FeatureMap> maps;
  std::map<std::string, stylebasis::StyleLabel> labels;
  std::map<std::string, std::size_t> group;
};

/// Three groups of 8 x 8 x 8 style maps with distinct colour offsets and
/// stroke frequencies: eight ink styles (four chinese, four pen), six oil
/// styles, and two oil outliers. `noise_channels` extra channels carry
/// shared random texture of amplitude `noise_amp`, identical statistics for
/// every group.
PlantedStyles planted_styles(std::uint64_t seed, std::size_t noise_channels = 0, double noise_amp = 0.0);

/// 50 points on a noisy quarter circle in R^3 with their arc parameters.
struct Arc {
  Eigen::MatrixXd points;
  std::vector<double> theta;
};
Arc noisy_arc(std::size_t n, double noise, std::uint64_t seed);

}  // namespace fixture
