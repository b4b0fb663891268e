#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

namespace stylebasis {

struct KMeansResult {
  std::vector<std::size_t> assignment;
  Eigen::MatrixXd centroids;  // k x d
  double wcss = 0.0;
  std::vector<double> restart_wcss;  // one entry per restart
};

/// Lloyd's algorithm with k-means++ seeding; the restart with the lowest
/// within-cluster sum of squares wins (earliest on ties). Points are rows.
/// An emptied cluster is re-seeded at the point farthest from its centroid.
/// Throws InvalidArgument if k == 0 or there are fewer points than k.
KMeansResult kmeans(const Eigen::MatrixXd& points, std::size_t k, std::uint64_t seed,
                    std::size_t restarts = 10, std::size_t max_iterations = 300);

}  // namespace stylebasis
