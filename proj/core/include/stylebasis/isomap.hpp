#pragma once

#include <cstddef>

#include <Eigen/Dense>

namespace stylebasis {

/// Classical Isomap: symmetrized k-nearest-neighbour graph on Euclidean
/// distances, Dijkstra shortest paths, classical MDS. Rows are points; the
/// result is n x out_dim, column-centered, with each column's largest
/// magnitude entry positive.
/// Throws DisconnectedGraph, or InvalidArgument for out_dim outside {1, 2}
/// or fewer than k_neighbors + 1 points.
Eigen::MatrixXd isomap_embed(const Eigen::MatrixXd& points, std::size_t k_neighbors = 5,
                             std::size_t out_dim = 1);

/// All-pairs geodesic distances on the k-NN graph (exposed for testing).
Eigen::MatrixXd geodesic_distances(const Eigen::MatrixXd& points, std::size_t k_neighbors);

}  // namespace stylebasis
