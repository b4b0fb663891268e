#include "stylebasis/isomap.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <queue>
#include <vector>

#include "stylebasis/error.hpp"

namespace stylebasis {

Eigen::MatrixXd geodesic_distances(const Eigen::MatrixXd& points, std::size_t k_neighbors) {
  const auto n = static_cast<std::size_t>(points.rows());
  if (k_neighbors == 0 || n < k_neighbors + 1) {
    fail(ErrorKind::InvalidArgument, "isomap needs at least k_neighbors + 1 points");
  }
  const auto idx = [](std::size_t i) { return static_cast<Eigen::Index>(i); };

  Eigen::MatrixXd d(idx(n), idx(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) d(idx(i), idx(j)) = (points.row(idx(i)) - points.row(idx(j))).norm();

  const double inf = std::numeric_limits<double>::infinity();
  std::vector<std::vector<std::pair<std::size_t, double>>> adj(n);
  std::vector<std::vector<bool>> linked(n, std::vector<bool>(n, false));
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return d(idx(i), idx(a)) < d(idx(i), idx(b)); });
    std::size_t taken = 0;
    for (std::size_t j : order) {
      if (j == i) continue;
      if (taken++ == k_neighbors) break;
      linked[i][j] = linked[j][i] = true;
    }
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (linked[i][j]) adj[i].emplace_back(j, d(idx(i), idx(j)));

  Eigen::MatrixXd g = Eigen::MatrixXd::Constant(idx(n), idx(n), inf);
  using Item = std::pair<double, std::size_t>;
  for (std::size_t s = 0; s < n; ++s) {
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    g(idx(s), idx(s)) = 0.0;
    pq.emplace(0.0, s);
    while (!pq.empty()) {
      const auto [dist, u] = pq.top();
      pq.pop();
      if (dist > g(idx(s), idx(u))) continue;
      for (const auto& [v, wgt] : adj[u]) {
        if (dist + wgt < g(idx(s), idx(v))) {
          g(idx(s), idx(v)) = dist + wgt;
          pq.emplace(dist + wgt, v);
        }
      }
    }
  }
  if (!g.allFinite()) fail(ErrorKind::DisconnectedGraph, "neighbourhood graph is disconnected");
  // Dijkstra from both ends can differ in the last bit; make it exactly symmetric.
  return 0.5 * (g + g.transpose());
}

Eigen::MatrixXd isomap_embed(const Eigen::MatrixXd& points, std::size_t k_neighbors, std::size_t out_dim) {
  if (out_dim != 1 && out_dim != 2) fail(ErrorKind::InvalidArgument, "out_dim must be 1 or 2");
  const Eigen::MatrixXd g = geodesic_distances(points, k_neighbors);
  const Eigen::Index n = g.rows();
  if (static_cast<std::size_t>(n) < out_dim) fail(ErrorKind::InvalidArgument, "too few points");

  const Eigen::MatrixXd j = Eigen::MatrixXd::Identity(n, n) - Eigen::MatrixXd::Constant(n, n, 1.0 / static_cast<double>(n));
  const Eigen::MatrixXd b = -0.5 * j * g.cwiseAbs2() * j;
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(0.5 * (b + b.transpose()));

  Eigen::MatrixXd y(n, static_cast<Eigen::Index>(out_dim));
  for (std::size_t k = 0; k < out_dim; ++k) {
    const Eigen::Index col = n - 1 - static_cast<Eigen::Index>(k);  // eigenvalues ascend
    const double lambda = std::max(eig.eigenvalues()(col), 0.0);
    Eigen::VectorXd v = eig.eigenvectors().col(col) * std::sqrt(lambda);
    v.array() -= v.mean();
    Eigen::Index arg = 0;
    v.cwiseAbs().maxCoeff(&arg);
    if (v(arg) < 0.0) v = -v;
    y.col(static_cast<Eigen::Index>(k)) = v;
  }
  return y;
}

}  // namespace stylebasis
