#include <gtest/gtest.h>

#include <map>

#include "fixtures.hpp"
#include "stylebasis/error.hpp"
#include "stylebasis/kmeans.hpp"

using namespace stylebasis;

namespace {

bool same_partition(const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) {
  std::map<std::size_t, std::size_t> fwd, back;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (fwd.emplace(a[i], b[i]).first->second != b[i] || back.emplace(b[i], a[i]).first->second != a[i]) return false;
  }
  return true;
}

}  // namespace

TEST(KMeans, RecoversSeparatedBlobs) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto b = fixture::blobs(3, 20, 4, 10.0, seed);
    const auto r = kmeans(b.points, 3, seed);
    EXPECT_TRUE(same_partition(r.assignment, b.truth)) << seed;
    for (double w : r.restart_wcss) EXPECT_LE(r.wcss, w);
  }
}

TEST(KMeans, OneClusterPerPoint) {
  const auto b = fixture::blobs(2, 3, 2, 5.0, 1);
  const auto r = kmeans(b.points, 6, 0);
  EXPECT_NEAR(r.wcss, 0.0, 1e-12);
  for (std::size_t i = 0; i < 6; ++i)
    EXPECT_NEAR((r.centroids.row(Eigen::Index(r.assignment[i])) - b.points.row(Eigen::Index(i))).norm(), 0.0, 1e-12);
}

TEST(KMeans, DuplicationKeepsCentroids) {
  const auto b = fixture::blobs(3, 8, 3, 10.0, 2);
  Eigen::MatrixXd twice(b.points.rows() * 2, b.points.cols());
  twice << b.points, b.points;
  const auto a = kmeans(b.points, 3, 4);
  const auto d = kmeans(twice, 3, 4);
  for (Eigen::Index i = 0; i < 3; ++i) {
    double best = INFINITY;
    for (Eigen::Index j = 0; j < 3; ++j) best = std::min(best, (a.centroids.row(i) - d.centroids.row(j)).norm());
    EXPECT_LT(best, 1e-6);
  }
  EXPECT_NEAR(d.wcss, 2 * a.wcss, 1e-6);
}

TEST(KMeans, Deterministic) {
  const auto b = fixture::blobs(4, 10, 4, 3.0, 3);
  const auto x = kmeans(b.points, 4, 9);
  const auto y = kmeans(b.points, 4, 9);
  EXPECT_EQ(x.assignment, y.assignment);
  EXPECT_EQ(x.centroids, y.centroids);
}

TEST(KMeans, RejectsBadK) {
  const Eigen::MatrixXd p = Eigen::MatrixXd::Zero(2, 2);
  EXPECT_THROW(kmeans(p, 0, 0), Error);
  EXPECT_THROW(kmeans(p, 3, 0), Error);
}
