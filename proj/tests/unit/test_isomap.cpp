#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "stylebasis/error.hpp"
#include "stylebasis/isomap.hpp"

using namespace stylebasis;

TEST(Isomap, LineIsIsometric) {
  const std::vector<double> t{0.0, 1.0, 1.5, 4.0, 4.2, 7.0, 9.5};
  Eigen::MatrixXd p(7, 3);
  for (Eigen::Index i = 0; i < 7; ++i) p.row(i) = Eigen::RowVector3d(1, -2, 0.5) * t[std::size_t(i)];
  const auto e = isomap_embed(p, 2);
  const double scale = std::sqrt(1 + 4 + 0.25);
  const double sign = e(1, 0) > e(0, 0) ? 1.0 : -1.0;
  for (Eigen::Index i = 0; i < 7; ++i)
    for (Eigen::Index j = 0; j < 7; ++j)
      EXPECT_NEAR(sign * (e(j, 0) - e(i, 0)), scale * (t[std::size_t(j)] - t[std::size_t(i)]), 1e-9);
  EXPECT_NEAR(e.col(0).sum(), 0.0, 1e-9);
}

TEST(Isomap, EquilateralTriangle) {
  Eigen::MatrixXd p(3, 3);
  p << 1, 0, 0, 0, 1, 0, 0, 0, 1;
  const auto e = isomap_embed(p, 2, 2);
  const double d01 = (e.row(0) - e.row(1)).norm(), d02 = (e.row(0) - e.row(2)).norm(), d12 = (e.row(1) - e.row(2)).norm();
  EXPECT_NEAR(d01, std::sqrt(2.0), 1e-6);
  EXPECT_NEAR(d02, d01, 1e-6);
  EXPECT_NEAR(d12, d01, 1e-6);
}

TEST(Isomap, NoisyArcKeepsOrder) {
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    const auto arc = fixture::noisy_arc(50, 0.01, seed);
    const auto e = isomap_embed(arc.points, 5);
    std::vector<double> u(50);
    for (std::size_t i = 0; i < 50; ++i) u[i] = e(Eigen::Index(i), 0);
    EXPECT_GE(std::abs(oracle::spearman(u, arc.theta)), 0.99) << seed;
    EXPECT_EQ(isomap_embed(arc.points, 5), e);
  }
}

TEST(Isomap, GeodesicsFollowTheGraph) {
  Eigen::MatrixXd p(4, 2);
  p << 0, 0, 1, 0, 2, 0, 3, 0;
  const auto d = geodesic_distances(p, 1);
  EXPECT_DOUBLE_EQ(d(0, 3), 3.0);
  EXPECT_EQ(d, d.transpose());
}

TEST(Isomap, Errors) {
  Eigen::MatrixXd p(6, 1);
  p << 0, 1, 2, 100, 101, 102;
  try {
    isomap_embed(p, 2);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::DisconnectedGraph);
  }
  EXPECT_THROW(isomap_embed(p, 2, 3), Error);
  EXPECT_THROW(isomap_embed(p, 6), Error);
}
