#include <gtest/gtest.h>

#include <cmath>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "stylebasis/error.hpp"
#include "stylebasis/latent.hpp"

using namespace stylebasis;

namespace {

std::vector<double> row(const Eigen::MatrixXf& m, Eigen::Index r) {
  std::vector<double> out(static_cast<std::size_t>(m.cols()));
  for (Eigen::Index j = 0; j < m.cols(); ++j) out[static_cast<std::size_t>(j)] = m(r, j);
  return out;
}

double best_match(const IcaRep& rep, const std::vector<double>& source) {
  double best = 0.0;
  for (Eigen::Index r = 0; r < rep.S.rows(); ++r) best = std::max(best, std::abs(oracle::pearson(row(rep.S, r), source)));
  return best;
}

}  // namespace

TEST(Ica, RecoversTwoSources) {
  constexpr std::size_t n = 2048;
  std::vector<double> a(n), b(n);
  std::vector<float> data;
  for (std::size_t t = 0; t < n; ++t) {
    const double s = double(t) / n;
    a[t] = std::sin(2 * std::numbers::pi * 5 * s) >= 0 ? 1.0 : -1.0;
    b[t] = 2.0 * (7 * s - std::floor(7 * s)) - 1.0;
    data.push_back(static_cast<float>(0.8 * a[t] + 0.3 * b[t]));
    data.push_back(static_cast<float>(0.4 * a[t] - 0.9 * b[t]));
  }
  const auto rep = ica_decompose(FeatureMap(32, 64, 2, data), {1, 3});
  EXPECT_GE(best_match(rep, a), 0.95);
  EXPECT_GE(best_match(rep, b), 0.95);
}

TEST(Ica, RecoversFourOfEight) {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const auto p = fixture::ica_problem(seed);
    const auto rep = ica_decompose(p.mixtures, {2, seed});
    for (const auto& s : p.sources) EXPECT_GE(best_match(rep, s), 0.95) << "seed " << seed;
  }
}

TEST(Ica, RoundTripAndLinearity) {
  const auto p = fixture::ica_problem(4);
  const auto& f = p.mixtures;
  const auto rep = ica_decompose(f, {2, 0});
  const auto full = ica_project_back(rep, rep.S, rep.A);
  double num = 0, den = 0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    num += std::pow(full.data()[i] - f.data()[i], 2);
    den += std::pow(f.data()[i], 2);
  }
  EXPECT_LE(std::sqrt(num / den), 1e-2);

  const auto split = split_basis(rep);
  Eigen::MatrixXf s_stroke = rep.S, s_color = rep.S;
  for (auto id : split.color_ids) s_stroke.row(Eigen::Index(id)).setZero();
  for (auto id : split.stroke_ids) s_color.row(Eigen::Index(id)).setZero();
  const auto a = ica_project_back(rep, s_stroke, rep.A);
  const auto b = ica_project_back(rep, s_color, rep.A);
  for (std::size_t i = 0; i < f.size(); ++i) {
    const float mean = rep.mean(Eigen::Index(i % f.c()));
    ASSERT_NEAR(a.data()[i] + b.data()[i] - mean, full.data()[i], 1e-3);
  }
}

TEST(Ica, ScalingOneSignalAddsItsOuterProduct) {
  const auto p = fixture::ica_problem(5);
  const auto rep = ica_decompose(p.mixtures, {2, 0});
  Eigen::MatrixXf s = rep.S;
  s.row(3) *= 2.0f;
  const auto base = ica_project_back(rep, rep.S, rep.A);
  const auto scaled = ica_project_back(rep, s, rep.A);
  const std::size_t c = rep.c;
  for (std::size_t q = 0; q < rep.h * rep.w; q += 37)
    for (std::size_t ch = 0; ch < c; ++ch) {
      const double extra = double(rep.A(Eigen::Index(ch), 3)) * rep.S(3, Eigen::Index(q));
      ASSERT_NEAR(scaled.data()[q * c + ch] - base.data()[q * c + ch], extra, 1e-4);
    }
}

TEST(Ica, ConstantChannelsAreDegenerate) {
  const FeatureMap f(4, 4, 3, std::vector<float>(48, 2.0f));
  try {
    ica_decompose(f, {1, 0});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::DegenerateInput);
  }
}

TEST(Ica, DeadChannelsKeepTheirSlot) {
  auto p = fixture::ica_problem(6);
  auto& f = p.mixtures;
  for (std::size_t q = 0; q < f.hw(); ++q) f.data()[q * 8 + 5] = 0.0f;
  const auto rep = ica_decompose(f, {2, 0});
  EXPECT_FLOAT_EQ(rep.A(5, 5), 1.0f);
  EXPECT_EQ(rep.S.row(5).norm(), 0.0f);
  const auto g = ica_project_back(rep, rep.S, rep.A);
  for (std::size_t q = 0; q < f.hw(); ++q) ASSERT_EQ(g.data()[q * 8 + 5], 0.0f);
}

TEST(Ica, SplitBasis) {
  const std::vector<double> sums{3, 1, 4, 2};
  const auto arg = ascending_order(sums);
  EXPECT_EQ(arg, (std::vector<std::size_t>{1, 3, 0, 2}));
  const auto s = split_basis(arg, 1);
  EXPECT_EQ(s.stroke_ids, (std::vector<std::size_t>{1, 2}));
  EXPECT_EQ(s.color_ids, (std::vector<std::size_t>{3, 0}));
  EXPECT_TRUE(split_basis(arg, 2).color_ids.empty());
  EXPECT_EQ(ascending_order({1, 0, 1, 0}), (std::vector<std::size_t>{1, 3, 0, 2}));
}

TEST(Ica, ColumnSums) {
  Eigen::MatrixXf a(2, 2);
  a << 1, -2, 3, 1;
  EXPECT_EQ(column_sums(a, false), (std::vector<double>{4, -1}));
  EXPECT_EQ(column_sums(a, true), (std::vector<double>{4, 3}));
}

TEST(Ica, SeedIsDeterministic) {
  const auto p = fixture::ica_problem(7);
  const auto a = ica_decompose(p.mixtures, {2, 42});
  const auto b = ica_decompose(p.mixtures, {2, 42});
  EXPECT_EQ(a.S, b.S);
  EXPECT_EQ(a.arg, b.arg);
}
