#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "oracles.hpp"
#include "stylebasis/error.hpp"
#include "stylebasis/extractor.hpp"

using namespace stylebasis;

namespace {

ConvLayer conv(std::size_t in, std::size_t out) {
  return {in, out, std::vector<float>(out * in * 9, 0.0f), std::vector<float>(out, 0.0f)};
}

ImageTensor centered_image(std::size_t h, std::size_t w, std::uint64_t seed) {
  const auto f = oracle::random_map(h, w, 3, seed);
  return ImageTensor(h, w, std::vector<float>(f.data().begin(), f.data().end()), RangeTag::Centered);
}

}  // namespace

TEST(Extractor, IdentityKernelPassesInputThrough) {
  auto c = conv(3, 3);
  for (std::size_t o = 0; o < 3; ++o) c.weight[((o * 3 + o) * 3 + 1) * 3 + 1] = 1.0f;
  const Extractor ex({c}, {"conv"});
  const auto img = centered_image(4, 5, 1);
  const auto out = forward(ex, img, {"conv"}).at("conv");
  for (std::size_t i = 0; i < img.size(); ++i) EXPECT_EQ(out.data()[i], img.data()[i]);
}

TEST(Extractor, ZeroWeightsGiveZeroRelu) {
  const Extractor ex({conv(3, 4), ReluLayer{}}, {"conv", "relu"});
  const auto out = forward(ex, centered_image(3, 3, 2), {"relu"});
  for (float v : out.at("relu").data()) EXPECT_EQ(v, 0.0f);
}

TEST(Extractor, ConvMatchesDirectCorrelationOnRamp) {
  const std::array<double, 9> k{1, 2, 0, -1, 0.5, 3, 0, -2, 1};
  auto c = conv(3, 1);
  for (std::size_t i = 0; i < 9; ++i) c.weight[i] = static_cast<float>(k[i]);
  c.bias[0] = 0.25f;
  const Extractor ex({c}, {"conv"});

  std::vector<float> px(75, 0.0f);
  std::vector<double> ramp(25);
  for (std::size_t y = 0; y < 5; ++y)
    for (std::size_t x = 0; x < 5; ++x) px[(y * 5 + x) * 3] = static_cast<float>(ramp[y * 5 + x] = double(y * 5 + x));
  const auto out = forward(ex, ImageTensor(5, 5, px, RangeTag::Centered), {"conv"}).at("conv");
  const auto ref = oracle::direct_conv3x3(ramp, 5, 5, k, 0.25);
  for (std::size_t i = 0; i < 25; ++i) EXPECT_NEAR(out.data()[i], ref[i], 1e-5);
  // Hand-checked: the centre sees the full kernel, each corner only part of it.
  EXPECT_NEAR(out.at(2, 2, 0), 0.25 + (1 * 6 + 2 * 7 + -1 * 11 + 0.5 * 12 + 3 * 13 + -2 * 17 + 1 * 18), 1e-5);
  EXPECT_NEAR(out.at(0, 0, 0), 0.25 + (0.5 * 0 + 3 * 1 + -2 * 5 + 1 * 6), 1e-5);
  EXPECT_NEAR(out.at(4, 4, 0), 0.25 + (1 * 18 + 2 * 19 + -1 * 23 + 0.5 * 24), 1e-5);
}

TEST(Extractor, PoolingHalvesAndDropsOddEdge) {
  const Extractor avg({PoolLayer{PoolKind::Average}}, {"pool"});
  const Extractor mx({PoolLayer{PoolKind::Max}}, {"pool"});
  const auto img = centered_image(5, 4, 3);
  const auto a = forward(avg, img, {"pool"}).at("pool");
  const auto m = forward(mx, img, {"pool"}).at("pool");
  ASSERT_EQ(a.h(), 2u);
  ASSERT_EQ(a.w(), 2u);
  for (std::size_t ch = 0; ch < 3; ++ch) {
    const float v[4] = {img.at(2, 2, ch), img.at(2, 3, ch), img.at(3, 2, ch), img.at(3, 3, ch)};
    EXPECT_NEAR(a.at(1, 1, ch), (v[0] + v[1] + v[2] + v[3]) / 4.0f, 1e-6);
    EXPECT_EQ(m.at(1, 1, ch), std::max({v[0], v[1], v[2], v[3]}));
  }
}

TEST(Extractor, RejectsBadGraphs) {
  for (auto make : {+[] { Extractor({conv(3, 4), conv(3, 2)}, {"a", "b"}); },
                    +[] { Extractor({ReluLayer{}, ReluLayer{}}, {"a", "a"}); }}) {
    try {
      make();
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::InvalidArgument);
    }
  }
  try {
    Extractor::builtin().index_of("relu4_1");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::UnknownLayer);
  }
}

TEST(Extractor, BuiltinShape) {
  const auto ex = Extractor::builtin();
  EXPECT_EQ(ex.names(), (std::vector<std::string>{"conv1_1", "relu1_1", "pool1", "conv2_1", "relu2_1"}));
  EXPECT_EQ(ex.deepest_relu(), "relu2_1");
  const auto out = forward(ex, centered_image(16, 16, 4), {"relu1_1", "relu2_1"});
  EXPECT_EQ(out.at("relu1_1").c(), 8u);
  EXPECT_EQ(out.at("relu2_1").h(), 8u);
  EXPECT_EQ(out.at("relu2_1").c(), 16u);
  // filter rows are orthonormal
  const auto& c1 = std::get<ConvLayer>(ex.layers()[0]);
  for (std::size_t a = 0; a < 8; ++a)
    for (std::size_t b = 0; b < 8; ++b) {
      double dot = 0;
      for (std::size_t i = 0; i < 27; ++i) dot += double(c1.weight[a * 27 + i]) * c1.weight[b * 27 + i];
      EXPECT_NEAR(dot, a == b ? 1.0 : 0.0, 1e-5);
    }
}

TEST(Extractor, CheckedInWeightsMatchBuiltin) {
  const auto loaded = Extractor::load(STYLEBASIS_BUILTIN_WEIGHTS_DIR);
  const auto builtin = Extractor::builtin();
  ASSERT_EQ(loaded.names(), builtin.names());
  for (std::size_t i = 0; i < loaded.layers().size(); ++i) {
    if (const auto* a = std::get_if<ConvLayer>(&loaded.layers()[i])) {
      const auto& b = std::get<ConvLayer>(builtin.layers()[i]);
      EXPECT_EQ(a->weight, b.weight);
      EXPECT_EQ(a->bias, b.bias);
    }
  }
}

TEST(Extractor, SaveLoadRoundTripAndBadManifest) {
  const auto dir = std::filesystem::temp_directory_path() / "stylebasis_extractor";
  std::filesystem::remove_all(dir);
  const auto ex = Extractor::builtin(99);
  ex.save(dir);
  const auto img = centered_image(8, 8, 5);
  EXPECT_EQ(forward(Extractor::load(dir), img, {"relu2_1"}), forward(ex, img, {"relu2_1"}));

  std::ofstream(dir / "manifest.json") << "{\"format\": 3";
  try {
    Extractor::load(dir);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::BadWeightsFile);
  }
}

// Backward pass against finite differences of a linear probe <r, a_L>.
TEST(Extractor, BackwardMatchesFiniteDifferences) {
  for (PoolKind kind : {PoolKind::Average, PoolKind::Max}) {
    auto ex = Extractor::builtin();
    ex.set_pooling(kind);
    const std::size_t last = ex.index_of("relu2_1");
    const auto input = to_activation(oracle::random_map(6, 6, 3, 6));
    auto probe = ex.trace(input, last).values.back();
    for (std::size_t i = 0; i < probe.data.size(); ++i) probe.data[i] = std::sin(double(i));
    const auto f = [&](const std::vector<double>& x) {
      Activation a = input;
      a.data = x;
      const auto out = ex.trace(a, last).values.back();
      double s = 0;
      for (std::size_t i = 0; i < out.data.size(); ++i) s += out.data[i] * probe.data[i];
      return s;
    };
    const auto g = ex.backward(ex.trace(input, last), {{last, probe}});
    const auto fd = oracle::central_differences(f, input.data, 1e-6);
    EXPECT_LT(oracle::relative_error(g.data, fd), 1e-6);
  }
}
