#include <gtest/gtest.h>

#include <algorithm>

#include "oracles.hpp"
#include "stylebasis/binarize.hpp"
#include "stylebasis/error.hpp"

using namespace stylebasis;

namespace {

ImageTensor gray(std::size_t h, std::size_t w, const std::vector<float>& lum) {
  std::vector<float> px;
  for (float v : lum) px.insert(px.end(), {v, v, v});
  return ImageTensor(h, w, px);
}

}  // namespace

TEST(Binarize, BlackStaysBlack) {
  const auto out = binarize(gray(3, 3, std::vector<float>(9, 0.0f)), Threshold::otsu());
  for (float v : out.data()) EXPECT_EQ(v, 0.0f);
}

TEST(Binarize, FixedThresholdOnCheckerboard) {
  std::vector<float> lum;
  for (int y = 0; y < 4; ++y)
    for (int x = 0; x < 4; ++x) lum.push_back((x + y) % 2 ? 0.8f : 0.2f);
  const auto out = binarize(gray(4, 4, lum), Threshold::fixed(0.5));
  for (std::size_t i = 0; i < 16; ++i)
    for (std::size_t ch = 0; ch < 3; ++ch) EXPECT_EQ(out.data()[i * 3 + ch], lum[i] > 0.5f ? 1.0f : 0.0f);
}

TEST(Binarize, OtsuMatchesBruteForce) {
  for (const auto& [lo, hi] : {std::pair{40, 200}, std::pair{10, 12}, std::pair{100, 101}}) {
    std::array<std::size_t, 256> hist{};
    hist[lo] = 30;
    hist[hi] = 70;
    const auto k = otsu_bin(hist);
    const auto best = oracle::brute_otsu(hist);
    EXPECT_NE(std::find(best.begin(), best.end(), k), best.end());
    EXPECT_GE(k, std::size_t(lo));
    EXPECT_LT(k, std::size_t(hi));
  }
  std::array<std::size_t, 256> noisy{};
  for (std::size_t i = 0; i < 256; ++i) noisy[i] = (i * 7919) % 13 + (i > 90 && i < 140 ? 40 : 0);
  const auto best = oracle::brute_otsu(noisy);
  EXPECT_NE(std::find(best.begin(), best.end(), otsu_bin(noisy)), best.end());
}

TEST(Binarize, OtsuSplitsTwoModes) {
  std::vector<float> lum;
  for (int i = 0; i < 50; ++i) lum.push_back(i % 3 ? 0.1f : 0.9f);
  const auto img = gray(5, 10, lum);
  const double t = otsu_threshold(img);
  EXPECT_GT(t, 0.1);
  EXPECT_LT(t, 0.9);
  const auto out = binarize(img, Threshold::otsu());
  for (std::size_t i = 0; i < lum.size(); ++i) EXPECT_EQ(out.data()[i * 3], lum[i] > 0.5f ? 1.0f : 0.0f);
}

TEST(Binarize, LuminanceWeights) {
  const ImageTensor img(1, 1, std::vector<float>{1.0f, 0.0f, 0.0f});
  EXPECT_NEAR(luminance(img)[0], 0.299f, 1e-6);
  EXPECT_EQ(luminance_histogram(img)[76], 1u);
}

TEST(Binarize, RejectsCenteredImages) {
  const ImageTensor c(1, 1, std::vector<float>{-1, 0, 1}, RangeTag::Centered);
  EXPECT_THROW(binarize(c, Threshold::otsu()), Error);
}
