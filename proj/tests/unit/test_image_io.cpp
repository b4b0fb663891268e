#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "stylebasis/error.hpp"
#include "stylebasis/image_io.hpp"

using namespace stylebasis;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "stylebasis_image_io";
  fs::create_directories(dir);
  return dir / name;
}

ImageTensor filled(std::size_t h, std::size_t w, float v) {
  return ImageTensor(h, w, std::vector<float>(h * w * 3, v));
}

}  // namespace

TEST(ImageIo, WhitePngLoadsAsOnes) {
  const auto p = scratch("white.png");
  save_image(filled(2, 2, 1.0f), p);
  const auto img = load_image(p);
  ASSERT_EQ(img.height(), 2u);
  for (float v : img.data()) EXPECT_EQ(v, 1.0f);
}

TEST(ImageIo, SaveLoadQuantizes) {
  std::vector<float> px(5 * 7 * 3);
  for (std::size_t i = 0; i < px.size(); ++i) px[i] = static_cast<float>((i * 37) % 101) / 100.0f;
  const ImageTensor img(5, 7, px);
  const auto p = scratch("q.png");
  save_image(img, p);
  const auto back = load_image(p);
  for (std::size_t i = 0; i < px.size(); ++i) EXPECT_LE(std::abs(back.data()[i] - px[i]), 1.0f / 255.0f + 1e-6f);

  save_image(filled(3, 3, 0.5f), p);
  const auto gray = load_image(p);
  for (float v : gray.data()) EXPECT_EQ(v, gray.data()[0]);
}

TEST(ImageIo, CenteredImageIsRejected) {
  const ImageTensor c(1, 1, std::vector<float>{-0.3f, 0.1f, 0.2f}, RangeTag::Centered);
  try {
    save_image(c, scratch("c.png"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::RangeViolation);
  }
}

TEST(ImageIo, GarbageIsDecodeError) {
  const auto p = scratch("junk.png");
  std::ofstream(p) << "definitely not an image";
  try {
    load_image(p);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::DecodeError);
  }
}

// A linear ramp is reproduced exactly by bilinear sampling, so each output
// pixel equals the ramp evaluated at its source coordinate.
TEST(ImageIo, BilinearDownsampleOfRamp) {
  const auto p = scratch("ramp.ppm");
  {
    std::ofstream out(p);
    out << "P3\n4 4\n255\n";
    for (int y = 0; y < 4; ++y)
      for (int x = 0; x < 4; ++x) {
        const int v = 10 * x + 40 * y;
        out << v << ' ' << v << ' ' << v << '\n';
      }
  }
  const auto img = load_image(p, ImageSize{2, 2});
  ASSERT_EQ(img.width(), 2u);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      const double sy = (i + 0.5) * 2.0 - 0.5, sx = (j + 0.5) * 2.0 - 0.5;
      EXPECT_NEAR(img.at(i, j, 1), (10.0 * sx + 40.0 * sy) / 255.0, 1e-6);
    }
}

TEST(ImageIo, UpsampleClampsAtEdges) {
  const ImageTensor img(1, 2, std::vector<float>{0, 0, 0, 1, 1, 1});
  const auto big = resize_bilinear(img, {1, 4});
  // source x = (j + 0.5) / 2 - 0.5 -> -0.25, 0.25, 0.75, 1.25
  EXPECT_FLOAT_EQ(big.at(0, 0, 0), 0.0f);
  EXPECT_FLOAT_EQ(big.at(0, 1, 0), 0.25f);
  EXPECT_FLOAT_EQ(big.at(0, 2, 0), 0.75f);
  EXPECT_FLOAT_EQ(big.at(0, 3, 0), 1.0f);
}
