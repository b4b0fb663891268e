#include <gtest/gtest.h>

#include <filesystem>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "stylebasis/error.hpp"
#include "stylebasis/latent_style.hpp"

using namespace stylebasis;

namespace {

float max_abs_diff(const FeatureMap& a, const FeatureMap& b) {
  float m = 0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a.data()[i] - b.data()[i]));
  return m;
}

}  // namespace

TEST(Latent, ParsesMethodNames) {
  EXPECT_EQ(parse_method("FFT"), Method::FFT);
  EXPECT_EQ(parse_method("ica"), Method::ICA);
  EXPECT_FALSE(parse_method("wavelet"));
  EXPECT_EQ(to_string(Method::DCT), "dct");
}

TEST(Latent, ReconstructsEveryMethod) {
  const auto f = oracle::random_map(8, 8, 8, 3);
  for (Method m : {Method::FFT, Method::DCT, Method::PCA}) {
    const auto latent = decompose(f, m);
    EXPECT_EQ(method_of(latent), m);
    EXPECT_LE(max_abs_diff(reconstruct(latent), f), 1e-4f) << to_string(m);
  }
  EXPECT_EQ(basis_count(decompose(f, Method::FFT)), 64u);
  EXPECT_EQ(basis_count(decompose(f, Method::PCA)), 8u);
}

TEST(Latent, SavesAndLoads) {
  const auto dir = std::filesystem::temp_directory_path() / "stylebasis_latent";
  const auto p = fixture::ica_problem(1);
  DecomposeParams params;
  params.n_extreme = 2;
  params.seed = 5;
  for (Method m : {Method::FFT, Method::DCT, Method::PCA, Method::ICA}) {
    std::filesystem::remove_all(dir);
    const auto latent = decompose(p.mixtures, m, params);
    save_latent(latent, dir);
    const auto back = load_latent(dir);
    ASSERT_EQ(method_of(back), m);
    EXPECT_EQ(reconstruct(back), reconstruct(latent)) << to_string(m);
  }
  const auto last = load_latent(dir);
  const auto& ica = std::get<IcaRep>(last);
  EXPECT_EQ(ica.n_extreme, 2u);
  EXPECT_EQ(ica.seed, 5u);
}
