#include <gtest/gtest.h>

#include "stylebasis/control_spec.hpp"
#include "stylebasis/error.hpp"

using namespace stylebasis;

TEST(ControlSpecText, IdentityForms) {
  EXPECT_TRUE(parse_control_spec("").is_identity());
  EXPECT_TRUE(parse_control_spec("identity").is_identity());
  EXPECT_TRUE(parse_control_spec("  fft:  ").is_identity());
  EXPECT_EQ(format_control_spec(ControlSpec{}), "identity");
}

TEST(ControlSpecText, KeepThenScale) {
  const auto s = parse_control_spec("fft: keep=rest scale=2.0");
  EXPECT_EQ(s.method, Method::FFT);
  ASSERT_EQ(s.ops.size(), 2u);
  EXPECT_EQ(std::get<SingleBasis>(s.ops[0]).bases, BasisSelector::rest());
  const auto iv = std::get<Intervene>(s.ops[1]);
  EXPECT_EQ(iv.bases, BasisSelector::rest());
  EXPECT_EQ(iv.factor, 2.0);
}

TEST(ControlSpecText, MixWithParams) {
  const auto s = parse_control_spec("ica(n=4,seed=9,abs=1,mixmode=row): mix stroke@wave color@lamuse I=1.5");
  EXPECT_EQ(s.method, Method::ICA);
  EXPECT_EQ(s.params.n_extreme, 4u);
  EXPECT_EQ(s.params.seed, 9u);
  EXPECT_TRUE(s.params.absolute_sum);
  EXPECT_EQ(s.ica_mix_mode, IcaMixMode::Row);
  ASSERT_EQ(s.ops.size(), 2u);
  EXPECT_EQ(std::get<MixStyles>(s.ops[0]), (MixStyles{"wave", "lamuse"}));
  EXPECT_EQ(std::get<Intervene>(s.ops[1]), (Intervene{BasisSelector::stroke(), 1.5}));
}

TEST(ControlSpecText, ExplicitIds) {
  const auto s = parse_control_spec("pca(k=3,center=0): scale(0,2)=0.5");
  EXPECT_EQ(s.params.rank, 3u);
  EXPECT_FALSE(s.params.center);
  EXPECT_EQ(std::get<Intervene>(s.ops[0]).bases, BasisSelector::of({0, 2}));
}

TEST(ControlSpecText, FormatRoundTrips) {
  for (const char* text : {"fft: keep=rest scale=2", "dct: keep=dc", "ica(n=2): mix stroke@a color@b I=0.25",
                           "pca(k=2): scale(1,3)=3 keep=all"}) {
    const auto s = parse_control_spec(text);
    const auto again = parse_control_spec(format_control_spec(s));
    EXPECT_EQ(again.ops, s.ops) << text;
    EXPECT_EQ(again.method, s.method);
    EXPECT_EQ(again.params.n_extreme, s.params.n_extreme);
    EXPECT_EQ(again.params.rank, s.params.rank);
  }
}

TEST(ControlSpecText, RejectsMalformed) {
  for (const char* text : {"fft keep=rest", "wavelet: keep=dc", "fft: explode", "fft: scale=-1", "fft: keep=",
                           "ica: mix stroke@a", "fft(n=x): keep=dc", "fft: scale(dc=2"}) {
    try {
      parse_control_spec(text);
      ADD_FAILURE() << text;
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::InvalidControlSpec) << text;
    }
  }
}
