#include <gtest/gtest.h>

#include <cstring>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <random>

#include "oracles.hpp"
#include "stylebasis/error.hpp"
#include "stylebasis/tensor_io.hpp"

using namespace stylebasis;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "stylebasis_tensor_io";
  fs::create_directories(dir);
  return dir / name;
}

std::vector<std::uint8_t> slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

}  // namespace

TEST(Sft1, ScalarIs25Bytes) {
  const auto bytes = encode_tensor(to_raw(FeatureMap(1, 1, 1, std::vector<float>{7.0f})));
  ASSERT_EQ(bytes.size(), 25u);
  EXPECT_EQ(std::memcmp(bytes.data(), "SFT1", 4), 0);
  EXPECT_EQ(bytes[4], 1u);
  EXPECT_EQ(bytes[5], 3u);  // ndim, little-endian
  float payload;
  std::memcpy(&payload, bytes.data() + 21, 4);
  EXPECT_EQ(payload, 7.0f);
}

TEST(Sft1, ComplexPayloadIsInterleaved) {
  const std::vector<std::complex<float>> v{{3.0f, 4.0f}};
  const auto bytes = encode_tensor(to_raw_complex(v, {1, 1}));
  ASSERT_EQ(bytes.size(), 4u + 1 + 4 + 8 + 8);
  EXPECT_EQ(bytes[4], 2u);
  float re, im;
  std::memcpy(&re, bytes.data() + 17, 4);
  std::memcpy(&im, bytes.data() + 21, 4);
  EXPECT_EQ(re, 3.0f);
  EXPECT_EQ(im, 4.0f);
}

TEST(Sft1, ReadsHandEncodedFile) {
  std::vector<std::uint8_t> bytes{'S', 'F', 'T', '1', 1, 3, 0, 0, 0, 2, 0, 0, 0, 2, 0, 0, 0, 1, 0, 0, 0};
  for (float v : {1.0f, 2.0f, 3.0f, 4.0f}) {
    std::uint8_t b[4];
    std::memcpy(b, &v, 4);
    bytes.insert(bytes.end(), b, b + 4);
  }
  const auto f = to_feature_map(decode_tensor(bytes));
  EXPECT_EQ(f.h(), 2u);
  EXPECT_EQ(f.w(), 2u);
  EXPECT_EQ(f.c(), 1u);
  EXPECT_EQ(std::vector<float>(f.data().begin(), f.data().end()), (std::vector<float>{1, 2, 3, 4}));
}

TEST(Sft1, RejectsMalformedInput) {
  auto bytes = encode_tensor(to_raw(oracle::random_map(2, 2, 2, 1)));
  auto bad = bytes;
  std::memcpy(bad.data(), "XXXX", 4);
  try {
    decode_tensor(bad);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::BadMagic);
  }
  bad = bytes;
  bad[4] = 9;
  try {
    decode_tensor(bad);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::UnsupportedDtype);
  }
  bad.assign(bytes.begin(), bytes.end() - 1);
  try {
    decode_tensor(bad);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::TruncatedPayload);
  }
}

TEST(Sft1, FileRoundTripIsByteIdentical) {
  const auto p = scratch("a.sft");
  const auto q = scratch("b.sft");
  write_tensor(oracle::random_map(3, 5, 4, 7), p);
  write_tensor(read_tensor(p), q);
  EXPECT_EQ(slurp(p), slurp(q));
  EXPECT_EQ(read_feature_map(p), oracle::random_map(3, 5, 4, 7));
}

TEST(Sft1, RandomizedRoundTrips) {
  std::mt19937_64 gen(11);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t rank = 1 + gen() % 4;
    std::vector<std::uint32_t> dims;
    std::size_t n = 1;
    for (std::size_t i = 0; i < rank; ++i) {
      dims.push_back(1 + static_cast<std::uint32_t>(gen() % 5));
      n *= dims.back();
    }
    const auto dtype = gen() % 2 ? DType::F32 : DType::Complex64;
    std::vector<float> v(n * (dtype == DType::F32 ? 1 : 2));
    for (float& x : v) {
      const auto bits = static_cast<std::uint32_t>(gen());
      std::memcpy(&x, &bits, 4);
    }
    const RawTensor t(dtype, dims, v);
    const auto back = decode_tensor(encode_tensor(t));
    ASSERT_EQ(back.dims, t.dims);
    ASSERT_EQ(std::memcmp(back.values.data(), t.values.data(), v.size() * 4), 0);
  }
}
