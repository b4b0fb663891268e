#include "stylebasis/tensor_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>

#include "stylebasis/error.hpp"

namespace stylebasis {

namespace {

static_assert(sizeof(float) == 4 && std::numeric_limits<float>::is_iec559);

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

std::uint32_t get_u32(const std::uint8_t* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

}  // namespace

std::vector<std::uint8_t> encode_tensor(const RawTensor& t) {
  std::vector<std::uint8_t> out;
  out.reserve(9 + 4 * t.dims.size() + 4 * t.values.size());
  out.insert(out.end(), std::begin(kSftMagic), std::end(kSftMagic));
  out.push_back(static_cast<std::uint8_t>(t.dtype));
  put_u32(out, static_cast<std::uint32_t>(t.dims.size()));
  for (auto d : t.dims) put_u32(out, d);
  for (float v : t.values) put_u32(out, std::bit_cast<std::uint32_t>(v));
  return out;
}

RawTensor decode_tensor(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 4 || std::memcmp(bytes.data(), kSftMagic, 4) != 0) {
    fail(ErrorKind::BadMagic, "missing SFT1 magic");
  }
  if (bytes.size() < 9) fail(ErrorKind::TruncatedPayload, "header truncated");
  const auto code = bytes[4];
  if (code != static_cast<std::uint8_t>(DType::F32) &&
      code != static_cast<std::uint8_t>(DType::Complex64)) {
    fail(ErrorKind::UnsupportedDtype, "dtype code " + std::to_string(code));
  }
  const auto dtype = static_cast<DType>(code);
  const std::uint32_t ndim = get_u32(bytes.data() + 5);
  const std::size_t header = 9 + 4 * static_cast<std::size_t>(ndim);
  if (bytes.size() < header) fail(ErrorKind::TruncatedPayload, "dims truncated");

  std::vector<std::uint32_t> dims(ndim);
  std::size_t numel = 1;
  for (std::uint32_t i = 0; i < ndim; ++i) {
    dims[i] = get_u32(bytes.data() + 9 + 4 * i);
    numel *= dims[i];
    if (numel > bytes.size()) fail(ErrorKind::TruncatedPayload, "payload shorter than dims require");
  }
  const std::size_t scalars = numel * (dtype == DType::Complex64 ? 2 : 1);
  if (bytes.size() - header < scalars * 4) {
    fail(ErrorKind::TruncatedPayload, "payload shorter than dims require");
  }
  if (bytes.size() - header > scalars * 4) {
    fail(ErrorKind::InvalidTensor, "trailing bytes after payload");
  }
  std::vector<float> values(scalars);
  for (std::size_t i = 0; i < scalars; ++i) {
    values[i] = std::bit_cast<float>(get_u32(bytes.data() + header + 4 * i));
  }
  return RawTensor(dtype, std::move(dims), std::move(values));
}

RawTensor read_tensor(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::IoFailure, "cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  return decode_tensor(bytes);
}

void write_tensor(const RawTensor& t, const std::filesystem::path& path) {
  const auto bytes = encode_tensor(t);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorKind::IoFailure, "cannot open " + path.string() + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) fail(ErrorKind::IoFailure, "write failed for " + path.string());
}

FeatureMap read_feature_map(const std::filesystem::path& path) {
  return to_feature_map(read_tensor(path), path.stem().string());
}

void write_tensor(const FeatureMap& f, const std::filesystem::path& path) {
  write_tensor(to_raw(f), path);
}

void write_tensor(const ImageTensor& img, const std::filesystem::path& path) {
  write_tensor(to_raw(img), path);
}

}  // namespace stylebasis
