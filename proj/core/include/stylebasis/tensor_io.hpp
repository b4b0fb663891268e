#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "stylebasis/tensor.hpp"

namespace stylebasis {

/// SFT1 container layout, all integers little-endian:
///
///   offset 0   magic  "SFT1"           4 bytes
///   offset 4   dtype  u8 (1=f32, 2=complex64)
///   offset 5   ndim   u32
///   offset 9   dims   u32 x ndim
///   then       payload, row-major, f32 little-endian (complex as re,im pairs)
///
/// A 1x1x1 f32 tensor therefore occupies 4 + 1 + 4 + 12 + 4 = 25 bytes.
inline constexpr char kSftMagic[4] = {'S', 'F', 'T', '1'};

std::vector<std::uint8_t> encode_tensor(const RawTensor& t);
/// Throws BadMagic, UnsupportedDtype, TruncatedPayload, or InvalidTensor.
RawTensor decode_tensor(std::span<const std::uint8_t> bytes);

RawTensor read_tensor(const std::filesystem::path& path);
void write_tensor(const RawTensor& t, const std::filesystem::path& path);

FeatureMap read_feature_map(const std::filesystem::path& path);
void write_tensor(const FeatureMap& f, const std::filesystem::path& path);
void write_tensor(const ImageTensor& img, const std::filesystem::path& path);

}  // namespace stylebasis
