#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace stylebasis {

/// A layer activation: h x w spatial grid, c channels, channel-last row-major
/// storage (index = (y * w + x) * c + ch).
class FeatureMap {
 public:
  FeatureMap() = default;
  /// Zero-filled map. Throws InvalidTensor if any extent is zero.
  FeatureMap(std::size_t h, std::size_t w, std::size_t c, std::string layer_name = {});
  /// Throws InvalidTensor on a length mismatch, zero extent, or non-finite scalar.
  FeatureMap(std::size_t h, std::size_t w, std::size_t c, std::vector<float> data,
             std::string layer_name = {});

  std::size_t h() const noexcept { return h_; }
  std::size_t w() const noexcept { return w_; }
  std::size_t c() const noexcept { return c_; }
  std::size_t hw() const noexcept { return h_ * w_; }
  std::size_t size() const noexcept { return data_.size(); }
  const std::string& layer_name() const noexcept { return layer_name_; }
  void set_layer_name(std::string name) { layer_name_ = std::move(name); }

  std::span<const float> data() const noexcept { return data_; }
  std::span<float> data() noexcept { return data_; }

  float at(std::size_t y, std::size_t x, std::size_t ch) const noexcept {
    return data_[(y * w_ + x) * c_ + ch];
  }
  float& at(std::size_t y, std::size_t x, std::size_t ch) noexcept {
    return data_[(y * w_ + x) * c_ + ch];
  }

  bool same_shape(const FeatureMap& other) const noexcept {
    return h_ == other.h_ && w_ == other.w_ && c_ == other.c_;
  }
  /// Throws InvalidTensor if a scalar is NaN or infinite.
  void check_finite() const;

  friend bool operator==(const FeatureMap& a, const FeatureMap& b) noexcept {
    return a.same_shape(b) && a.data_ == b.data_;
  }

 private:
  std::size_t h_ = 0;
  std::size_t w_ = 0;
  std::size_t c_ = 0;
  std::vector<float> data_;
  std::string layer_name_;
};

enum class RangeTag { Unit, Centered };

/// RGB image, channel-last like FeatureMap.
class ImageTensor {
 public:
  static constexpr std::size_t kChannels = 3;

  ImageTensor() = default;
  ImageTensor(std::size_t height, std::size_t width, RangeTag tag = RangeTag::Unit);
  /// Throws InvalidTensor on a length mismatch, and RangeViolation if `tag` is
  /// Unit but a scalar lies outside [0, 1].
  ImageTensor(std::size_t height, std::size_t width, std::vector<float> data,
              RangeTag tag = RangeTag::Unit);

  std::size_t height() const noexcept { return height_; }
  std::size_t width() const noexcept { return width_; }
  std::size_t channels() const noexcept { return kChannels; }
  std::size_t size() const noexcept { return data_.size(); }
  RangeTag range() const noexcept { return range_; }

  std::span<const float> data() const noexcept { return data_; }
  std::span<float> data() noexcept { return data_; }

  float at(std::size_t y, std::size_t x, std::size_t ch) const noexcept {
    return data_[(y * width_ + x) * kChannels + ch];
  }
  float& at(std::size_t y, std::size_t x, std::size_t ch) noexcept {
    return data_[(y * width_ + x) * kChannels + ch];
  }

  friend bool operator==(const ImageTensor& a, const ImageTensor& b) noexcept {
    return a.height_ == b.height_ && a.width_ == b.width_ && a.range_ == b.range_ &&
           a.data_ == b.data_;
  }

 private:
  std::size_t height_ = 0;
  std::size_t width_ = 0;
  std::vector<float> data_;
  RangeTag range_ = RangeTag::Unit;
};

/// Per-channel affine normalization mapping unit-range pixels to the
/// extractor's centered input: centered = (unit - mean) / std.
struct Normalization {
  float mean[3] = {0.485f, 0.456f, 0.406f};
  float std[3] = {1.0f, 1.0f, 1.0f};
};

ImageTensor to_centered(const ImageTensor& unit, const Normalization& norm);
/// Inverse of to_centered; clamps into [0, 1].
ImageTensor to_unit(const ImageTensor& centered, const Normalization& norm);

enum class DType : std::uint8_t { F32 = 1, Complex64 = 2 };

std::size_t dtype_size(DType dtype) noexcept;

/// Untyped dense tensor as stored in an SFT1 file. Complex values are kept as
/// interleaved (re, im) float pairs, so `values.size() == numel * 2` for
/// Complex64.
struct RawTensor {
  DType dtype = DType::F32;
  std::vector<std::uint32_t> dims;
  std::vector<float> values;

  /// Throws InvalidTensor for rank 0, a zero extent, or a value-count mismatch.
  RawTensor(DType dtype, std::vector<std::uint32_t> dims, std::vector<float> values);

  std::size_t numel() const noexcept;

  friend bool operator==(const RawTensor& a, const RawTensor& b) noexcept = default;
};

RawTensor to_raw(const FeatureMap& f);
RawTensor to_raw(const ImageTensor& img);
RawTensor to_raw_complex(std::span<const std::complex<float>> values,
                         std::vector<std::uint32_t> dims);

/// Rank-3 (h, w, c) or rank-2 (h, w) with c = 1.
FeatureMap to_feature_map(const RawTensor& raw, std::string layer_name = {});
/// Rank-3 (height, width, 3).
ImageTensor to_image(const RawTensor& raw, RangeTag tag);
std::vector<std::complex<float>> to_complex(const RawTensor& raw);

}  // namespace stylebasis
