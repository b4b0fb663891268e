#include "stylebasis/tensor.hpp"

#include <algorithm>
#include <cmath>

#include "stylebasis/error.hpp"

namespace stylebasis {

namespace {

void check_extents(std::size_t a, std::size_t b, std::size_t c, const char* what) {
  if (a == 0 || b == 0 || c == 0) {
    fail(ErrorKind::InvalidTensor, std::string(what) + " extents must all be >= 1");
  }
}

}  // namespace

FeatureMap::FeatureMap(std::size_t h, std::size_t w, std::size_t c, std::string layer_name)
    : h_(h), w_(w), c_(c), layer_name_(std::move(layer_name)) {
  check_extents(h, w, c, "FeatureMap");
  data_.assign(h * w * c, 0.0f);
}

FeatureMap::FeatureMap(std::size_t h, std::size_t w, std::size_t c, std::vector<float> data,
                       std::string layer_name)
    : h_(h), w_(w), c_(c), data_(std::move(data)), layer_name_(std::move(layer_name)) {
  check_extents(h, w, c, "FeatureMap");
  if (data_.size() != h * w * c) {
    fail(ErrorKind::InvalidTensor, "FeatureMap data length " + std::to_string(data_.size()) +
                                       " != h*w*c = " + std::to_string(h * w * c));
  }
  check_finite();
}

void FeatureMap::check_finite() const {
  for (float v : data_) {
    if (!std::isfinite(v)) fail(ErrorKind::InvalidTensor, "FeatureMap holds a non-finite scalar");
  }
}

ImageTensor::ImageTensor(std::size_t height, std::size_t width, RangeTag tag)
    : height_(height), width_(width), range_(tag) {
  check_extents(height, width, kChannels, "ImageTensor");
  data_.assign(height * width * kChannels, 0.0f);
}

ImageTensor::ImageTensor(std::size_t height, std::size_t width, std::vector<float> data,
                         RangeTag tag)
    : height_(height), width_(width), data_(std::move(data)), range_(tag) {
  check_extents(height, width, kChannels, "ImageTensor");
  if (data_.size() != height * width * kChannels) {
    fail(ErrorKind::InvalidTensor, "ImageTensor data length mismatch");
  }
  for (float v : data_) {
    if (!std::isfinite(v)) fail(ErrorKind::InvalidTensor, "ImageTensor holds a non-finite scalar");
    if (tag == RangeTag::Unit && (v < 0.0f || v > 1.0f)) {
      fail(ErrorKind::RangeViolation, "unit-range image has a scalar outside [0, 1]");
    }
  }
}

ImageTensor to_centered(const ImageTensor& unit, const Normalization& norm) {
  if (unit.range() != RangeTag::Unit) {
    fail(ErrorKind::RangeViolation, "to_centered expects a unit-range image");
  }
  std::vector<float> out(unit.data().begin(), unit.data().end());
  for (std::size_t i = 0; i < out.size(); ++i) {
    const std::size_t ch = i % 3;
    out[i] = (out[i] - norm.mean[ch]) / norm.std[ch];
  }
  return ImageTensor(unit.height(), unit.width(), std::move(out), RangeTag::Centered);
}

ImageTensor to_unit(const ImageTensor& centered, const Normalization& norm) {
  std::vector<float> out(centered.data().begin(), centered.data().end());
  if (centered.range() == RangeTag::Centered) {
    for (std::size_t i = 0; i < out.size(); ++i) {
      const std::size_t ch = i % 3;
      out[i] = out[i] * norm.std[ch] + norm.mean[ch];
    }
  }
  for (float& v : out) v = std::clamp(v, 0.0f, 1.0f);
  return ImageTensor(centered.height(), centered.width(), std::move(out), RangeTag::Unit);
}

std::size_t dtype_size(DType dtype) noexcept {
  return dtype == DType::Complex64 ? 8 : 4;
}

RawTensor::RawTensor(DType dtype_, std::vector<std::uint32_t> dims_, std::vector<float> values_)
    : dtype(dtype_), dims(std::move(dims_)), values(std::move(values_)) {
  if (dims.empty()) fail(ErrorKind::InvalidTensor, "tensor rank must be >= 1");
  for (auto d : dims) {
    if (d == 0) fail(ErrorKind::InvalidTensor, "tensor extents must all be >= 1");
  }
  const std::size_t per = dtype == DType::Complex64 ? 2 : 1;
  if (values.size() != numel() * per) {
    fail(ErrorKind::InvalidTensor, "tensor value count does not match its dims");
  }
}

std::size_t RawTensor::numel() const noexcept {
  std::size_t n = 1;
  for (auto d : dims) n *= d;
  return n;
}

RawTensor to_raw(const FeatureMap& f) {
  return RawTensor(DType::F32,
                   {static_cast<std::uint32_t>(f.h()), static_cast<std::uint32_t>(f.w()),
                    static_cast<std::uint32_t>(f.c())},
                   std::vector<float>(f.data().begin(), f.data().end()));
}

RawTensor to_raw(const ImageTensor& img) {
  return RawTensor(DType::F32,
                   {static_cast<std::uint32_t>(img.height()),
                    static_cast<std::uint32_t>(img.width()), 3u},
                   std::vector<float>(img.data().begin(), img.data().end()));
}

RawTensor to_raw_complex(std::span<const std::complex<float>> values,
                         std::vector<std::uint32_t> dims) {
  std::vector<float> interleaved;
  interleaved.reserve(values.size() * 2);
  for (const auto& z : values) {
    interleaved.push_back(z.real());
    interleaved.push_back(z.imag());
  }
  return RawTensor(DType::Complex64, std::move(dims), std::move(interleaved));
}

FeatureMap to_feature_map(const RawTensor& raw, std::string layer_name) {
  if (raw.dtype != DType::F32) fail(ErrorKind::UnsupportedDtype, "feature maps are f32");
  if (raw.dims.size() == 2) {
    return FeatureMap(raw.dims[0], raw.dims[1], 1, raw.values, std::move(layer_name));
  }
  if (raw.dims.size() != 3) {
    fail(ErrorKind::ShapeMismatch, "feature map tensors must be rank 2 or 3");
  }
  return FeatureMap(raw.dims[0], raw.dims[1], raw.dims[2], raw.values, std::move(layer_name));
}

ImageTensor to_image(const RawTensor& raw, RangeTag tag) {
  if (raw.dtype != DType::F32) fail(ErrorKind::UnsupportedDtype, "images are f32");
  if (raw.dims.size() != 3 || raw.dims[2] != 3) {
    fail(ErrorKind::ShapeMismatch, "image tensors must have dims (height, width, 3)");
  }
  return ImageTensor(raw.dims[0], raw.dims[1], raw.values, tag);
}

std::vector<std::complex<float>> to_complex(const RawTensor& raw) {
  std::vector<std::complex<float>> out;
  if (raw.dtype == DType::Complex64) {
    out.reserve(raw.numel());
    for (std::size_t i = 0; i < raw.numel(); ++i) {
      out.emplace_back(raw.values[2 * i], raw.values[2 * i + 1]);
    }
  } else {
    out.assign(raw.values.begin(), raw.values.end());
  }
  return out;
}

}  // namespace stylebasis
