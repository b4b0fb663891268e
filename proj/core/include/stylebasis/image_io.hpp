#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>

#include "stylebasis/tensor.hpp"

namespace stylebasis {

struct ImageSize {
  std::size_t height = 0;
  std::size_t width = 0;
};

/// Reads a PNG or binary/ASCII portable pixmap (P6/P3) into a unit-range RGB
/// tensor. Grayscale and alpha PNGs are converted to RGB. When `target_size`
/// is set the image is bilinearly resampled to it.
ImageTensor load_image(const std::filesystem::path& path,
                       std::optional<ImageSize> target_size = std::nullopt);

/// Writes an 8-bit RGB PNG. Throws RangeViolation unless the image is
/// unit-range.
void save_image(const ImageTensor& img, const std::filesystem::path& path);

/// Bilinear resampling with pixel-center alignment: output pixel (i, j) samples
/// source coordinate ((i + 0.5) * H / h - 0.5, (j + 0.5) * W / w - 0.5), with
/// edge clamping.
ImageTensor resize_bilinear(const ImageTensor& img, ImageSize size);

}  // namespace stylebasis
