#include "stylebasis/image_io.hpp"

#include <png.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>
#include <vector>

#include "stylebasis/error.hpp"

namespace stylebasis {

namespace {

std::vector<std::uint8_t> slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::IoFailure, "cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

ImageTensor decode_png(const std::vector<std::uint8_t>& bytes) {
  png_image image;
  std::memset(&image, 0, sizeof image);
  image.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_memory(&image, bytes.data(), bytes.size())) {
    fail(ErrorKind::DecodeError, std::string("png: ") + image.message);
  }
  image.format = PNG_FORMAT_RGB;
  std::vector<std::uint8_t> pixels(PNG_IMAGE_SIZE(image));
  if (!png_image_finish_read(&image, nullptr, pixels.data(), 0, nullptr)) {
    png_image_free(&image);
    fail(ErrorKind::DecodeError, std::string("png: ") + image.message);
  }
  std::vector<float> data(pixels.size());
  std::transform(pixels.begin(), pixels.end(), data.begin(),
                 [](std::uint8_t v) { return static_cast<float>(v) / 255.0f; });
  return ImageTensor(image.height, image.width, std::move(data));
}

class PnmReader {
 public:
  explicit PnmReader(const std::vector<std::uint8_t>& bytes) : bytes_(bytes) {}

  unsigned long next_int() {
    skip_space_and_comments();
    if (pos_ >= bytes_.size() || !std::isdigit(bytes_[pos_])) {
      fail(ErrorKind::DecodeError, "pnm: expected an integer");
    }
    unsigned long v = 0;
    while (pos_ < bytes_.size() && std::isdigit(bytes_[pos_])) {
      v = v * 10 + (bytes_[pos_++] - '0');
      if (v > 1u << 24) fail(ErrorKind::DecodeError, "pnm: value too large");
    }
    return v;
  }

  // Exactly one whitespace byte separates the header from binary samples.
  void skip_single_space() {
    if (pos_ >= bytes_.size() || !std::isspace(bytes_[pos_])) {
      fail(ErrorKind::DecodeError, "pnm: malformed header");
    }
    ++pos_;
  }

  std::size_t pos() const noexcept { return pos_; }

 private:
  void skip_space_and_comments() {
    while (pos_ < bytes_.size()) {
      if (std::isspace(bytes_[pos_])) {
        ++pos_;
      } else if (bytes_[pos_] == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  const std::vector<std::uint8_t>& bytes_;
  std::size_t pos_ = 2;
};

ImageTensor decode_ppm(const std::vector<std::uint8_t>& bytes) {
  const bool binary = bytes[1] == '6';
  PnmReader reader(bytes);
  const auto width = reader.next_int();
  const auto height = reader.next_int();
  const auto maxval = reader.next_int();
  if (width == 0 || height == 0 || maxval == 0 || maxval > 65535) {
    fail(ErrorKind::DecodeError, "pnm: bad header values");
  }
  const std::size_t n = static_cast<std::size_t>(width) * height * 3;
  std::vector<float> data(n);
  const auto scale = static_cast<float>(maxval);
  if (binary) {
    reader.skip_single_space();
    const std::size_t bps = maxval > 255 ? 2 : 1;
    std::size_t p = reader.pos();
    if (bytes.size() < p + n * bps) fail(ErrorKind::DecodeError, "pnm: truncated samples");
    for (std::size_t i = 0; i < n; ++i, p += bps) {
      const unsigned v = bps == 2 ? (bytes[p] << 8) | bytes[p + 1] : bytes[p];
      if (v > maxval) fail(ErrorKind::DecodeError, "pnm: sample exceeds maxval");
      data[i] = static_cast<float>(v) / scale;
    }
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      const auto v = reader.next_int();
      if (v > maxval) fail(ErrorKind::DecodeError, "pnm: sample exceeds maxval");
      data[i] = static_cast<float>(v) / scale;
    }
  }
  return ImageTensor(height, width, std::move(data));
}

bool is_png(const std::vector<std::uint8_t>& bytes) {
  static constexpr std::uint8_t sig[8] = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1A, '\n'};
  return bytes.size() >= 8 && std::memcmp(bytes.data(), sig, 8) == 0;
}

bool is_ppm(const std::vector<std::uint8_t>& bytes) {
  return bytes.size() >= 2 && bytes[0] == 'P' && (bytes[1] == '6' || bytes[1] == '3');
}

bool has_image_extension(const std::filesystem::path& path) {
  auto ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char ch) {
    return static_cast<char>(std::tolower(ch));
  });
  return ext == ".png" || ext == ".ppm" || ext == ".pnm";
}

}  // namespace

ImageTensor load_image(const std::filesystem::path& path, std::optional<ImageSize> target_size) {
  const auto bytes = slurp(path);
  ImageTensor img;
  if (is_png(bytes)) {
    img = decode_png(bytes);
  } else if (is_ppm(bytes)) {
    img = decode_ppm(bytes);
  } else if (has_image_extension(path)) {
    fail(ErrorKind::DecodeError, path.string() + " is not a valid PNG/PPM image");
  } else if (bytes.size() >= 2 && bytes[0] == 'P' && std::isdigit(bytes[1])) {
    fail(ErrorKind::UnsupportedFormat, "only P3/P6 portable pixmaps are supported");
  } else if (bytes.size() >= 3 && bytes[0] == 0xFF && bytes[1] == 0xD8 && bytes[2] == 0xFF) {
    fail(ErrorKind::UnsupportedFormat, "JPEG input is not supported; convert to PNG");
  } else {
    fail(ErrorKind::DecodeError, path.string() + " is not a decodable image");
  }
  if (target_size && (target_size->height != img.height() || target_size->width != img.width())) {
    return resize_bilinear(img, *target_size);
  }
  return img;
}

void save_image(const ImageTensor& img, const std::filesystem::path& path) {
  if (img.range() != RangeTag::Unit) {
    fail(ErrorKind::RangeViolation, "save_image needs a unit-range image; de-normalize first");
  }
  std::vector<std::uint8_t> pixels(img.size());
  for (std::size_t i = 0; i < img.size(); ++i) {
    const float v = img.data()[i];
    if (!(v >= 0.0f && v <= 1.0f)) fail(ErrorKind::RangeViolation, "pixel outside [0, 1]");
    pixels[i] = static_cast<std::uint8_t>(std::lround(v * 255.0f));
  }
  png_image image;
  std::memset(&image, 0, sizeof image);
  image.version = PNG_IMAGE_VERSION;
  image.width = static_cast<png_uint_32>(img.width());
  image.height = static_cast<png_uint_32>(img.height());
  image.format = PNG_FORMAT_RGB;
  if (!png_image_write_to_file(&image, path.string().c_str(), 0, pixels.data(), 0, nullptr)) {
    fail(ErrorKind::IoFailure, "png write failed for " + path.string() + ": " + image.message);
  }
}

ImageTensor resize_bilinear(const ImageTensor& img, ImageSize size) {
  ImageTensor out(size.height, size.width, img.range());
  const double sy = static_cast<double>(img.height()) / static_cast<double>(size.height);
  const double sx = static_cast<double>(img.width()) / static_cast<double>(size.width);
  const auto max_y = static_cast<double>(img.height() - 1);
  const auto max_x = static_cast<double>(img.width() - 1);
  for (std::size_t i = 0; i < size.height; ++i) {
    const double fy = std::clamp((static_cast<double>(i) + 0.5) * sy - 0.5, 0.0, max_y);
    const auto y0 = static_cast<std::size_t>(fy);
    const std::size_t y1 = std::min(y0 + 1, img.height() - 1);
    const double ty = fy - static_cast<double>(y0);
    for (std::size_t j = 0; j < size.width; ++j) {
      const double fx = std::clamp((static_cast<double>(j) + 0.5) * sx - 0.5, 0.0, max_x);
      const auto x0 = static_cast<std::size_t>(fx);
      const std::size_t x1 = std::min(x0 + 1, img.width() - 1);
      const double tx = fx - static_cast<double>(x0);
      for (std::size_t ch = 0; ch < 3; ++ch) {
        const double top = (1 - tx) * img.at(y0, x0, ch) + tx * img.at(y0, x1, ch);
        const double bottom = (1 - tx) * img.at(y1, x0, ch) + tx * img.at(y1, x1, ch);
        out.at(i, j, ch) = static_cast<float>((1 - ty) * top + ty * bottom);
      }
    }
  }
  return out;
}

}  // namespace stylebasis
