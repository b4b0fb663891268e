#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "stylebasis/tensor.hpp"

namespace stylebasis {

/// Double-precision activation used inside forward/backward passes. Same
/// channel-last layout as FeatureMap.
struct Activation {
  std::size_t h = 0, w = 0, c = 0;
  std::vector<double> data;

  Activation() = default;
  Activation(std::size_t h_, std::size_t w_, std::size_t c_) : h(h_), w(w_), c(c_), data(h_ * w_ * c_, 0.0) {}

  double& at(std::size_t y, std::size_t x, std::size_t ch) { return data[(y * w + x) * c + ch]; }
  double at(std::size_t y, std::size_t x, std::size_t ch) const { return data[(y * w + x) * c + ch]; }
};

/// Rounds to float precision, exactly as FeatureMap stores activations.
FeatureMap to_feature_map(const Activation& a, std::string layer_name = {});
Activation to_activation(const FeatureMap& f);

/// 3x3 convolution, stride 1, zero padding 1. Weights are laid out
/// (out_ch, in_ch, ky, kx); ky/kx index rows/columns of the kernel.
struct ConvLayer {
  std::size_t in_ch = 0;
  std::size_t out_ch = 0;
  std::vector<float> weight;
  std::vector<float> bias;

  float w(std::size_t o, std::size_t i, std::size_t ky, std::size_t kx) const noexcept {
    return weight[((o * in_ch + i) * 3 + ky) * 3 + kx];
  }
};

struct ReluLayer {};

enum class PoolKind { Average, Max };

/// 2x2 window, stride 2; odd trailing rows/columns are dropped.
struct PoolLayer {
  PoolKind kind = PoolKind::Average;
};

using Layer = std::variant<ConvLayer, ReluLayer, PoolLayer>;

/// Activations of every layer for one input: values[0] is the input,
/// values[i + 1] the output of layer i. Only layers up to `depth` are run.
struct ForwardTrace {
  std::vector<Activation> values;
};

class Extractor {
 public:
  Extractor() = default;
  /// Throws InvalidArgument when channel counts do not chain or names repeat.
  Extractor(std::vector<Layer> layers, std::vector<std::string> names, Normalization norm = {});

  /// Two (conv3x3 -> ReLU) blocks with an average pool between them, channels
  /// 3 -> 8 -> 16, layer names conv1_1 relu1_1 pool1 conv2_1 relu2_1. Kernels
  /// are seeded random with orthonormalized filter rows.
  static Extractor builtin(std::uint64_t seed = kBuiltinSeed);
  static constexpr std::uint64_t kBuiltinSeed = 20190513;

  /// Weights directory: manifest.json plus one SFT1 file per conv weight and
  /// bias. Throws BadWeightsFile on malformed manifests.
  static Extractor load(const std::filesystem::path& dir);
  void save(const std::filesystem::path& dir) const;

  const std::vector<Layer>& layers() const noexcept { return layers_; }
  const std::vector<std::string>& names() const noexcept { return names_; }
  const Normalization& normalization() const noexcept { return norm_; }
  bool has_layer(const std::string& name) const noexcept;
  /// Throws UnknownLayer.
  std::size_t index_of(const std::string& name) const;
  /// Name of the deepest ReLU layer (empty if none).
  std::string deepest_relu() const;

  void set_pooling(PoolKind kind);

  /// Runs layers [0, last_layer] on a centered (h x w x 3) input.
  ForwardTrace trace(const Activation& input, std::size_t last_layer) const;

  /// Gradient of a scalar objective with respect to the network input, given
  /// the objective's gradients at some traced layers (keyed by layer index).
  Activation backward(const ForwardTrace& trace, const std::map<std::size_t, Activation>& grads) const;

 private:
  std::vector<Layer> layers_;
  std::vector<std::string> names_;
  Normalization norm_;
};

/// Activations at each tapped layer for a centered image. Throws UnknownLayer.
std::map<std::string, FeatureMap> forward(const Extractor& ex, const ImageTensor& centered,
                                          const std::vector<std::string>& taps);

/// Centered network input for unit-range pixels, computed in float with the
/// same arithmetic as to_centered.
Activation centered_input(std::span<const double> unit_pixels, std::size_t height,
                          std::size_t width, const Normalization& norm);

}  // namespace stylebasis
