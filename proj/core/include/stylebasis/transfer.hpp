#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "stylebasis/control.hpp"
#include "stylebasis/extractor.hpp"
#include "stylebasis/loss.hpp"
#include "stylebasis/tensor.hpp"

namespace stylebasis {

struct LossRecord {
  double total = 0.0;
  double content = 0.0;
  double style = 0.0;
};

/// Float: pixels are read and tapped activations rounded at float precision,
/// exactly as forward() sees an ImageTensor, so an image whose features equal
/// the targets sits at an exact zero of the objective. Double skips both
/// roundings; the gradient is the same formula either way.
enum class Precision { Float, Double };

/// alpha * L_content + beta * L_style as a function of unit-range pixels.
class TransferObjective {
 public:
  /// Throws UnknownLayer (via validate) and ShapeMismatch when a style target
  /// has a different channel count than the extractor produces.
  TransferObjective(const ImageTensor& content, const std::map<std::string, FeatureMap>& style_targets,
                    const Extractor& ex, LossConfig cfg, Precision precision = Precision::Float);

  struct Evaluation {
    LossRecord loss;
    std::vector<double> grad;  // d total / d pixel, same layout as the image
  };

  Evaluation evaluate(std::span<const double> pixels) const;

  std::size_t height() const noexcept { return height_; }
  std::size_t width() const noexcept { return width_; }
  const LossConfig& config() const noexcept { return cfg_; }

 private:
  Activation input(std::span<const double> pixels) const;
  Activation tap(const Activation& a) const;

  const Extractor* ex_;
  LossConfig cfg_;
  Precision precision_;
  std::size_t height_, width_;
  std::size_t content_index_;
  std::size_t last_index_;
  Activation content_target_;
  std::map<std::string, Eigen::MatrixXd> style_grams_;
};

enum class InitKind { Content, Noise };

struct TransferOptions {
  std::size_t iterations = 500;
  double learning_rate = 0.02;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  std::uint64_t seed = 0;
  InitKind init = InitKind::Content;
};

/// Adam state over the pixel variable. Pixels are unconstrained while
/// optimizing; history[i] is the loss before update i + 1.
struct OptState {
  std::size_t height = 0, width = 0;
  std::vector<double> pixels;
  std::vector<double> m, v;
  std::size_t step = 0;
  std::vector<LossRecord> history;
};

OptState init_state(const ImageTensor& content, const TransferOptions& opts);

/// One evaluation plus one Adam update. Throws NonFiniteLoss.
void adam_step(OptState& state, const TransferObjective& objective, const TransferOptions& opts);

/// Pixels clamped into [0, 1].
ImageTensor final_image(const OptState& state);

struct TransferResult {
  ImageTensor image;
  std::vector<LossRecord> history;
};

TransferResult transfer(const ImageTensor& content, const std::map<std::string, FeatureMap>& style_targets,
                        const Extractor& ex, const LossConfig& cfg, const TransferOptions& opts = {});

/// Feature maps of a unit-range image at `layers`.
std::map<std::string, FeatureMap> style_features(const Extractor& ex, const ImageTensor& style,
                                                 const std::vector<std::string>& layers);

/// Style features at `layers` with `spec` applied to `primary` at every layer.
/// All styles must share a shape; every style is available to mixing ops by id.
std::map<std::string, FeatureMap> controlled_style_features(
    const Extractor& ex, const std::vector<std::pair<std::string, ImageTensor>>& styles,
    const std::string& primary, const std::vector<std::string>& layers, const ControlSpec& spec);

/// step,total,content,style with step counted from 1.
void write_loss_csv(const std::filesystem::path& path, const std::vector<LossRecord>& history);

}  // namespace stylebasis
