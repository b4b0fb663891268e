#pragma once

#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "stylebasis/extractor.hpp"
#include "stylebasis/tensor.hpp"

namespace stylebasis {

/// c x c Gram matrix G = F^T F of the hw x c activation matrix.
Eigen::MatrixXd gram(const FeatureMap& f);
Eigen::MatrixXd gram(const Activation& f);

struct LossGrad {
  double loss = 0.0;
  Activation grad;
};

/// 1/2 * sum (pred - target)^2; gradient is (pred - target).
LossGrad content_loss(const Activation& pred, const Activation& target);
LossGrad content_loss(const FeatureMap& pred, const FeatureMap& target);

/// Per-layer style term e / (4 h^2 w^2 c^2) * ||G(pred) - target||_F^2,
/// where h, w, c are the dimensions of `pred`.
LossGrad style_layer_loss(const Activation& pred, const Eigen::MatrixXd& target_gram, double weight);
LossGrad style_layer_loss(const FeatureMap& pred, const FeatureMap& target, double weight);

struct LossConfig {
  double alpha = 1.0;
  double beta = 1e3;
  std::string content_layer = "relu4_1";
  std::vector<std::string> style_layers{"relu4_1"};
  /// e_l per style layer; missing layers get 1 / |style_layers|.
  std::map<std::string, double> layer_weights;

  double layer_weight(const std::string& layer) const;
};

struct StyleLoss {
  double loss = 0.0;
  std::map<std::string, Activation> grads;
};

/// Sum over cfg.style_layers of style_layer_loss with weight e_l. Throws
/// UnknownLayer when a style layer is missing from `preds` or `targets`.
StyleLoss style_loss(const std::map<std::string, Activation>& preds,
                     const std::map<std::string, Eigen::MatrixXd>& targets, const LossConfig& cfg);

/// Throws UnknownLayer for layers the extractor does not have and
/// InvalidArgument for an empty style layer list or negative weights.
void validate(const LossConfig& cfg, const Extractor& ex);

}  // namespace stylebasis
