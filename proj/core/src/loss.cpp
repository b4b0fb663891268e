#include "stylebasis/loss.hpp"

#include "stylebasis/error.hpp"

namespace stylebasis {

namespace {

using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

Eigen::Map<const RowMat> as_matrix(const Activation& a) {
  return Eigen::Map<const RowMat>(a.data.data(), static_cast<Eigen::Index>(a.h * a.w),
                                  static_cast<Eigen::Index>(a.c));
}

void require_same(const Activation& a, const Activation& b) {
  if (a.h != b.h || a.w != b.w || a.c != b.c) fail(ErrorKind::ShapeMismatch, "activation shapes differ");
}

}  // namespace

Eigen::MatrixXd gram(const Activation& f) {
  const auto m = as_matrix(f);
  return m.transpose() * m;
}

Eigen::MatrixXd gram(const FeatureMap& f) { return gram(to_activation(f)); }

LossGrad content_loss(const Activation& pred, const Activation& target) {
  require_same(pred, target);
  LossGrad out{0.0, Activation(pred.h, pred.w, pred.c)};
  for (std::size_t i = 0; i < pred.data.size(); ++i) {
    const double d = pred.data[i] - target.data[i];
    out.loss += 0.5 * d * d;
    out.grad.data[i] = d;
  }
  return out;
}

LossGrad content_loss(const FeatureMap& pred, const FeatureMap& target) {
  return content_loss(to_activation(pred), to_activation(target));
}

LossGrad style_layer_loss(const Activation& pred, const Eigen::MatrixXd& target_gram, double weight) {
  if (target_gram.rows() != static_cast<Eigen::Index>(pred.c) || target_gram.cols() != target_gram.rows()) {
    fail(ErrorKind::ShapeMismatch, "target Gram does not match the channel count");
  }
  const double n = static_cast<double>(pred.h * pred.w * pred.c);
  const double norm = 1.0 / (n * n);
  const Eigen::MatrixXd diff = gram(pred) - target_gram;

  LossGrad out{0.25 * weight * norm * diff.squaredNorm(), Activation(pred.h, pred.w, pred.c)};
  Eigen::Map<RowMat> g(out.grad.data.data(), static_cast<Eigen::Index>(pred.h * pred.w),
                       static_cast<Eigen::Index>(pred.c));
  g.noalias() = (weight * norm) * (as_matrix(pred) * diff);
  return out;
}

LossGrad style_layer_loss(const FeatureMap& pred, const FeatureMap& target, double weight) {
  return style_layer_loss(to_activation(pred), gram(target), weight);
}

double LossConfig::layer_weight(const std::string& layer) const {
  if (const auto it = layer_weights.find(layer); it != layer_weights.end()) return it->second;
  return style_layers.empty() ? 0.0 : 1.0 / static_cast<double>(style_layers.size());
}

StyleLoss style_loss(const std::map<std::string, Activation>& preds,
                     const std::map<std::string, Eigen::MatrixXd>& targets, const LossConfig& cfg) {
  StyleLoss out;
  for (const auto& layer : cfg.style_layers) {
    const auto p = preds.find(layer);
    const auto t = targets.find(layer);
    if (p == preds.end() || t == targets.end()) fail(ErrorKind::UnknownLayer, "no style term for " + layer);
    auto term = style_layer_loss(p->second, t->second, cfg.layer_weight(layer));
    out.loss += term.loss;
    out.grads.emplace(layer, std::move(term.grad));
  }
  return out;
}

void validate(const LossConfig& cfg, const Extractor& ex) {
  if (cfg.style_layers.empty()) fail(ErrorKind::InvalidArgument, "at least one style layer is required");
  if (cfg.alpha < 0.0 || cfg.beta < 0.0) fail(ErrorKind::InvalidArgument, "loss weights must be >= 0");
  ex.index_of(cfg.content_layer);
  for (const auto& layer : cfg.style_layers) ex.index_of(layer);
  for (const auto& [layer, w] : cfg.layer_weights) {
    ex.index_of(layer);
    if (w < 0.0) fail(ErrorKind::InvalidArgument, "layer weight for " + layer + " is negative");
  }
}

}  // namespace stylebasis
