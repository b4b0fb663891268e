#include "stylebasis/transfer.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>

#include "stylebasis/error.hpp"
#include "stylebasis/rng.hpp"

namespace stylebasis {

namespace {

Activation rounded(const Activation& a) {
  Activation out = a;
  for (double& v : out.data) v = static_cast<float>(v);
  return out;
}

std::vector<double> to_doubles(std::span<const float> values) {
  return std::vector<double>(values.begin(), values.end());
}

}  // namespace

TransferObjective::TransferObjective(const ImageTensor& content,
                                     const std::map<std::string, FeatureMap>& style_targets,
                                     const Extractor& ex, LossConfig cfg, Precision precision)
    : ex_(&ex), cfg_(std::move(cfg)), precision_(precision), height_(content.height()), width_(content.width()) {
  validate(cfg_, ex);
  content_index_ = ex.index_of(cfg_.content_layer);
  last_index_ = content_index_;
  for (const auto& layer : cfg_.style_layers) last_index_ = std::max(last_index_, ex.index_of(layer));

  const auto pixels = to_doubles(content.data());
  content_target_ = tap(ex.trace(input(pixels), content_index_).values.back());

  for (const auto& layer : cfg_.style_layers) {
    const auto it = style_targets.find(layer);
    if (it == style_targets.end()) fail(ErrorKind::UnknownLayer, "no style target for " + layer);
    style_grams_.emplace(layer, gram(it->second));
  }
}

TransferObjective::Evaluation TransferObjective::evaluate(std::span<const double> pixels) const {
  if (pixels.size() != height_ * width_ * 3) fail(ErrorKind::ShapeMismatch, "pixel count mismatch");
  const auto norm = ex_->normalization();
  const auto t = ex_->trace(input(pixels), last_index_);

  std::map<std::size_t, Activation> grads;
  Evaluation out;

  if (cfg_.alpha > 0.0) {
    auto c = content_loss(tap(t.values[content_index_ + 1]), content_target_);
    out.loss.content = c.loss;
    for (double& g : c.grad.data) g *= cfg_.alpha;
    grads.emplace(content_index_, std::move(c.grad));
  }
  if (cfg_.beta > 0.0) {
    std::map<std::string, Activation> preds;
    for (const auto& layer : cfg_.style_layers) {
      const auto& a = t.values[ex_->index_of(layer) + 1];
      if (static_cast<Eigen::Index>(a.c) != style_grams_.at(layer).rows()) {
        fail(ErrorKind::ShapeMismatch, "style target for " + layer + " has the wrong channel count");
      }
      preds.emplace(layer, tap(a));
    }
    auto s = style_loss(preds, style_grams_, cfg_);
    out.loss.style = s.loss;
    for (auto& [layer, g] : s.grads) {
      for (double& v : g.data) v *= cfg_.beta;
      const std::size_t idx = ex_->index_of(layer);
      if (auto it = grads.find(idx); it != grads.end()) {
        for (std::size_t i = 0; i < g.data.size(); ++i) it->second.data[i] += g.data[i];
      } else {
        grads.emplace(idx, std::move(g));
      }
    }
  }
  out.loss.total = cfg_.alpha * out.loss.content + cfg_.beta * out.loss.style;

  const Activation g = ex_->backward(t, grads);
  out.grad.resize(g.data.size());
  for (std::size_t i = 0; i < g.data.size(); ++i) out.grad[i] = g.data[i] / norm.std[i % 3];
  return out;
}

Activation TransferObjective::input(std::span<const double> pixels) const {
  const auto& norm = ex_->normalization();
  if (precision_ == Precision::Float) return centered_input(pixels, height_, width_, norm);
  Activation a(height_, width_, 3);
  for (std::size_t i = 0; i < a.data.size(); ++i) a.data[i] = (pixels[i] - norm.mean[i % 3]) / norm.std[i % 3];
  return a;
}

Activation TransferObjective::tap(const Activation& a) const {
  return precision_ == Precision::Float ? rounded(a) : a;
}

OptState init_state(const ImageTensor& content, const TransferOptions& opts) {
  OptState s;
  s.height = content.height();
  s.width = content.width();
  if (opts.init == InitKind::Content) {
    s.pixels = to_doubles(content.data());
  } else {
    Rng rng(Rng::derive(opts.seed, "transfer.noise"));
    s.pixels.resize(content.size());
    for (double& p : s.pixels) p = static_cast<float>(rng.uniform());
  }
  s.m.assign(s.pixels.size(), 0.0);
  s.v.assign(s.pixels.size(), 0.0);
  return s;
}

void adam_step(OptState& state, const TransferObjective& objective, const TransferOptions& opts) {
  const auto eval = objective.evaluate(state.pixels);
  if (!std::isfinite(eval.loss.total)) {
    fail(ErrorKind::NonFiniteLoss, "loss diverged at step " + std::to_string(state.step + 1));
  }
  state.history.push_back(eval.loss);
  ++state.step;
  const double t = static_cast<double>(state.step);
  const double c1 = 1.0 - std::pow(opts.beta1, t);
  const double c2 = 1.0 - std::pow(opts.beta2, t);
  for (std::size_t i = 0; i < state.pixels.size(); ++i) {
    const double g = eval.grad[i];
    state.m[i] = opts.beta1 * state.m[i] + (1.0 - opts.beta1) * g;
    state.v[i] = opts.beta2 * state.v[i] + (1.0 - opts.beta2) * g * g;
    state.pixels[i] -= opts.learning_rate * (state.m[i] / c1) / (std::sqrt(state.v[i] / c2) + opts.epsilon);
  }
}

ImageTensor final_image(const OptState& state) {
  std::vector<float> data(state.pixels.size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    data[i] = static_cast<float>(std::clamp(state.pixels[i], 0.0, 1.0));
  }
  return ImageTensor(state.height, state.width, std::move(data), RangeTag::Unit);
}

TransferResult transfer(const ImageTensor& content, const std::map<std::string, FeatureMap>& style_targets,
                        const Extractor& ex, const LossConfig& cfg, const TransferOptions& opts) {
  if (content.range() != RangeTag::Unit) fail(ErrorKind::RangeViolation, "content image must be unit range");
  const TransferObjective objective(content, style_targets, ex, cfg);
  OptState state = init_state(content, opts);
  for (std::size_t i = 0; i < opts.iterations; ++i) adam_step(state, objective, opts);
  return {final_image(state), std::move(state.history)};
}

std::map<std::string, FeatureMap> style_features(const Extractor& ex, const ImageTensor& style,
                                                 const std::vector<std::string>& layers) {
  return forward(ex, to_centered(style, ex.normalization()), layers);
}

std::map<std::string, FeatureMap> controlled_style_features(
    const Extractor& ex, const std::vector<std::pair<std::string, ImageTensor>>& styles,
    const std::string& primary, const std::vector<std::string>& layers, const ControlSpec& spec) {
  std::map<std::string, StyleBank> banks;
  for (const auto& [id, image] : styles) {
    for (auto& [layer, f] : style_features(ex, image, layers)) banks[layer].add(id, std::move(f));
  }
  std::map<std::string, FeatureMap> out;
  for (const auto& layer : layers) {
    auto f = apply_control(banks.at(layer), primary, spec);
    f.set_layer_name(layer);
    out.emplace(layer, std::move(f));
  }
  return out;
}

void write_loss_csv(const std::filesystem::path& path, const std::vector<LossRecord>& history) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) fail(ErrorKind::IoFailure, "cannot write " + path.string());
  out << "step,total,content,style\n" << std::setprecision(17);
  for (std::size_t i = 0; i < history.size(); ++i) {
    out << i + 1 << ',' << history[i].total << ',' << history[i].content << ',' << history[i].style << '\n';
  }
}

}  // namespace stylebasis
