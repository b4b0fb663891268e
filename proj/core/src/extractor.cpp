#include "stylebasis/extractor.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>

#include <json.hpp>

#include "stylebasis/error.hpp"
#include "stylebasis/rng.hpp"
#include "stylebasis/tensor_io.hpp"

namespace stylebasis {

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

Activation conv_forward(const ConvLayer& conv, const Activation& in) {
  Activation out(in.h, in.w, conv.out_ch);
  const std::size_t ci = conv.in_ch, co = conv.out_ch;
  // Repack weights as [ky][kx][i][o] for a contiguous inner loop over outputs.
  std::vector<double> packed(9 * ci * co);
  for (std::size_t o = 0; o < co; ++o)
    for (std::size_t i = 0; i < ci; ++i)
      for (std::size_t ky = 0; ky < 3; ++ky)
        for (std::size_t kx = 0; kx < 3; ++kx)
          packed[((ky * 3 + kx) * ci + i) * co + o] = conv.w(o, i, ky, kx);

  for (std::size_t y = 0; y < in.h; ++y) {
    for (std::size_t x = 0; x < in.w; ++x) {
      double* dst = &out.data[(y * in.w + x) * co];
      for (std::size_t o = 0; o < co; ++o) dst[o] = conv.bias[o];
      for (std::size_t ky = 0; ky < 3; ++ky) {
        const long sy = static_cast<long>(y) + static_cast<long>(ky) - 1;
        if (sy < 0 || sy >= static_cast<long>(in.h)) continue;
        for (std::size_t kx = 0; kx < 3; ++kx) {
          const long sx = static_cast<long>(x) + static_cast<long>(kx) - 1;
          if (sx < 0 || sx >= static_cast<long>(in.w)) continue;
          const double* src = &in.data[(static_cast<std::size_t>(sy) * in.w + static_cast<std::size_t>(sx)) * ci];
          const double* wk = &packed[(ky * 3 + kx) * ci * co];
          for (std::size_t i = 0; i < ci; ++i) {
            const double v = src[i];
            const double* wrow = wk + i * co;
            for (std::size_t o = 0; o < co; ++o) dst[o] += wrow[o] * v;
          }
        }
      }
    }
  }
  return out;
}

Activation conv_backward(const ConvLayer& conv, const Activation& grad_out, std::size_t h, std::size_t w) {
  Activation grad_in(h, w, conv.in_ch);
  const std::size_t ci = conv.in_ch, co = conv.out_ch;
  std::vector<double> packed(9 * ci * co);
  for (std::size_t o = 0; o < co; ++o)
    for (std::size_t i = 0; i < ci; ++i)
      for (std::size_t ky = 0; ky < 3; ++ky)
        for (std::size_t kx = 0; kx < 3; ++kx)
          packed[((ky * 3 + kx) * ci + i) * co + o] = conv.w(o, i, ky, kx);

  for (std::size_t y = 0; y < h; ++y) {
    for (std::size_t x = 0; x < w; ++x) {
      const double* g = &grad_out.data[(y * w + x) * co];
      for (std::size_t ky = 0; ky < 3; ++ky) {
        const long sy = static_cast<long>(y) + static_cast<long>(ky) - 1;
        if (sy < 0 || sy >= static_cast<long>(h)) continue;
        for (std::size_t kx = 0; kx < 3; ++kx) {
          const long sx = static_cast<long>(x) + static_cast<long>(kx) - 1;
          if (sx < 0 || sx >= static_cast<long>(w)) continue;
          double* dst = &grad_in.data[(static_cast<std::size_t>(sy) * w + static_cast<std::size_t>(sx)) * ci];
          const double* wk = &packed[(ky * 3 + kx) * ci * co];
          for (std::size_t i = 0; i < ci; ++i) {
            const double* wrow = wk + i * co;
            double acc = 0.0;
            for (std::size_t o = 0; o < co; ++o) acc += wrow[o] * g[o];
            dst[i] += acc;
          }
        }
      }
    }
  }
  return grad_in;
}

Activation relu_forward(const Activation& in) {
  Activation out = in;
  for (double& v : out.data) v = v > 0.0 ? v : 0.0;
  return out;
}

Activation pool_forward(const PoolLayer& pool, const Activation& in) {
  Activation out(in.h / 2, in.w / 2, in.c);
  for (std::size_t y = 0; y < out.h; ++y) {
    for (std::size_t x = 0; x < out.w; ++x) {
      for (std::size_t ch = 0; ch < in.c; ++ch) {
        const double a = in.at(2 * y, 2 * x, ch), b = in.at(2 * y, 2 * x + 1, ch);
        const double c = in.at(2 * y + 1, 2 * x, ch), d = in.at(2 * y + 1, 2 * x + 1, ch);
        out.at(y, x, ch) = pool.kind == PoolKind::Average ? 0.25 * (a + b + c + d)
                                                          : std::max(std::max(a, b), std::max(c, d));
      }
    }
  }
  return out;
}

Activation pool_backward(const PoolLayer& pool, const Activation& in, const Activation& grad_out) {
  Activation grad_in(in.h, in.w, in.c);
  for (std::size_t y = 0; y < grad_out.h; ++y) {
    for (std::size_t x = 0; x < grad_out.w; ++x) {
      for (std::size_t ch = 0; ch < in.c; ++ch) {
        const double g = grad_out.at(y, x, ch);
        if (pool.kind == PoolKind::Average) {
          for (std::size_t dy = 0; dy < 2; ++dy)
            for (std::size_t dx = 0; dx < 2; ++dx) grad_in.at(2 * y + dy, 2 * x + dx, ch) += 0.25 * g;
        } else {
          std::size_t by = 0, bx = 0;
          double best = in.at(2 * y, 2 * x, ch);
          for (std::size_t dy = 0; dy < 2; ++dy) {
            for (std::size_t dx = 0; dx < 2; ++dx) {
              if (in.at(2 * y + dy, 2 * x + dx, ch) > best) {
                best = in.at(2 * y + dy, 2 * x + dx, ch);
                by = dy;
                bx = dx;
              }
            }
          }
          grad_in.at(2 * y + by, 2 * x + bx, ch) += g;
        }
      }
    }
  }
  return grad_in;
}

void add_into(Activation& acc, const Activation& g) {
  if (acc.data.size() != g.data.size()) fail(ErrorKind::ShapeMismatch, "gradient shape mismatch");
  for (std::size_t i = 0; i < acc.data.size(); ++i) acc.data[i] += g.data[i];
}

// Rows of a random Gaussian (rows x cols) matrix, orthonormalized by modified
// Gram-Schmidt (rows <= cols).
std::vector<double> orthonormal_rows(std::size_t rows, std::size_t cols, Rng& rng) {
  std::vector<double> m(rows * cols);
  for (double& v : m) v = rng.normal();
  for (std::size_t r = 0; r < rows; ++r) {
    double* row = &m[r * cols];
    for (std::size_t p = 0; p < r; ++p) {
      const double* prev = &m[p * cols];
      double dot = 0.0;
      for (std::size_t k = 0; k < cols; ++k) dot += row[k] * prev[k];
      for (std::size_t k = 0; k < cols; ++k) row[k] -= dot * prev[k];
    }
    double norm = 0.0;
    for (std::size_t k = 0; k < cols; ++k) norm += row[k] * row[k];
    norm = std::sqrt(norm);
    for (std::size_t k = 0; k < cols; ++k) row[k] /= norm;
  }
  return m;
}

ConvLayer random_conv(std::size_t in_ch, std::size_t out_ch, Rng& rng) {
  ConvLayer conv{in_ch, out_ch, {}, {}};
  const auto rows = orthonormal_rows(out_ch, in_ch * 9, rng);
  conv.weight.assign(rows.begin(), rows.end());
  conv.bias.assign(out_ch, 0.0f);
  for (auto& b : conv.bias) b = static_cast<float>(rng.uniform(0.0, 0.1));
  return conv;
}

std::string pool_name(PoolKind kind) { return kind == PoolKind::Average ? "avg" : "max"; }

}  // namespace

FeatureMap to_feature_map(const Activation& a, std::string layer_name) {
  std::vector<float> data(a.data.size());
  for (std::size_t i = 0; i < data.size(); ++i) data[i] = static_cast<float>(a.data[i]);
  return FeatureMap(a.h, a.w, a.c, std::move(data), std::move(layer_name));
}

Activation to_activation(const FeatureMap& f) {
  Activation a(f.h(), f.w(), f.c());
  std::copy(f.data().begin(), f.data().end(), a.data.begin());
  return a;
}

Extractor::Extractor(std::vector<Layer> layers, std::vector<std::string> names, Normalization norm)
    : layers_(std::move(layers)), names_(std::move(names)), norm_(norm) {
  if (layers_.size() != names_.size()) fail(ErrorKind::InvalidArgument, "one name per layer required");
  std::set<std::string> seen;
  std::size_t channels = 3;
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    if (!seen.insert(names_[i]).second) fail(ErrorKind::InvalidArgument, "duplicate layer " + names_[i]);
    if (const auto* conv = std::get_if<ConvLayer>(&layers_[i])) {
      if (conv->in_ch != channels) {
        fail(ErrorKind::InvalidArgument, "layer " + names_[i] + " expects " + std::to_string(conv->in_ch) +
                                             " channels but receives " + std::to_string(channels));
      }
      if (conv->weight.size() != conv->out_ch * conv->in_ch * 9 || conv->bias.size() != conv->out_ch) {
        fail(ErrorKind::InvalidArgument, "layer " + names_[i] + " has mis-sized weights");
      }
      channels = conv->out_ch;
    }
  }
}

Extractor Extractor::builtin(std::uint64_t seed) {
  Rng rng(Rng::derive(seed, "extractor.builtin"));
  std::vector<Layer> layers;
  layers.emplace_back(random_conv(3, 8, rng));
  layers.emplace_back(ReluLayer{});
  layers.emplace_back(PoolLayer{PoolKind::Average});
  layers.emplace_back(random_conv(8, 16, rng));
  layers.emplace_back(ReluLayer{});
  return Extractor(std::move(layers), {"conv1_1", "relu1_1", "pool1", "conv2_1", "relu2_1"});
}

bool Extractor::has_layer(const std::string& name) const noexcept {
  return std::find(names_.begin(), names_.end(), name) != names_.end();
}

std::size_t Extractor::index_of(const std::string& name) const {
  const auto it = std::find(names_.begin(), names_.end(), name);
  if (it == names_.end()) fail(ErrorKind::UnknownLayer, "extractor has no layer '" + name + "'");
  return static_cast<std::size_t>(it - names_.begin());
}

std::string Extractor::deepest_relu() const {
  for (std::size_t i = layers_.size(); i-- > 0;) {
    if (std::holds_alternative<ReluLayer>(layers_[i])) return names_[i];
  }
  return {};
}

void Extractor::set_pooling(PoolKind kind) {
  for (auto& layer : layers_) {
    if (auto* pool = std::get_if<PoolLayer>(&layer)) pool->kind = kind;
  }
}

ForwardTrace Extractor::trace(const Activation& input, std::size_t last_layer) const {
  if (input.c != 3) fail(ErrorKind::ShapeMismatch, "extractor input must have 3 channels");
  if (last_layer >= layers_.size()) fail(ErrorKind::UnknownLayer, "layer index out of range");
  ForwardTrace t;
  t.values.reserve(last_layer + 2);
  t.values.push_back(input);
  for (std::size_t i = 0; i <= last_layer; ++i) {
    const Activation& in = t.values.back();
    Activation out;
    if (const auto* conv = std::get_if<ConvLayer>(&layers_[i])) {
      out = conv_forward(*conv, in);
    } else if (std::holds_alternative<ReluLayer>(layers_[i])) {
      out = relu_forward(in);
    } else {
      if (in.h < 2 || in.w < 2) fail(ErrorKind::ShapeMismatch, "input too small for pooling");
      out = pool_forward(std::get<PoolLayer>(layers_[i]), in);
    }
    t.values.push_back(std::move(out));
  }
  return t;
}

Activation Extractor::backward(const ForwardTrace& trace,
                               const std::map<std::size_t, Activation>& grads) const {
  if (grads.empty()) {
    const auto& in = trace.values.front();
    return Activation(in.h, in.w, in.c);
  }
  const std::size_t deepest = grads.rbegin()->first;
  if (deepest + 1 >= trace.values.size()) fail(ErrorKind::UnknownLayer, "gradient below traced depth");

  Activation grad = grads.rbegin()->second;
  for (std::size_t i = deepest + 1; i-- > 0;) {
    if (i != deepest) {
      if (const auto it = grads.find(i); it != grads.end()) add_into(grad, it->second);
    }
    const Activation& in = trace.values[i];
    if (const auto* conv = std::get_if<ConvLayer>(&layers_[i])) {
      grad = conv_backward(*conv, grad, in.h, in.w);
    } else if (std::holds_alternative<ReluLayer>(layers_[i])) {
      for (std::size_t k = 0; k < grad.data.size(); ++k) {
        if (!(in.data[k] > 0.0)) grad.data[k] = 0.0;
      }
    } else {
      grad = pool_backward(std::get<PoolLayer>(layers_[i]), in, grad);
    }
  }
  return grad;
}

Activation centered_input(std::span<const double> unit_pixels, std::size_t height, std::size_t width,
                          const Normalization& norm) {
  Activation a(height, width, 3);
  for (std::size_t i = 0; i < a.data.size(); ++i) {
    const std::size_t ch = i % 3;
    const float v = static_cast<float>(unit_pixels[i]);
    a.data[i] = static_cast<float>((v - norm.mean[ch]) / norm.std[ch]);
  }
  return a;
}

std::map<std::string, FeatureMap> forward(const Extractor& ex, const ImageTensor& centered,
                                          const std::vector<std::string>& taps) {
  if (taps.empty()) return {};
  std::size_t last = 0;
  for (const auto& name : taps) last = std::max(last, ex.index_of(name));
  Activation input(centered.height(), centered.width(), 3);
  std::copy(centered.data().begin(), centered.data().end(), input.data.begin());
  const auto t = ex.trace(input, last);
  std::map<std::string, FeatureMap> out;
  for (const auto& name : taps) out.emplace(name, to_feature_map(t.values[ex.index_of(name) + 1], name));
  return out;
}

void Extractor::save(const fs::path& dir) const {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) fail(ErrorKind::IoFailure, "cannot create " + dir.string());
  json manifest;
  manifest["format"] = "stylebasis-extractor-1";
  manifest["kernel_layout"] = "out_ch,in_ch,ky,kx";
  manifest["normalization"] = {
      {"mean", {norm_.mean[0], norm_.mean[1], norm_.mean[2]}},
      {"std", {norm_.std[0], norm_.std[1], norm_.std[2]}},
      {"channel_order", "rgb"}};
  std::string pooling = "none";
  json layers = json::array();
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    json entry{{"name", names_[i]}};
    if (const auto* conv = std::get_if<ConvLayer>(&layers_[i])) {
      const std::string wfile = names_[i] + ".weight.sft";
      const std::string bfile = names_[i] + ".bias.sft";
      write_tensor(RawTensor(DType::F32,
                             {static_cast<std::uint32_t>(conv->out_ch),
                              static_cast<std::uint32_t>(conv->in_ch), 3u, 3u},
                             conv->weight),
                   dir / wfile);
      write_tensor(RawTensor(DType::F32, {static_cast<std::uint32_t>(conv->out_ch)}, conv->bias),
                   dir / bfile);
      entry["type"] = "conv";
      entry["in_ch"] = conv->in_ch;
      entry["out_ch"] = conv->out_ch;
      entry["weight"] = wfile;
      entry["bias"] = bfile;
    } else if (std::holds_alternative<ReluLayer>(layers_[i])) {
      entry["type"] = "relu";
    } else {
      pooling = pool_name(std::get<PoolLayer>(layers_[i]).kind);
      entry["type"] = "pool";
    }
    layers.push_back(std::move(entry));
  }
  manifest["pooling"] = pooling;
  manifest["layers"] = std::move(layers);
  std::ofstream out(dir / "manifest.json", std::ios::trunc);
  if (!out) fail(ErrorKind::IoFailure, "cannot write manifest in " + dir.string());
  out << manifest.dump(2) << '\n';
}

Extractor Extractor::load(const fs::path& dir) {
  std::ifstream in(dir / "manifest.json");
  if (!in) fail(ErrorKind::IoFailure, "no manifest.json in " + dir.string());
  try {
    const json manifest = json::parse(in);
    Normalization norm;
    if (manifest.contains("normalization")) {
      const auto& n = manifest.at("normalization");
      for (int ch = 0; ch < 3; ++ch) {
        norm.mean[ch] = n.at("mean").at(ch).get<float>();
        norm.std[ch] = n.at("std").at(ch).get<float>();
      }
    }
    const std::string pooling = manifest.value("pooling", std::string("avg"));
    const PoolKind pool_kind = pooling == "max" ? PoolKind::Max : PoolKind::Average;

    std::vector<Layer> layers;
    std::vector<std::string> names;
    for (const auto& entry : manifest.at("layers")) {
      names.push_back(entry.at("name").get<std::string>());
      const auto type = entry.at("type").get<std::string>();
      if (type == "conv") {
        ConvLayer conv;
        conv.in_ch = entry.at("in_ch").get<std::size_t>();
        conv.out_ch = entry.at("out_ch").get<std::size_t>();
        const auto w = read_tensor(dir / entry.at("weight").get<std::string>());
        const auto b = read_tensor(dir / entry.at("bias").get<std::string>());
        const std::vector<std::uint32_t> wdims{static_cast<std::uint32_t>(conv.out_ch),
                                               static_cast<std::uint32_t>(conv.in_ch), 3u, 3u};
        if (w.dtype != DType::F32 || w.dims != wdims) {
          fail(ErrorKind::BadWeightsFile, "kernel of " + names.back() + " is not (out, in, 3, 3) f32");
        }
        if (b.dtype != DType::F32 || b.numel() != conv.out_ch) {
          fail(ErrorKind::BadWeightsFile, "bias of " + names.back() + " has the wrong size");
        }
        conv.weight = w.values;
        conv.bias = b.values;
        layers.emplace_back(std::move(conv));
      } else if (type == "relu") {
        layers.emplace_back(ReluLayer{});
      } else if (type == "pool") {
        layers.emplace_back(PoolLayer{pool_kind});
      } else {
        fail(ErrorKind::BadWeightsFile, "unknown layer type '" + type + "'");
      }
    }
    return Extractor(std::move(layers), std::move(names), norm);
  } catch (const json::exception& e) {
    fail(ErrorKind::BadWeightsFile, std::string("malformed manifest: ") + e.what());
  }
}

}  // namespace stylebasis
