#include "cli/commands.hpp"

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "stylebasis/atlas.hpp"
#include "stylebasis/binarize.hpp"
#include "stylebasis/control.hpp"
#include "stylebasis/control_spec.hpp"
#include "stylebasis/error.hpp"
#include "stylebasis/extractor.hpp"
#include "stylebasis/image_io.hpp"
#include "stylebasis/latent_style.hpp"
#include "stylebasis/tensor_io.hpp"
#include "stylebasis/transfer.hpp"

namespace stylebasis::cli {

namespace fs = std::filesystem;

namespace {

constexpr const char* kDefaultLayer = "relu4_1";

struct TransferFlags {
  std::string content;
  std::string out;
  std::string layer = kDefaultLayer;
  std::string content_layer;
  std::string weights;
  std::string pooling;
  std::string init = "content";
  std::string size;
  double alpha = 1.0;
  double beta = 1e3;
  double lr = 0.02;
  std::size_t iters = 500;
  std::uint64_t seed = 0;
};

void add_transfer_flags(CLI::App* sub, TransferFlags& f) {
  sub->add_option("--content", f.content, "Content image (PNG or PPM)")->required();
  sub->add_option("--out", f.out, "Output PNG")->required();
  sub->add_option("--layer", f.layer, "Style (and default content) layer")->capture_default_str();
  sub->add_option("--content-layer", f.content_layer, "Content layer (defaults to --layer)");
  sub->add_option("--alpha", f.alpha, "Content weight")->capture_default_str();
  sub->add_option("--beta", f.beta, "Style weight")->capture_default_str();
  sub->add_option("--iters", f.iters, "Optimizer iterations")->capture_default_str();
  sub->add_option("--lr", f.lr, "Adam step size")->capture_default_str();
  sub->add_option("--seed", f.seed, "Run seed")->capture_default_str();
  sub->add_option("--init", f.init, "Initial image")
      ->check(CLI::IsMember({"content", "noise"}))
      ->capture_default_str();
  sub->add_option("--weights", f.weights, "Extractor weights directory (default: built-in)");
  sub->add_option("--pooling", f.pooling, "Override pooling")->check(CLI::IsMember({"avg", "max"}));
  sub->add_option("--size", f.size, "Resize the content image to HxW (or N for NxN)");
}

std::optional<ImageSize> parse_size(const std::string& text) {
  if (text.empty()) return std::nullopt;
  const auto x = text.find('x');
  const auto num = [&](std::string_view s) {
    std::size_t v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size() || v == 0) {
      fail(ErrorKind::InvalidArgument, "bad size '" + text + "' (expected HxW or N)");
    }
    return v;
  };
  const std::string_view sv(text);
  if (x == std::string::npos) {
    const auto n = num(sv);
    return ImageSize{n, n};
  }
  return ImageSize{num(sv.substr(0, x)), num(sv.substr(x + 1))};
}

Extractor resolve_extractor(const TransferFlags& f, std::ostream& err) {
  Extractor ex = f.weights.empty() ? Extractor::builtin() : Extractor::load(f.weights);
  if (!f.pooling.empty()) {
    ex.set_pooling(f.pooling == "max" ? PoolKind::Max : PoolKind::Average);
  } else {
    for (const auto& layer : ex.layers()) {
      if (const auto* pool = std::get_if<PoolLayer>(&layer); pool && pool->kind == PoolKind::Max) {
        err << "warning: weights use max pooling; pass --pooling avg for the smoother average-pooled variant\n";
        break;
      }
    }
  }
  return ex;
}

/// The default layer falls back to the extractor's deepest ReLU when absent;
/// an explicitly requested layer must exist.
std::string resolve_layer(const Extractor& ex, const std::string& layer, bool explicit_layer, std::ostream& err) {
  if (ex.has_layer(layer) || explicit_layer) {
    ex.index_of(layer);
    return layer;
  }
  const auto fallback = ex.deepest_relu();
  if (fallback.empty()) fail(ErrorKind::UnknownLayer, "extractor has no ReLU layer to fall back to");
  err << "warning: extractor has no layer " << layer << "; using " << fallback << "\n";
  return fallback;
}

LossConfig loss_config(const Extractor& ex, const TransferFlags& f, bool explicit_layer, std::ostream& err) {
  LossConfig cfg;
  cfg.alpha = f.alpha;
  cfg.beta = f.beta;
  const auto layer = resolve_layer(ex, f.layer, explicit_layer, err);
  cfg.style_layers = {layer};
  cfg.content_layer = f.content_layer.empty() ? layer : f.content_layer;
  validate(cfg, ex);
  return cfg;
}

TransferOptions transfer_options(const TransferFlags& f) {
  TransferOptions opts;
  opts.iterations = f.iters;
  opts.learning_rate = f.lr;
  opts.seed = f.seed;
  opts.init = f.init == "noise" ? InitKind::Noise : InitKind::Content;
  return opts;
}

ImageTensor load_content(const TransferFlags& f) { return load_image(f.content, parse_size(f.size)); }

ImageTensor load_style(const std::string& path, const ImageTensor& content) {
  return load_image(path, ImageSize{content.height(), content.width()});
}

fs::path sibling(const fs::path& out, const std::string& suffix) {
  fs::path p = out;
  p.replace_extension(suffix);
  return p;
}

void ensure_parent(const fs::path& p) {
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
}

/// The resolved flags of `sub`, one `sub.key=value` line each.
std::string resolved_config(const CLI::App& app, const CLI::App& sub) {
  std::istringstream all(app.config_to_str(true, false));
  std::ostringstream mine;
  const std::string prefix = sub.get_name() + ".";
  for (std::string line; std::getline(all, line);) {
    // Unset options are left out so a replay keeps their defaults.
    if (line.rfind(prefix, 0) == 0 && !line.ends_with("=\"\"")) mine << line << '\n';
  }
  return mine.str();
}

void write_text(const fs::path& path, const std::string& text) {
  ensure_parent(path);
  std::ofstream out(path, std::ios::trunc);
  if (!out) fail(ErrorKind::IoFailure, "cannot write " + path.string());
  out << text;
}

/// Replaces the value of `key` in a resolved config.
std::string with_value(const std::string& config, const std::string& key, const std::string& value) {
  std::istringstream in(config);
  std::ostringstream out;
  for (std::string line; std::getline(in, line);) {
    if (line.rfind(key + "=", 0) == 0) line = key + "=" + value;
    out << line << '\n';
  }
  return out.str();
}

std::string quote(const std::string& s) { return "\"" + s + "\""; }

/// Resolved config with the layer actually used, so a replay never depends on
/// the fallback.
std::string run_config(const CLI::App& app, const CLI::App& sub, const LossConfig& cfg) {
  return with_value(resolved_config(app, sub), sub.get_name() + ".layer", quote(cfg.style_layers.front()));
}

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

void drop_empty(std::vector<std::string>& v) {
  v.erase(std::remove(v.begin(), v.end(), std::string{}), v.end());
}

void save_run(const TransferResult& result, const fs::path& out, const std::string& config) {
  ensure_parent(out);
  save_image(result.image, out);
  write_loss_csv(sibling(out, ".loss.csv"), result.history);
  write_text(sibling(out, ".run.cfg"), config);
}

void report(std::ostream& out, const fs::path& path, const TransferResult& r) {
  out << "wrote " << path.string();
  if (!r.history.empty()) {
    out << " (loss " << r.history.front().total << " -> " << r.history.back().total << " over "
        << r.history.size() << " iterations)";
  }
  out << '\n';
}

// ---- decompose / recompose ----

struct DecomposeFlags {
  std::string input, out, method;
  std::size_t n = 8, rank = 0;
  std::uint64_t seed = 0;
  bool abs = false, no_center = false;
};

int cmd_decompose(const CLI::App& app, const CLI::App& sub, const DecomposeFlags& f, std::ostream& out) {
  const auto f_in = read_feature_map(f.input);
  DecomposeParams params;
  params.n_extreme = f.n;
  params.rank = f.rank;
  params.seed = f.seed;
  params.absolute_sum = f.abs;
  params.center = !f.no_center;
  const auto method = *parse_method(f.method);
  const auto latent = decompose(f_in, method, params);
  save_latent(latent, f.out);
  write_text(fs::path(f.out) / "run.cfg", resolved_config(app, sub));
  out << "wrote " << to_string(method) << " decomposition with " << basis_count(latent) << " bases to " << f.out
      << '\n';
  return 0;
}

int cmd_recompose(const std::string& input, const std::string& output, std::ostream& out) {
  const auto f = reconstruct(load_latent(input));
  ensure_parent(output);
  write_tensor(f, output);
  out << "wrote " << output << " (" << f.h() << "x" << f.w() << "x" << f.c() << ")\n";
  return 0;
}

// ---- transfer ----

struct StyleFlags {
  std::string style;
  std::string style_id = "style";
  std::vector<std::string> with;
  std::string control;
};

int cmd_transfer(const CLI::App& app, const CLI::App& sub, const TransferFlags& f, StyleFlags s,
                 std::ostream& out, std::ostream& err) {
  drop_empty(s.with);
  const Extractor ex = resolve_extractor(f, err);
  const LossConfig cfg = loss_config(ex, f, sub.count("--layer") > 0, err);
  const ImageTensor content = load_content(f);
  const ImageTensor style = load_style(s.style, content);

  std::map<std::string, FeatureMap> targets;
  if (s.control.empty()) {
    targets = style_features(ex, style, cfg.style_layers);
  } else {
    const ControlSpec spec = parse_control_spec(s.control);
    std::vector<std::pair<std::string, ImageTensor>> styles{{s.style_id, style}};
    for (const auto& entry : s.with) {
      const auto eq = entry.find('=');
      if (eq == std::string::npos || eq == 0) {
        fail(ErrorKind::InvalidArgument, "--with expects id=path, got '" + entry + "'");
      }
      styles.emplace_back(entry.substr(0, eq), load_style(entry.substr(eq + 1), content));
    }
    targets = controlled_style_features(ex, styles, s.style_id, cfg.style_layers, spec);
  }
  const auto result = transfer(content, targets, ex, cfg, transfer_options(f));
  save_run(result, f.out, run_config(app, sub, cfg));
  report(out, f.out, result);
  return 0;
}

// ---- mix ----

struct MixFlags {
  std::string stroke_from, color_from, method = "fft", interpolate;
  std::vector<double> intensities{1.0};
  std::size_t n = 8;
  bool row_mode = false;
};

int cmd_mix(const CLI::App& app, const CLI::App& sub, const TransferFlags& f, const MixFlags& m,
            std::ostream& out, std::ostream& err) {
  const Extractor ex = resolve_extractor(f, err);
  const LossConfig cfg = loss_config(ex, f, sub.count("--layer") > 0, err);
  const ImageTensor content = load_content(f);
  const auto stroke = style_features(ex, load_style(m.stroke_from, content), cfg.style_layers);
  const auto color = style_features(ex, load_style(m.color_from, content), cfg.style_layers);
  const std::string config = run_config(app, sub, cfg);

  if (!m.interpolate.empty()) {
    std::vector<double> weights;
    std::istringstream in(m.interpolate);
    for (std::string part; std::getline(in, part, ',');) {
      double w = 0.0;
      const auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), w);
      if (ec != std::errc{} || ptr != part.data() + part.size()) {
        fail(ErrorKind::InvalidArgument, "bad --interpolate weight '" + part + "'");
      }
      weights.push_back(w);
    }
    if (weights.size() != 2) fail(ErrorKind::InvalidArgument, "--interpolate expects two weights w1,w2");
    std::map<std::string, FeatureMap> targets;
    for (const auto& layer : cfg.style_layers) {
      targets.emplace(layer, interpolate({stroke.at(layer), color.at(layer)}, weights));
    }
    const auto result = transfer(content, targets, ex, cfg, transfer_options(f));
    save_run(result, f.out, config);
    report(out, f.out, result);
    return 0;
  }

  const auto method = *parse_method(m.method);
  DecomposeParams params;
  params.n_extreme = m.n;
  params.seed = f.seed;
  const auto mode = m.row_mode ? IcaMixMode::Row : IcaMixMode::Column;
  std::map<std::string, StyleBank> banks;
  for (const auto& layer : cfg.style_layers) {
    banks[layer].add("stroke", stroke.at(layer));
    banks[layer].add("color", color.at(layer));
  }
  const bool sweep = m.intensities.size() > 1;
  for (double intensity : m.intensities) {
    std::map<std::string, FeatureMap> targets;
    for (const auto& layer : cfg.style_layers) {
      targets.emplace(layer, mix(banks.at(layer), "stroke", "color", intensity, method, params, mode));
    }
    fs::path path = f.out;
    std::string cfg_text = config;
    if (sweep) {
      const fs::path base(f.out);
      path = base.parent_path() / (base.stem().string() + "_I" + format_double(intensity) + base.extension().string());
      cfg_text = with_value(cfg_text, sub.get_name() + ".I", format_double(intensity));
      cfg_text = with_value(cfg_text, sub.get_name() + ".out", quote(path.string()));
    }
    const auto result = transfer(content, targets, ex, cfg, transfer_options(f));
    save_run(result, path, cfg_text);
    report(out, path, result);
  }
  return 0;
}

// ---- sketch ----

struct SketchFlags {
  std::string style, binarize = "otsu", method = "fft", control, styled_out;
  double intensity = 1.0;
};

Threshold parse_threshold(const std::string& text) {
  if (text == "otsu") return Threshold::otsu();
  std::string_view v(text);
  if (v.rfind("fixed:", 0) == 0) v.remove_prefix(6);
  double t = 0.0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), t);
  if (ec != std::errc{} || ptr != v.data() + v.size() || t < 0.0 || t > 1.0) {
    fail(ErrorKind::InvalidArgument, "--binarize expects otsu or fixed:<t> with t in [0, 1]");
  }
  return Threshold::fixed(t);
}

int cmd_sketch(const CLI::App& app, const CLI::App& sub, const TransferFlags& f, const SketchFlags& s,
               std::ostream& out, std::ostream& err) {
  const Threshold threshold = parse_threshold(s.binarize);
  const Extractor ex = resolve_extractor(f, err);
  const LossConfig cfg = loss_config(ex, f, sub.count("--layer") > 0, err);
  const ImageTensor content = load_content(f);
  const ImageTensor style = load_style(s.style, content);

  std::string control = s.control;
  if (control.empty() && s.intensity != 1.0) control = s.method + ": scale(stroke)=" + format_double(s.intensity);
  std::map<std::string, FeatureMap> targets;
  if (control.empty()) {
    targets = style_features(ex, style, cfg.style_layers);
  } else {
    targets = controlled_style_features(ex, {{"style", style}}, "style", cfg.style_layers,
                                        parse_control_spec(control));
  }
  auto result = transfer(content, targets, ex, cfg, transfer_options(f));
  if (!s.styled_out.empty()) {
    ensure_parent(s.styled_out);
    save_image(result.image, s.styled_out);
  }
  result.image = binarize(result.image, threshold);
  save_run(result, f.out, run_config(app, sub, cfg));
  std::size_t dark = 0;
  for (std::size_t p = 0; p < result.image.size(); p += 3) dark += result.image.data()[p] == 0.0f ? 1 : 0;
  out << "wrote " << f.out << " (" << dark << " dark pixels of " << result.image.size() / 3 << ")\n";
  return 0;
}

// ---- atlas ----

struct AtlasFlags {
  std::string styles, labels, out, embed = "isomap", cluster = "k=3", method = "fft";
  std::string layer = kDefaultLayer, weights, pooling;
  std::size_t k_neighbors = 5, size = 32;
  std::uint64_t seed = 0;
  bool cmax = false, full_vectors = false;
};

std::map<std::string, StyleLabel> read_labels(const fs::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::IoFailure, "cannot read labels " + path.string());
  std::map<std::string, StyleLabel> labels;
  for (std::string line; std::getline(in, line);) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#' || line.rfind("style_id,", 0) == 0) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) fail(ErrorKind::InvalidArgument, "label line needs id,label: " + line);
    labels[line.substr(0, comma)] = parse_label(line.substr(comma + 1));
  }
  return labels;
}

std::size_t parse_cluster_k(const std::string& text) {
  std::string_view v(text);
  if (v.rfind("k=", 0) == 0) v.remove_prefix(2);
  std::size_t k = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), k);
  if (ec != std::errc{} || ptr != v.data() + v.size() || k < 2) {
    fail(ErrorKind::InvalidArgument, "--cluster expects k=<n> with n >= 2");
  }
  return k;
}

int cmd_atlas(const CLI::App& app, const CLI::App& sub, const AtlasFlags& a, std::ostream& out,
              std::ostream& err) {
  const std::size_t k = parse_cluster_k(a.cluster);
  const auto labels = read_labels(a.labels);

  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(a.styles)) {
    const auto ext = entry.path().extension().string();
    if (ext == ".png" || ext == ".ppm" || ext == ".sft") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  if (files.size() < k) {
    fail(ErrorKind::InvalidArgument, "atlas needs at least k=" + std::to_string(k) + " styles, found " +
                                         std::to_string(files.size()));
  }

  std::optional<Extractor> ex;
  std::string layer;
  std::vector<AtlasInput> inputs;
  for (const auto& file : files) {
    AtlasInput in;
    in.style_id = file.stem().string();
    const auto it = labels.find(in.style_id);
    in.label = it == labels.end() ? StyleLabel::Other : it->second;
    if (file.extension() == ".sft") {
      in.features = read_feature_map(file);
    } else {
      if (!ex) {
        TransferFlags tf;
        tf.weights = a.weights;
        tf.pooling = a.pooling;
        ex = resolve_extractor(tf, err);
        layer = resolve_layer(*ex, a.layer, sub.count("--layer") > 0, err);
      }
      const auto img = load_image(file, ImageSize{a.size, a.size});
      in.features = style_features(*ex, img, {layer}).at(layer);
    }
    inputs.push_back(std::move(in));
  }

  AtlasOptions opts;
  opts.kind = a.method == "dct" ? SpectrumKind::DCT : SpectrumKind::FFT;
  opts.k = k;
  opts.k_neighbors = a.k_neighbors;
  opts.seed = a.seed;
  opts.full_vectors = a.full_vectors;

  std::vector<StylePoint> points;
  try {
    points = build_atlas(inputs, opts);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::DisconnectedGraph) throw;
    throw Error(e.kind(), std::string(e.what()) + "; try a larger --k-neighbors");
  }

  const fs::path prefix(a.out);
  ensure_parent(prefix);
  write_atlas_csv(prefix.string() + ".csv", points);
  write_atlas_svg(prefix.string() + ".svg", points);
  std::string config = resolved_config(app, sub);
  if (!layer.empty()) config = with_value(config, sub.get_name() + ".layer", quote(layer));
  write_text(prefix.string() + ".run.cfg", config);

  std::vector<std::size_t> assignment;
  std::vector<StyleLabel> point_labels;
  for (const auto& p : points) {
    assignment.push_back(p.cluster);
    point_labels.push_back(p.label);
  }
  const auto verdict = check_standard(assignment, point_labels, ClusteringStandard{k});
  const auto word = [](bool ok) { return ok ? "pass" : "fail"; };
  out << "wrote " << prefix.string() << ".csv and " << prefix.string() << ".svg\n"
      << "standard: " << word(verdict.pass()) << " (rule1 " << word(verdict.rule1) << ", rule2 "
      << word(verdict.rule2) << ")\n";

  if (a.cmax) {
    std::map<std::string, FeatureMap> maps;
    std::map<std::string, StyleLabel> by_id;
    for (const auto& in : inputs) {
      maps.emplace(in.style_id, in.features);
      by_id.emplace(in.style_id, in.label);
    }
    CmaxOptions copts;
    copts.standard.k = k;
    copts.seed = a.seed;
    const auto cmax = find_cmax(maps, by_id, copts);
    std::ostringstream text;
    for (std::size_t i = 0; i < cmax.channels.size(); ++i) text << (i ? "," : "") << cmax.channels[i];
    text << '\n';
    write_text(prefix.string() + ".cmax.txt", text.str());
    out << "C_max: " << cmax.channels.size() << " channels (" << cmax.removed.size() << " removed)\n";
  }
  return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Controllable neural style transfer through style decomposition", "stylebasis"};
  app.set_config("--config", "", "Read flags from a key=value file written by an earlier run");
  app.require_subcommand(1);
  app.failure_message(CLI::FailureMessage::help);

  const std::vector<std::string> methods{"fft", "dct", "pca", "ica"};

  DecomposeFlags dec;
  auto* decompose_cmd = app.add_subcommand("decompose", "Decompose a feature tensor into style bases");
  decompose_cmd->add_option("--input", dec.input, "Feature map (SFT1)")->required();
  decompose_cmd->add_option("--method", dec.method, "fft|dct|pca|ica")
      ->required()
      ->check(CLI::IsMember(methods, CLI::ignore_case));
  decompose_cmd->add_option("--out", dec.out, "Output directory")->required();
  decompose_cmd->add_option("--n", dec.n, "ICA extreme count per side")->capture_default_str();
  decompose_cmd->add_option("--rank", dec.rank, "PCA rank (0 = full)")->capture_default_str();
  decompose_cmd->add_option("--seed", dec.seed, "ICA seed")->capture_default_str();
  decompose_cmd->add_flag("--abs", dec.abs, "Rank ICA signals by absolute mixing sums");
  decompose_cmd->add_flag("--no-center", dec.no_center, "PCA without mean removal");

  std::string rec_in, rec_out;
  auto* recompose_cmd = app.add_subcommand("recompose", "Rebuild a feature tensor from a decomposition");
  recompose_cmd->add_option("--input", rec_in, "Decomposition directory")->required();
  recompose_cmd->add_option("--out", rec_out, "Output feature map (SFT1)")->required();

  TransferFlags tr;
  StyleFlags trs;
  auto* transfer_cmd = app.add_subcommand("transfer", "Style transfer with optional style control");
  add_transfer_flags(transfer_cmd, tr);
  transfer_cmd->add_option("--style", trs.style, "Style image")->required();
  transfer_cmd->add_option("--style-id", trs.style_id, "Id of --style in control specs")->capture_default_str();
  transfer_cmd->add_option("--with", trs.with, "Extra style for mixing, id=path (repeatable)");
  transfer_cmd->add_option("--control", trs.control, "Control spec, e.g. \"fft: keep=dc\"");

  TransferFlags mx;
  MixFlags mxf;
  auto* mix_cmd = app.add_subcommand("mix", "Stroke of one style, colour of another");
  add_transfer_flags(mix_cmd, mx);
  mix_cmd->add_option("--stroke-from", mxf.stroke_from, "Style image providing stroke")->required();
  mix_cmd->add_option("--color-from", mxf.color_from, "Style image providing colour")->required();
  mix_cmd->add_option("--method", mxf.method, "fft|dct|ica")
      ->check(CLI::IsMember({"fft", "dct", "ica"}, CLI::ignore_case))
      ->capture_default_str();
  mix_cmd->add_option("--I", mxf.intensities, "Stroke intensity; several values run a sweep")
      ->expected(1, CLI::detail::expected_max_vector_size)
      ->delimiter(',')
      ->capture_default_str();
  mix_cmd->add_option("--n", mxf.n, "ICA extreme count per side")->capture_default_str();
  mix_cmd->add_flag("--row-mode", mxf.row_mode, "ICA: exchange mixing-matrix rows");
  mix_cmd->add_option("--interpolate", mxf.interpolate, "Feature interpolation baseline w1,w2");

  TransferFlags sk;
  SketchFlags skf;
  auto* sketch_cmd = app.add_subcommand("sketch", "Style transfer followed by binarization");
  add_transfer_flags(sketch_cmd, sk);
  sketch_cmd->add_option("--style", skf.style, "Sketch style image")->required();
  sketch_cmd->add_option("--binarize", skf.binarize, "otsu or fixed:<t>")->capture_default_str();
  sketch_cmd->add_option("--I", skf.intensity, "Stroke intensity")->capture_default_str();
  sketch_cmd->add_option("--method", skf.method, "Decomposition for --I")
      ->check(CLI::IsMember({"fft", "dct", "ica"}, CLI::ignore_case))
      ->capture_default_str();
  sketch_cmd->add_option("--control", skf.control, "Control spec (overrides --I)");
  sketch_cmd->add_option("--styled-out", skf.styled_out, "Also save the image before binarization");

  AtlasFlags at;
  auto* atlas_cmd = app.add_subcommand("atlas", "Embed and cluster styles by their spectra");
  atlas_cmd->add_option("--styles", at.styles, "Directory of style images or feature tensors")->required();
  atlas_cmd->add_option("--labels", at.labels, "CSV of style_id,label")->required();
  atlas_cmd->add_option("--out", at.out, "Output prefix for .csv/.svg")->required();
  atlas_cmd->add_option("--embed", at.embed, "Embedding")->check(CLI::IsMember({"isomap"}))->capture_default_str();
  atlas_cmd->add_option("--cluster", at.cluster, "Clustering, k=<n>")->capture_default_str();
  atlas_cmd->add_option("--method", at.method, "fft|dct")
      ->check(CLI::IsMember({"fft", "dct"}, CLI::ignore_case))
      ->capture_default_str();
  atlas_cmd->add_option("--k-neighbors", at.k_neighbors, "Isomap neighbourhood size")->capture_default_str();
  atlas_cmd->add_option("--seed", at.seed, "k-means seed")->capture_default_str();
  atlas_cmd->add_option("--layer", at.layer, "Layer for image inputs")->capture_default_str();
  atlas_cmd->add_option("--weights", at.weights, "Extractor weights directory (default: built-in)");
  atlas_cmd->add_option("--pooling", at.pooling, "Override pooling")->check(CLI::IsMember({"avg", "max"}));
  atlas_cmd->add_option("--size", at.size, "Image inputs are resized to NxN")->capture_default_str();
  atlas_cmd->add_flag("--cmax", at.cmax, "Also search the largest passing channel subset");
  atlas_cmd->add_flag("--full-vectors", at.full_vectors, "Cluster on full spectrum vectors");

  std::string demo_out;
  std::size_t demo_size = 32;
  auto* demo_cmd = app.add_subcommand("demo-pair", "Write the built-in content/style test pair");
  demo_cmd->add_option("--out", demo_out, "Output directory")->required();
  demo_cmd->add_option("--size", demo_size, "Image side length")->capture_default_str();

  std::string export_out;
  auto* export_cmd = app.add_subcommand("export-builtin-weights", "Write the built-in extractor weights");
  export_cmd->add_option("--out", export_out, "Output directory")->required();

  for (auto* sub : app.get_subcommands({})) sub->fallthrough();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    const auto subs = app.get_subcommands();
    out << (subs.empty() ? app.help() : subs.front()->help());
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    const auto subs = app.get_subcommands();
    err << "error: " << e.what() << "\n\n" << (subs.empty() ? app.help() : subs.front()->help());
    return static_cast<int>(ErrorCategory::Usage);
  }

  try {
    if (decompose_cmd->parsed()) return cmd_decompose(app, *decompose_cmd, dec, out);
    if (recompose_cmd->parsed()) return cmd_recompose(rec_in, rec_out, out);
    if (transfer_cmd->parsed()) return cmd_transfer(app, *transfer_cmd, tr, trs, out, err);
    if (mix_cmd->parsed()) return cmd_mix(app, *mix_cmd, mx, mxf, out, err);
    if (sketch_cmd->parsed()) return cmd_sketch(app, *sketch_cmd, sk, skf, out, err);
    if (atlas_cmd->parsed()) return cmd_atlas(app, *atlas_cmd, at, out, err);
    if (demo_cmd->parsed()) {
      fs::create_directories(demo_out);
      save_image(demo_content(demo_size), fs::path(demo_out) / "content.png");
      save_image(demo_style(demo_size), fs::path(demo_out) / "style.png");
      out << "wrote " << demo_out << "/content.png and " << demo_out << "/style.png\n";
      return 0;
    }
    if (export_cmd->parsed()) {
      Extractor::builtin().save(export_out);
      out << "wrote built-in extractor weights to " << export_out << '\n';
      return 0;
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return static_cast<int>(e.category());
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return static_cast<int>(ErrorCategory::Data);
  }
  return static_cast<int>(ErrorCategory::Usage);
}

}  // namespace stylebasis::cli
