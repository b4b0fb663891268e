#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "stylebasis/spectral.hpp"
#include "stylebasis/tensor.hpp"

namespace stylebasis {

enum class StyleLabel { Chinese, Oil, Pen, Other };

std::string_view to_string(StyleLabel label) noexcept;
/// Unknown names map to Other.
StyleLabel parse_label(std::string_view text) noexcept;

struct SpectrumVectors {
  std::vector<double> color;   // |DC| per channel, length c
  std::vector<double> stroke;  // |non-DC| in (u, v, channel) order, length (hw - 1) c
};

SpectrumVectors spectrum_vectors(const SpectrumRep& s);

constexpr std::size_t kSummaryBands = 16;

/// v_color of the selected channels followed by, for each of `bands`
/// log-spaced radial frequency bands, the L2 norm of that band's non-DC
/// coefficients per selected channel. An empty channel list selects all.
std::vector<double> summary_vector(const SpectrumRep& s, const std::vector<std::size_t>& channels = {},
                                   std::size_t bands = kSummaryBands);

struct ClusteringStandard {
  std::size_t k = 3;
};

struct StandardVerdict {
  bool rule1 = true;  // no cluster mixes oil with chinese or pen
  bool rule2 = true;  // some cluster has one or two members
  std::size_t violating_pairs = 0;
  std::size_t smallest_cluster = 0;

  bool pass() const noexcept { return rule1 && rule2; }
  /// violating_pairs plus how far the smallest cluster is above two members.
  std::size_t score() const noexcept;
};

/// Throws InvalidArgument for mismatched lengths or k < 2.
StandardVerdict check_standard(const std::vector<std::size_t>& assignment,
                               const std::vector<StyleLabel>& labels, const ClusteringStandard& standard);

struct CmaxOptions {
  ClusteringStandard standard;
  std::uint64_t seed = 0;
  std::size_t max_rounds = 0;  // 0 = until one channel is left
  std::size_t restarts = 10;
};

struct CmaxResult {
  std::vector<std::size_t> channels;  // ascending
  std::vector<std::size_t> removed;   // in removal order
  std::vector<std::size_t> assignment;
};

/// Greedy backward elimination over channels. Each round clusters the
/// channel-restricted FFT summary vectors with k-means; while the standard
/// fails, the channel whose removal gives the lowest violation score is
/// dropped (lowest index on ties). Throws NotFound when the budget runs out,
/// InvalidArgument for fewer styles than clusters or mismatched shapes.
CmaxResult find_cmax(const std::map<std::string, FeatureMap>& styles,
                     const std::map<std::string, StyleLabel>& labels, const CmaxOptions& opts = {});

struct StylePoint {
  std::string style_id;
  StyleLabel label = StyleLabel::Other;
  std::vector<double> v_color;
  std::vector<double> v_stroke;
  double u_color = 0.0;
  double u_stroke = 0.0;
  std::size_t cluster = 0;
};

struct AtlasOptions {
  SpectrumKind kind = SpectrumKind::FFT;
  std::size_t k = 3;
  std::size_t k_neighbors = 5;
  std::uint64_t seed = 0;
  /// Cluster on the full [v_color, v_stroke] vectors instead of summaries.
  bool full_vectors = false;
  /// Restrict summary-vector clustering to these channels (empty = all).
  std::vector<std::size_t> channels;
};

struct AtlasInput {
  std::string style_id;
  StyleLabel label = StyleLabel::Other;
  FeatureMap features;
};

/// Spectrum vectors, 1-D Isomap coordinates of v_color and v_stroke (with
/// k_neighbors capped at n - 1) and k-means clusters, in input order.
/// Throws InvalidArgument for fewer styles than clusters.
std::vector<StylePoint> build_atlas(const std::vector<AtlasInput>& styles, const AtlasOptions& opts = {});

/// style_id,label,u_color,u_stroke,cluster
void write_atlas_csv(const std::filesystem::path& path, const std::vector<StylePoint>& points);
/// Scatter plot of the (u_color, u_stroke) plane, coloured by label.
void write_atlas_svg(const std::filesystem::path& path, const std::vector<StylePoint>& points);

}  // namespace stylebasis
