#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "stylebasis/latent_style.hpp"

namespace stylebasis {

/// Names a set of style bases of a decomposition. `Dc`/`Rest` exist for
/// spectra only, `Stroke`/`Color` for spectra (DC = colour, non-DC = stroke)
/// and ICA (extreme A_sum ranks = stroke).
struct BasisSelector {
  enum class Kind { All, Dc, Rest, Stroke, Color, Ids };
  Kind kind = Kind::All;
  std::vector<std::size_t> ids;  // Kind::Ids only

  static BasisSelector all() { return {Kind::All, {}}; }
  static BasisSelector dc() { return {Kind::Dc, {}}; }
  static BasisSelector rest() { return {Kind::Rest, {}}; }
  static BasisSelector stroke() { return {Kind::Stroke, {}}; }
  static BasisSelector color() { return {Kind::Color, {}}; }
  static BasisSelector of(std::vector<std::size_t> ids) { return {Kind::Ids, std::move(ids)}; }

  friend bool operator==(const BasisSelector&, const BasisSelector&) = default;
};

/// Basis indices picked by `sel`: frequency index u * w + v for spectra,
/// component index for PCA, signal index for ICA. Spectral and PCA results are
/// ascending; ICA stroke/colour sets follow A_sum rank order. Throws
/// UnsupportedSelector or IndexOutOfRange.
std::vector<std::size_t> resolve(const BasisSelector& sel, const LatentStyle& latent);

/// Keep only the selected bases; all others become zero.
struct SingleBasis {
  BasisSelector bases;
  friend bool operator==(const SingleBasis&, const SingleBasis&) = default;
};

/// Multiply the selected bases by `factor`, leaving the others untouched.
struct Intervene {
  BasisSelector bases;
  double factor = 1.0;
  friend bool operator==(const Intervene&, const Intervene&) = default;
};

/// How ICA mixing carries the mixing-matrix entries of exchanged signals.
enum class IcaMixMode {
  Column,  // A(:, j) travels with signal j
  Row,     // A(j, :) is replaced instead
};

/// Compose bases of the working style with bases of `source_style_id`.
/// Slots in `from_self` keep the working style's bases; the other style's
/// `from_other` bases fill the remaining slots (same index for spectra; for
/// PCA/ICA the complement of `from_self`, in order). Uncovered slots are
/// zeroed. For PCA/ICA `offset_from_other` re-adds the other style's channel
/// means instead of the working style's.
struct Mix {
  std::string source_style_id;
  BasisSelector from_self;
  BasisSelector from_other;
  bool offset_from_other = false;
  friend bool operator==(const Mix&, const Mix&) = default;
};

/// Role-based mix used by the text grammar: stroke bases of one style with
/// colour bases of another. Lowered to `Mix` against whichever of the two is
/// the primary style.
struct MixStyles {
  std::string stroke_from;
  std::string color_from;
  friend bool operator==(const MixStyles&, const MixStyles&) = default;
};

using ControlOp = std::variant<SingleBasis, Intervene, Mix, MixStyles>;

struct ControlSpec {
  Method method = Method::FFT;
  DecomposeParams params;
  IcaMixMode ica_mix_mode = IcaMixMode::Column;
  std::vector<ControlOp> ops;  // applied in order; empty = identity

  bool is_identity() const noexcept { return ops.empty(); }
};

/// Style feature maps participating in one control run, all the same shape.
class StyleBank {
 public:
  /// Throws ShapeMismatch if `f` differs in shape from existing entries.
  void add(const std::string& id, FeatureMap f);
  /// Caches a decomposition; it must have been computed from the entry's map.
  void set_latent(const std::string& id, LatentStyle latent);

  bool contains(const std::string& id) const noexcept { return entries_.count(id) != 0; }
  std::size_t size() const noexcept { return entries_.size(); }
  /// Throws UnknownStyleId.
  const FeatureMap& feature_map(const std::string& id) const;
  /// Cached latent if it matches `method`, otherwise a fresh decomposition.
  LatentStyle latent(const std::string& id, Method method, const DecomposeParams& params) const;

 private:
  struct Entry {
    FeatureMap map;
    std::optional<LatentStyle> latent;
  };
  std::map<std::string, Entry> entries_;
};

/// f -> g -> f^{-1} for the primary style. An identity spec returns the
/// primary feature map unchanged without decomposing it.
FeatureMap apply_control(const StyleBank& bank, const std::string& primary_style,
                         const ControlSpec& spec);

/// Latent-space operations, exposed for direct use.
LatentStyle intervene(const LatentStyle& latent, const std::vector<std::size_t>& ids, double factor);
LatentStyle single_basis(const LatentStyle& latent, const std::vector<std::size_t>& ids);
LatentStyle mix_latents(const LatentStyle& self, const LatentStyle& other, const Mix& op,
                        IcaMixMode mode = IcaMixMode::Column);

/// Stroke bases of `stroke_from` scaled by `stroke_intensity`, colour bases of
/// `color_from`. Supports FFT, DCT and ICA.
FeatureMap mix(const StyleBank& bank, const std::string& stroke_from, const std::string& color_from,
               double stroke_intensity, Method method, const DecomposeParams& params = {},
               IcaMixMode mode = IcaMixMode::Column);

/// Pointwise convex combination. Throws ShapeMismatch or BadWeights (negative
/// weights, or a sum off 1 by more than 1e-6).
FeatureMap interpolate(const std::vector<FeatureMap>& maps, const std::vector<double>& weights);

struct Rect {
  std::size_t y0, x0, y1, x1;  // half-open [y0, y1) x [x0, x1)
};

/// Scales every channel inside `rect` by `factor` in feature-map space.
FeatureMap region_intervene(const FeatureMap& f, const Rect& rect, double factor);

/// Zeroes channels outside `keep`; the shape is preserved.
FeatureMap channel_subset(const FeatureMap& f, const std::vector<std::size_t>& keep);

}  // namespace stylebasis
