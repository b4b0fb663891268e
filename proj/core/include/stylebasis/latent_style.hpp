#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

#include "stylebasis/latent.hpp"
#include "stylebasis/spectral.hpp"

namespace stylebasis {

enum class Method { FFT, DCT, PCA, ICA };

std::string_view to_string(Method m) noexcept;
/// Accepts "fft", "dct", "pca", "ica" (case-insensitive).
std::optional<Method> parse_method(std::string_view text) noexcept;

struct DecomposeParams {
  std::size_t n_extreme = 8;
  std::size_t rank = 0;  // PCA; 0 = full
  std::uint64_t seed = 0;
  bool absolute_sum = false;
  bool center = true;  // PCA
};

/// Tagged decomposition result of one style feature map.
using LatentStyle = std::variant<SpectrumRep, PcaRep, IcaRep>;

Method method_of(const LatentStyle& latent) noexcept;
std::size_t basis_count(const LatentStyle& latent) noexcept;

LatentStyle decompose(const FeatureMap& f, Method method, const DecomposeParams& params = {});
/// Projects the latent code back with the method's inverse.
FeatureMap reconstruct(const LatentStyle& latent);

/// Writes the latent as SFT1 tensors plus a key=value `manifest.txt` into `dir`
/// (created if missing).
void save_latent(const LatentStyle& latent, const std::filesystem::path& dir);
LatentStyle load_latent(const std::filesystem::path& dir);

}  // namespace stylebasis
