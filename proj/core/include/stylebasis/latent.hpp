#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "stylebasis/tensor.hpp"

namespace stylebasis {

// A feature map is handled as an (hw x c) matrix: one row per spatial
// position, one column per channel. This is exactly FeatureMap's storage.

struct PcaOptions {
  std::size_t rank = 0;  // 0 selects min(hw, c)
  bool center = true;    // subtract per-channel means before the SVD
};

/// Thin SVD of the centered (hw x c) matrix F = U D V^T with coefficients
/// H = U^T F, so that F = U H (+ mean).
struct PcaRep {
  Eigen::MatrixXf U;  // hw x k, orthonormal columns
  Eigen::VectorXf D;  // k, descending, nonnegative
  Eigen::MatrixXf V;  // c x k
  Eigen::MatrixXf H;  // k x c
  Eigen::VectorXf mean;  // c, zero when centering is off
  std::size_t h = 0, w = 0, c = 0, k = 0;
  bool centered = true;
  std::string source_layer;

  std::size_t basis_count() const noexcept { return k; }
};

/// Throws InvalidArgument for a rank outside [1, min(hw, c)] and
/// ConvergenceFailure if the SVD does not converge.
PcaRep pca_decompose(const FeatureMap& f, const PcaOptions& options = {});

/// F_hat = U * H_mod + mean, reshaped to h x w x c. Throws ShapeMismatch
/// unless H_mod is k x c.
FeatureMap pca_project_back(const PcaRep& rep, const Eigen::MatrixXf& H_mod);

struct IcaOptions {
  std::size_t n_extreme = 8;
  std::uint64_t seed = 0;
  std::size_t max_iterations = 10000;
  double tolerance = 1e-4;
  bool absolute_sum = false;  // rank signals by column sums of |A| instead of A
};

/// FastICA factors of the centered channel mixtures X = F^T (c x hw):
/// X = A * S with S holding c independent signals.
struct IcaRep {
  Eigen::MatrixXf S;     // c x hw
  Eigen::MatrixXf A;     // c x c, A(i, j) = weight of signal j in channel i
  Eigen::VectorXf mean;  // c
  std::vector<double> A_sum;     // column sums of A (or |A|)
  std::vector<std::size_t> arg;  // ascending order of A_sum, ties by lower index
  std::size_t n_extreme = 8;
  std::size_t h = 0, w = 0, c = 0;
  std::uint64_t seed = 0;
  std::size_t iterations = 0;
  bool absolute_sum = false;
  std::string source_layer;

  std::size_t basis_count() const noexcept { return c; }
};

/// Constant channels are not unmixed: each keeps its own slot with a zero
/// signal and A(ch, ch) = 1. Covariance directions with eigenvalue below 1e-9
/// of the largest are not unmixed either; they fill the remaining slots as
/// residual signals with their eigenvectors as mixing columns, so the
/// reconstruction stays exact for rank-deficient input.
/// Throws InvalidArgument when c < 2, hw <= c or n_extreme > c/2;
/// DegenerateInput when every channel is constant; and
/// ConvergenceFailure if the fixed-point iteration exceeds max_iterations.
IcaRep ica_decompose(const FeatureMap& f, const IcaOptions& options = {});

/// (A_mod * S_mod)^T + mean, reshaped to h x w x c.
FeatureMap ica_project_back(const IcaRep& rep, const Eigen::MatrixXf& S_mod,
                            const Eigen::MatrixXf& A_mod);

/// Stable ascending argsort of the column sums.
std::vector<std::size_t> ascending_order(const std::vector<double>& values);
std::vector<double> column_sums(const Eigen::MatrixXf& A, bool absolute);

struct BasisSplit {
  std::vector<std::size_t> stroke_ids;
  std::vector<std::size_t> color_ids;
};

/// Stroke basis = signals ranked in [0, n-1] and [c-n, c-1] of the ascending
/// A_sum order; colour basis = the rest. Both lists follow rank order.
BasisSplit split_basis(const IcaRep& rep);
BasisSplit split_basis(const std::vector<std::size_t>& arg, std::size_t n_extreme);

}  // namespace stylebasis
