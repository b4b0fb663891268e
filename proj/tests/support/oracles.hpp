#pragma once

// Independent reference implementations used by the tests. They favour the
// plainest possible formulation (direct sums, brute force) over speed and
// share no code with the library beyond its data types.

#include <array>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

#include "stylebasis/tensor.hpp"

namespace oracle {

using stylebasis::FeatureMap;

/// Seeded uniform map in [lo, hi).
FeatureMap random_map(std::size_t h, std::size_t w, std::size_t c, std::uint64_t seed, float lo = -1.0f,
                      float hi = 1.0f);

/// 1/(hw) sum_{x,y} F(x,y) exp(-2 pi i (ux/h + vy/w)) by direct summation.
std::vector<std::complex<double>> direct_dft(const FeatureMap& f);

/// Orthonormal DCT-II by direct summation, same (u, v, ch) layout.
std::vector<double> direct_dct(const FeatureMap& f);

/// Singular values of a row-major m x n matrix by one-sided Jacobi
/// rotations, descending.
std::vector<double> jacobi_singular_values(std::vector<double> a, std::size_t m, std::size_t n);

/// Triple loop G(i, j) = sum_p F(p, i) F(p, j), row-major c x c.
std::vector<double> brute_gram(const FeatureMap& f);

/// Central differences of f at x along every coordinate.
std::vector<double> central_differences(const std::function<double(const std::vector<double>&)>& f,
                                        std::vector<double> x, double step);

/// Otsu over all 256 thresholds with between-class variance computed from
/// scratch for each; returns every maximizing bin.
std::vector<std::size_t> brute_otsu(const std::array<std::size_t, 256>& hist);

double pearson(const std::vector<double>& a, const std::vector<double>& b);
/// Spearman rank correlation with average ranks for ties.
double spearman(const std::vector<double>& a, const std::vector<double>& b);

/// 3x3 zero-padded correlation of a single-channel h x w image.
std::vector<double> direct_conv3x3(const std::vector<double>& img, std::size_t h, std::size_t w,
                                   const std::array<double, 9>& kernel, double bias);

/// Relative error ||a - b|| / max(||a||, ||b||, tiny).
double relative_error(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace oracle
