#include "stylebasis/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "stylebasis/error.hpp"
#include "stylebasis/fft.hpp"

namespace stylebasis {

namespace {

using cdouble = std::complex<double>;

constexpr double kImaginaryLimit = 1e-3;

// Runs the 2-D transform over every channel of an h x w x c complex grid held
// in channel-last layout.
void fft2d(std::vector<cdouble>& grid, std::size_t h, std::size_t w, std::size_t c, bool inverse) {
  const FftPlan row_plan(w);
  const FftPlan col_plan(h);
  std::vector<cdouble> line(std::max(h, w));
  for (std::size_t ch = 0; ch < c; ++ch) {
    std::span<cdouble> row(line.data(), w);
    for (std::size_t y = 0; y < h; ++y) {
      for (std::size_t x = 0; x < w; ++x) row[x] = grid[(y * w + x) * c + ch];
      inverse ? row_plan.inverse(row) : row_plan.forward(row);
      for (std::size_t x = 0; x < w; ++x) grid[(y * w + x) * c + ch] = row[x];
    }
    std::span<cdouble> col(line.data(), h);
    for (std::size_t x = 0; x < w; ++x) {
      for (std::size_t y = 0; y < h; ++y) col[y] = grid[(y * w + x) * c + ch];
      inverse ? col_plan.inverse(col) : col_plan.forward(col);
      for (std::size_t y = 0; y < h; ++y) grid[(y * w + x) * c + ch] = col[y];
    }
  }
}

// Orthonormal DCT-II matrix: basis[k * n + j] = c(k) cos(pi (j + 0.5) k / n).
std::vector<double> dct_basis(std::size_t n) {
  std::vector<double> basis(n * n);
  const double nd = static_cast<double>(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double ck = k == 0 ? std::sqrt(1.0 / nd) : std::sqrt(2.0 / nd);
    for (std::size_t j = 0; j < n; ++j) {
      basis[k * n + j] =
          ck * std::cos(std::numbers::pi * (static_cast<double>(j) + 0.5) * static_cast<double>(k) / nd);
    }
  }
  return basis;
}

// out = (B_h or B_h^T) * in * (B_w^T or B_w), applied to every channel.
std::vector<double> separable(const std::vector<double>& in, std::size_t h, std::size_t w,
                              std::size_t c, bool transpose) {
  const auto bh = dct_basis(h);
  const auto bw = dct_basis(w);
  auto coef = [transpose](const std::vector<double>& b, std::size_t n, std::size_t k,
                          std::size_t j) { return transpose ? b[j * n + k] : b[k * n + j]; };
  std::vector<double> tmp(in.size(), 0.0);
  // Along width: tmp[y, v, ch] = sum_x coef_w(v, x) in[y, x, ch]
  for (std::size_t y = 0; y < h; ++y) {
    for (std::size_t v = 0; v < w; ++v) {
      double* dst = &tmp[(y * w + v) * c];
      for (std::size_t x = 0; x < w; ++x) {
        const double k = coef(bw, w, v, x);
        const double* src = &in[(y * w + x) * c];
        for (std::size_t ch = 0; ch < c; ++ch) dst[ch] += k * src[ch];
      }
    }
  }
  std::vector<double> out(in.size(), 0.0);
  for (std::size_t u = 0; u < h; ++u) {
    for (std::size_t y = 0; y < h; ++y) {
      const double k = coef(bh, h, u, y);
      for (std::size_t v = 0; v < w; ++v) {
        double* dst = &out[(u * w + v) * c];
        const double* src = &tmp[(y * w + v) * c];
        for (std::size_t ch = 0; ch < c; ++ch) dst[ch] += k * src[ch];
      }
    }
  }
  return out;
}

std::vector<float> to_float(const std::vector<double>& values) {
  std::vector<float> out(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) out[i] = static_cast<float>(values[i]);
  return out;
}

void require_kind(const SpectrumRep& s, SpectrumKind kind) {
  if (s.kind != kind) fail(ErrorKind::MethodMismatch, "spectrum kind does not match inverse");
  if (s.coeffs.size() != s.h * s.w * s.c) fail(ErrorKind::ShapeMismatch, "spectrum size mismatch");
}

}  // namespace

SpectrumRep fft_forward(const FeatureMap& f) {
  const std::size_t h = f.h(), w = f.w(), c = f.c();
  std::vector<cdouble> grid(f.data().begin(), f.data().end());
  fft2d(grid, h, w, c, false);
  const double norm = 1.0 / static_cast<double>(h * w);

  SpectrumRep s{SpectrumKind::FFT, h, w, c, std::vector<std::complex<float>>(grid.size()),
                f.layer_name()};
  // A real input has a conjugate-symmetric spectrum; enforce it exactly so
  // rounding never breaks the pairing.
  for (std::size_t u = 0; u < h; ++u) {
    const std::size_t mu = (h - u) % h;
    for (std::size_t v = 0; v < w; ++v) {
      const std::size_t mv = (w - v) % w;
      for (std::size_t ch = 0; ch < c; ++ch) {
        const cdouble a = grid[(u * w + v) * c + ch];
        const cdouble b = grid[(mu * w + mv) * c + ch];
        const cdouble sym = 0.5 * (a + std::conj(b)) * norm;
        s.coeffs[s.index(u, v, ch)] = {static_cast<float>(sym.real()),
                                       static_cast<float>(sym.imag())};
      }
    }
  }
  return s;
}

FeatureMap fft_inverse(const SpectrumRep& s) {
  require_kind(s, SpectrumKind::FFT);
  std::vector<cdouble> grid(s.coeffs.begin(), s.coeffs.end());
  fft2d(grid, s.h, s.w, s.c, true);
  double max_imag = 0.0;
  std::vector<float> out(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    max_imag = std::max(max_imag, std::abs(grid[i].imag()));
    out[i] = static_cast<float>(grid[i].real());
  }
  if (max_imag > kImaginaryLimit) {
    fail(ErrorKind::NonNegligibleImaginary,
         "inverse FFT imaginary residue " + std::to_string(max_imag) +
             " exceeds 1e-3; the edited spectrum is not conjugate-symmetric");
  }
  return FeatureMap(s.h, s.w, s.c, std::move(out), s.source_layer);
}

SpectrumRep hermitian_symmetrize(const SpectrumRep& s) {
  SpectrumRep out = s;
  for (std::size_t u = 0; u < s.h; ++u) {
    const std::size_t mu = (s.h - u) % s.h;
    for (std::size_t v = 0; v < s.w; ++v) {
      const std::size_t mv = (s.w - v) % s.w;
      for (std::size_t ch = 0; ch < s.c; ++ch) {
        const std::complex<double> a = s.at(u, v, ch);
        const std::complex<double> b = s.at(mu, mv, ch);
        const auto sym = 0.5 * (a + std::conj(b));
        out.at(u, v, ch) = {static_cast<float>(sym.real()), static_cast<float>(sym.imag())};
      }
    }
  }
  return out;
}

SpectrumRep dct_forward(const FeatureMap& f) {
  std::vector<double> in(f.data().begin(), f.data().end());
  const auto coeffs = separable(in, f.h(), f.w(), f.c(), false);
  SpectrumRep s{SpectrumKind::DCT, f.h(), f.w(), f.c(), {}, f.layer_name()};
  s.coeffs.reserve(coeffs.size());
  for (double v : coeffs) s.coeffs.emplace_back(static_cast<float>(v), 0.0f);
  return s;
}

FeatureMap dct_inverse(const SpectrumRep& s) {
  require_kind(s, SpectrumKind::DCT);
  std::vector<double> in(s.coeffs.size());
  for (std::size_t i = 0; i < in.size(); ++i) in[i] = s.coeffs[i].real();
  const auto values = separable(in, s.h, s.w, s.c, true);
  return FeatureMap(s.h, s.w, s.c, to_float(values), s.source_layer);
}

FeatureMap spectrum_inverse(const SpectrumRep& s) {
  return s.kind == SpectrumKind::FFT ? fft_inverse(s) : dct_inverse(s);
}

SpectrumRep apply_mask(const SpectrumRep& s, const FrequencyMask& mask, float scale) {
  if (!mask.keep_dc && !mask.keep_rest && mask.explicit_ids.empty()) {
    fail(ErrorKind::InvalidArgument, "frequency mask selects nothing");
  }
  for (const auto& [u, v] : mask.explicit_ids) {
    if (u >= s.h || v >= s.w) {
      fail(ErrorKind::IndexOutOfRange, "frequency (" + std::to_string(u) + "," +
                                           std::to_string(v) + ") outside the spectrum");
    }
  }
  SpectrumRep out = s;
  for (std::size_t u = 0; u < s.h; ++u) {
    for (std::size_t v = 0; v < s.w; ++v) {
      const bool selected = mask.selects(u, v);
      if (!selected && mask.mode == FrequencyMask::Mode::Scale) continue;
      for (std::size_t ch = 0; ch < s.c; ++ch) {
        auto& z = out.at(u, v, ch);
        z = selected ? z * scale : std::complex<float>(0.0f, 0.0f);
      }
    }
  }
  return out;
}

RawTensor to_raw(const SpectrumRep& s) {
  std::vector<std::uint32_t> dims{static_cast<std::uint32_t>(s.h), static_cast<std::uint32_t>(s.w),
                                  static_cast<std::uint32_t>(s.c)};
  if (s.kind == SpectrumKind::FFT) return to_raw_complex(s.coeffs, std::move(dims));
  std::vector<float> real(s.coeffs.size());
  for (std::size_t i = 0; i < real.size(); ++i) real[i] = s.coeffs[i].real();
  return RawTensor(DType::F32, std::move(dims), std::move(real));
}

SpectrumRep spectrum_from_raw(const RawTensor& raw, SpectrumKind kind, std::string layer) {
  if (raw.dims.size() != 3) fail(ErrorKind::ShapeMismatch, "spectrum tensors are rank 3");
  const DType expected = kind == SpectrumKind::FFT ? DType::Complex64 : DType::F32;
  if (raw.dtype != expected) fail(ErrorKind::UnsupportedDtype, "spectrum dtype does not match kind");
  return SpectrumRep{kind, raw.dims[0], raw.dims[1], raw.dims[2], to_complex(raw), std::move(layer)};
}

}  // namespace stylebasis
