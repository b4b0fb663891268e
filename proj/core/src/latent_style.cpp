#include "stylebasis/latent_style.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <sstream>

#include "stylebasis/error.hpp"
#include "stylebasis/tensor_io.hpp"

namespace stylebasis {

namespace fs = std::filesystem;

namespace {

using RowMajorF = Eigen::Matrix<float, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

RawTensor matrix_to_raw(const Eigen::MatrixXf& m) {
  const RowMajorF rm = m;
  return RawTensor(DType::F32,
                   {static_cast<std::uint32_t>(m.rows()), static_cast<std::uint32_t>(m.cols())},
                   std::vector<float>(rm.data(), rm.data() + rm.size()));
}

RawTensor vector_to_raw(const Eigen::VectorXf& v) {
  return RawTensor(DType::F32, {static_cast<std::uint32_t>(v.size())},
                   std::vector<float>(v.data(), v.data() + v.size()));
}

Eigen::MatrixXf matrix_from_raw(const RawTensor& raw) {
  if (raw.dtype != DType::F32 || raw.dims.size() != 2) {
    fail(ErrorKind::ShapeMismatch, "expected a rank-2 f32 tensor");
  }
  return Eigen::Map<const RowMajorF>(raw.values.data(), raw.dims[0], raw.dims[1]);
}

Eigen::VectorXf vector_from_raw(const RawTensor& raw) {
  if (raw.dtype != DType::F32 || raw.dims.size() != 1) {
    fail(ErrorKind::ShapeMismatch, "expected a rank-1 f32 tensor");
  }
  return Eigen::Map<const Eigen::VectorXf>(raw.values.data(), raw.dims[0]);
}

using Manifest = std::map<std::string, std::string>;

void write_manifest(const Manifest& m, const fs::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) fail(ErrorKind::IoFailure, "cannot write " + path.string());
  for (const auto& [k, v] : m) out << k << '=' << v << '\n';
}

Manifest read_manifest(const fs::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::IoFailure, "cannot open " + path.string());
  Manifest m;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) fail(ErrorKind::DecodeError, "bad manifest line: " + line);
    m[line.substr(0, eq)] = line.substr(eq + 1);
  }
  return m;
}

const std::string& need(const Manifest& m, const std::string& key) {
  const auto it = m.find(key);
  if (it == m.end()) fail(ErrorKind::DecodeError, "manifest lacks key '" + key + "'");
  return it->second;
}

std::size_t need_size(const Manifest& m, const std::string& key) {
  return static_cast<std::size_t>(std::stoull(need(m, key)));
}

std::string join(const std::vector<std::size_t>& ids) {
  std::ostringstream os;
  for (std::size_t i = 0; i < ids.size(); ++i) os << (i ? "," : "") << ids[i];
  return os.str();
}

}  // namespace

std::string_view to_string(Method m) noexcept {
  switch (m) {
    case Method::FFT: return "fft";
    case Method::DCT: return "dct";
    case Method::PCA: return "pca";
    case Method::ICA: return "ica";
  }
  return "?";
}

std::optional<Method> parse_method(std::string_view text) noexcept {
  std::string lower(text);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
  if (lower == "fft") return Method::FFT;
  if (lower == "dct") return Method::DCT;
  if (lower == "pca") return Method::PCA;
  if (lower == "ica") return Method::ICA;
  return std::nullopt;
}

Method method_of(const LatentStyle& latent) noexcept {
  if (const auto* s = std::get_if<SpectrumRep>(&latent)) {
    return s->kind == SpectrumKind::FFT ? Method::FFT : Method::DCT;
  }
  return std::holds_alternative<PcaRep>(latent) ? Method::PCA : Method::ICA;
}

std::size_t basis_count(const LatentStyle& latent) noexcept {
  return std::visit([](const auto& rep) { return rep.basis_count(); }, latent);
}

LatentStyle decompose(const FeatureMap& f, Method method, const DecomposeParams& params) {
  switch (method) {
    case Method::FFT: return fft_forward(f);
    case Method::DCT: return dct_forward(f);
    case Method::PCA: return pca_decompose(f, {params.rank, params.center});
    case Method::ICA: {
      IcaOptions opts;
      opts.n_extreme = params.n_extreme;
      opts.seed = params.seed;
      opts.absolute_sum = params.absolute_sum;
      return ica_decompose(f, opts);
    }
  }
  fail(ErrorKind::InvalidArgument, "unknown method");
}

FeatureMap reconstruct(const LatentStyle& latent) {
  if (const auto* s = std::get_if<SpectrumRep>(&latent)) return spectrum_inverse(*s);
  if (const auto* p = std::get_if<PcaRep>(&latent)) return pca_project_back(*p, p->H);
  const auto& ica = std::get<IcaRep>(latent);
  return ica_project_back(ica, ica.S, ica.A);
}

void save_latent(const LatentStyle& latent, const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) fail(ErrorKind::IoFailure, "cannot create " + dir.string());

  Manifest m;
  m["format"] = "stylebasis-latent-1";
  m["method"] = std::string(to_string(method_of(latent)));
  if (const auto* s = std::get_if<SpectrumRep>(&latent)) {
    m["h"] = std::to_string(s->h);
    m["w"] = std::to_string(s->w);
    m["c"] = std::to_string(s->c);
    m["layer"] = s->source_layer;
    m["spectrum"] = "spectrum.sft";
    write_tensor(to_raw(*s), dir / "spectrum.sft");
  } else if (const auto* p = std::get_if<PcaRep>(&latent)) {
    m["h"] = std::to_string(p->h);
    m["w"] = std::to_string(p->w);
    m["c"] = std::to_string(p->c);
    m["k"] = std::to_string(p->k);
    m["centered"] = p->centered ? "1" : "0";
    m["layer"] = p->source_layer;
    write_tensor(matrix_to_raw(p->U), dir / "U.sft");
    write_tensor(vector_to_raw(p->D), dir / "D.sft");
    write_tensor(matrix_to_raw(p->V), dir / "V.sft");
    write_tensor(matrix_to_raw(p->H), dir / "H.sft");
    write_tensor(vector_to_raw(p->mean), dir / "mean.sft");
  } else {
    const auto& ica = std::get<IcaRep>(latent);
    m["h"] = std::to_string(ica.h);
    m["w"] = std::to_string(ica.w);
    m["c"] = std::to_string(ica.c);
    m["n_extreme"] = std::to_string(ica.n_extreme);
    m["seed"] = std::to_string(ica.seed);
    m["iterations"] = std::to_string(ica.iterations);
    m["absolute_sum"] = ica.absolute_sum ? "1" : "0";
    m["arg"] = join(ica.arg);
    m["layer"] = ica.source_layer;
    write_tensor(matrix_to_raw(ica.S), dir / "S.sft");
    write_tensor(matrix_to_raw(ica.A), dir / "A.sft");
    write_tensor(vector_to_raw(ica.mean), dir / "mean.sft");
    std::vector<float> sums(ica.A_sum.begin(), ica.A_sum.end());
    write_tensor(RawTensor(DType::F32, {static_cast<std::uint32_t>(sums.size())}, sums),
                 dir / "A_sum.sft");
  }
  write_manifest(m, dir / "manifest.txt");
}

LatentStyle load_latent(const fs::path& dir) {
  const Manifest m = read_manifest(dir / "manifest.txt");
  const auto method = parse_method(need(m, "method"));
  if (!method) fail(ErrorKind::DecodeError, "unknown method in manifest");
  const std::string layer = m.count("layer") ? m.at("layer") : std::string{};

  switch (*method) {
    case Method::FFT:
    case Method::DCT: {
      const auto kind = *method == Method::FFT ? SpectrumKind::FFT : SpectrumKind::DCT;
      auto s = spectrum_from_raw(read_tensor(dir / "spectrum.sft"), kind, layer);
      if (s.h != need_size(m, "h") || s.w != need_size(m, "w") || s.c != need_size(m, "c")) {
        fail(ErrorKind::ShapeMismatch, "spectrum tensor disagrees with manifest");
      }
      return s;
    }
    case Method::PCA: {
      PcaRep p;
      p.h = need_size(m, "h");
      p.w = need_size(m, "w");
      p.c = need_size(m, "c");
      p.k = need_size(m, "k");
      p.centered = need(m, "centered") == "1";
      p.source_layer = layer;
      p.U = matrix_from_raw(read_tensor(dir / "U.sft"));
      p.D = vector_from_raw(read_tensor(dir / "D.sft"));
      p.V = matrix_from_raw(read_tensor(dir / "V.sft"));
      p.H = matrix_from_raw(read_tensor(dir / "H.sft"));
      p.mean = vector_from_raw(read_tensor(dir / "mean.sft"));
      const auto k = static_cast<Eigen::Index>(p.k);
      if (p.U.rows() != static_cast<Eigen::Index>(p.h * p.w) || p.U.cols() != k ||
          p.H.rows() != k || p.H.cols() != static_cast<Eigen::Index>(p.c)) {
        fail(ErrorKind::ShapeMismatch, "PCA tensors disagree with manifest");
      }
      return p;
    }
    case Method::ICA: {
      IcaRep r;
      r.h = need_size(m, "h");
      r.w = need_size(m, "w");
      r.c = need_size(m, "c");
      r.n_extreme = need_size(m, "n_extreme");
      r.seed = std::stoull(need(m, "seed"));
      r.iterations = m.count("iterations") ? std::stoull(m.at("iterations")) : 0;
      r.absolute_sum = need(m, "absolute_sum") == "1";
      r.source_layer = layer;
      r.S = matrix_from_raw(read_tensor(dir / "S.sft"));
      r.A = matrix_from_raw(read_tensor(dir / "A.sft"));
      r.mean = vector_from_raw(read_tensor(dir / "mean.sft"));
      const auto c = static_cast<Eigen::Index>(r.c);
      if (r.A.rows() != c || r.A.cols() != c || r.S.rows() != c ||
          r.S.cols() != static_cast<Eigen::Index>(r.h * r.w)) {
        fail(ErrorKind::ShapeMismatch, "ICA tensors disagree with manifest");
      }
      r.A_sum = column_sums(r.A, r.absolute_sum);
      r.arg = ascending_order(r.A_sum);
      return r;
    }
  }
  fail(ErrorKind::DecodeError, "unreachable");
}

}  // namespace stylebasis
