#include "stylebasis/atlas.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <numeric>
#include <set>

#include "stylebasis/error.hpp"
#include "stylebasis/isomap.hpp"
#include "stylebasis/kmeans.hpp"
#include "stylebasis/rng.hpp"

namespace stylebasis {

namespace {

Eigen::MatrixXd rows_of(const std::vector<std::vector<double>>& vs) {
  Eigen::MatrixXd m(static_cast<Eigen::Index>(vs.size()), static_cast<Eigen::Index>(vs.front().size()));
  for (std::size_t i = 0; i < vs.size(); ++i)
    for (std::size_t j = 0; j < vs[i].size(); ++j) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = vs[i][j];
  return m;
}

double radius(const SpectrumRep& s, std::size_t u, std::size_t v) {
  double fu, fv;
  if (s.kind == SpectrumKind::FFT) {
    fu = static_cast<double>(std::min(u, s.h - u)) / static_cast<double>(s.h);
    fv = static_cast<double>(std::min(v, s.w - v)) / static_cast<double>(s.w);
  } else {
    fu = static_cast<double>(u) / (2.0 * static_cast<double>(s.h));
    fv = static_cast<double>(v) / (2.0 * static_cast<double>(s.w));
  }
  return std::hypot(fu, fv);
}

bool is_oil(StyleLabel l) { return l == StyleLabel::Oil; }
bool is_ink(StyleLabel l) { return l == StyleLabel::Chinese || l == StyleLabel::Pen; }

std::string svg_colour(StyleLabel l) {
  switch (l) {
    case StyleLabel::Chinese: return "#c0392b";
    case StyleLabel::Oil: return "#2471a3";
    case StyleLabel::Pen: return "#1e8449";
    case StyleLabel::Other: break;
  }
  return "#7f8c8d";
}

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char ch : s) {
    switch (ch) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += ch;
    }
  }
  return out;
}

}  // namespace

std::string_view to_string(StyleLabel label) noexcept {
  switch (label) {
    case StyleLabel::Chinese: return "chinese";
    case StyleLabel::Oil: return "oil";
    case StyleLabel::Pen: return "pen";
    case StyleLabel::Other: break;
  }
  return "other";
}

StyleLabel parse_label(std::string_view text) noexcept {
  std::string lower(text);
  for (char& ch : lower) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  if (lower == "chinese") return StyleLabel::Chinese;
  if (lower == "oil") return StyleLabel::Oil;
  if (lower == "pen") return StyleLabel::Pen;
  return StyleLabel::Other;
}

SpectrumVectors spectrum_vectors(const SpectrumRep& s) {
  SpectrumVectors out;
  out.color.resize(s.c);
  out.stroke.reserve((s.h * s.w - 1) * s.c);
  for (std::size_t ch = 0; ch < s.c; ++ch) out.color[ch] = std::abs(s.at(0, 0, ch));
  for (std::size_t u = 0; u < s.h; ++u)
    for (std::size_t v = 0; v < s.w; ++v) {
      if (u == 0 && v == 0) continue;
      for (std::size_t ch = 0; ch < s.c; ++ch) out.stroke.push_back(std::abs(s.at(u, v, ch)));
    }
  return out;
}

std::vector<double> summary_vector(const SpectrumRep& s, const std::vector<std::size_t>& channels,
                                   std::size_t bands) {
  std::vector<std::size_t> chans = channels;
  if (chans.empty()) {
    chans.resize(s.c);
    std::iota(chans.begin(), chans.end(), 0);
  }
  for (std::size_t ch : chans) {
    if (ch >= s.c) fail(ErrorKind::IndexOutOfRange, "channel " + std::to_string(ch) + " out of range");
  }
  if (bands == 0) fail(ErrorKind::InvalidArgument, "at least one band is required");

  double rmin = std::numeric_limits<double>::infinity(), rmax = 0.0;
  for (std::size_t u = 0; u < s.h; ++u)
    for (std::size_t v = 0; v < s.w; ++v) {
      if (u == 0 && v == 0) continue;
      const double r = radius(s, u, v);
      rmin = std::min(rmin, r);
      rmax = std::max(rmax, r);
    }

  std::vector<double> energy(bands * chans.size(), 0.0);
  for (std::size_t u = 0; u < s.h; ++u)
    for (std::size_t v = 0; v < s.w; ++v) {
      if (u == 0 && v == 0) continue;
      std::size_t band = 0;
      if (rmax > rmin) {
        const double t = std::log(radius(s, u, v) / rmin) / std::log(rmax / rmin);
        band = std::min(bands - 1, static_cast<std::size_t>(t * static_cast<double>(bands)));
      }
      for (std::size_t k = 0; k < chans.size(); ++k) energy[band * chans.size() + k] += std::norm(s.at(u, v, chans[k]));
    }

  std::vector<double> out;
  out.reserve(chans.size() * (bands + 1));
  for (std::size_t ch : chans) out.push_back(std::abs(s.at(0, 0, ch)));
  for (double e : energy) out.push_back(std::sqrt(e));
  return out;
}

std::size_t StandardVerdict::score() const noexcept {
  return violating_pairs + (smallest_cluster > 2 ? smallest_cluster - 2 : 0);
}

StandardVerdict check_standard(const std::vector<std::size_t>& assignment, const std::vector<StyleLabel>& labels,
                               const ClusteringStandard& standard) {
  if (assignment.size() != labels.size()) fail(ErrorKind::InvalidArgument, "assignment/label length mismatch");
  if (standard.k < 2) fail(ErrorKind::InvalidArgument, "the standard needs k >= 2");
  std::map<std::size_t, std::size_t> sizes, oil, ink;
  for (std::size_t i = 0; i < assignment.size(); ++i) {
    ++sizes[assignment[i]];
    if (is_oil(labels[i])) ++oil[assignment[i]];
    if (is_ink(labels[i])) ++ink[assignment[i]];
  }
  StandardVerdict v;
  v.smallest_cluster = assignment.empty() ? 0 : std::numeric_limits<std::size_t>::max();
  v.rule2 = false;
  for (const auto& [cluster, size] : sizes) {
    v.violating_pairs += oil[cluster] * ink[cluster];
    v.smallest_cluster = std::min(v.smallest_cluster, size);
    if (size == 1 || size == 2) v.rule2 = true;
  }
  v.rule1 = v.violating_pairs == 0;
  return v;
}

CmaxResult find_cmax(const std::map<std::string, FeatureMap>& styles,
                     const std::map<std::string, StyleLabel>& labels, const CmaxOptions& opts) {
  if (styles.size() < std::max<std::size_t>(opts.standard.k, 3)) {
    fail(ErrorKind::InvalidArgument, "C_max search needs at least max(k, 3) styles");
  }
  std::vector<SpectrumRep> spectra;
  std::vector<StyleLabel> label_list;
  for (const auto& [id, f] : styles) {
    if (!spectra.empty() && f.c() != spectra.front().c) {
      fail(ErrorKind::ShapeMismatch, "styles have different channel counts");
    }
    spectra.push_back(fft_forward(f));
    const auto it = labels.find(id);
    label_list.push_back(it == labels.end() ? StyleLabel::Other : it->second);
  }
  const std::size_t c = spectra.front().c;
  const std::uint64_t km_seed = Rng::derive(opts.seed, "cmax");

  const auto evaluate = [&](const std::vector<std::size_t>& chans) {
    std::vector<std::vector<double>> vs;
    for (const auto& s : spectra) vs.push_back(summary_vector(s, chans));
    const auto km = kmeans(rows_of(vs), opts.standard.k, km_seed, opts.restarts);
    return std::make_pair(check_standard(km.assignment, label_list, opts.standard), km.assignment);
  };

  CmaxResult result;
  result.channels.resize(c);
  std::iota(result.channels.begin(), result.channels.end(), 0);
  const std::size_t budget = opts.max_rounds == 0 ? c - 1 : std::min(opts.max_rounds, c - 1);

  for (std::size_t round = 0;; ++round) {
    auto [verdict, assignment] = evaluate(result.channels);
    if (verdict.pass()) {
      result.assignment = std::move(assignment);
      return result;
    }
    if (round == budget) break;
    std::size_t best_pos = 0, best_score = std::numeric_limits<std::size_t>::max();
    for (std::size_t pos = 0; pos < result.channels.size(); ++pos) {
      auto trial = result.channels;
      trial.erase(trial.begin() + static_cast<std::ptrdiff_t>(pos));
      const std::size_t score = evaluate(trial).first.score();
      if (score < best_score) {
        best_score = score;
        best_pos = pos;
      }
    }
    result.removed.push_back(result.channels[best_pos]);
    result.channels.erase(result.channels.begin() + static_cast<std::ptrdiff_t>(best_pos));
  }
  fail(ErrorKind::NotFound, "no channel subset satisfies the clustering standard within " +
                                std::to_string(budget) + " removals");
}

std::vector<StylePoint> build_atlas(const std::vector<AtlasInput>& styles, const AtlasOptions& opts) {
  if (styles.size() < 2) fail(ErrorKind::InvalidArgument, "an atlas needs at least two styles");
  std::vector<StylePoint> points;
  std::vector<std::vector<double>> colors, strokes, cluster_vs;
  for (const auto& in : styles) {
    const SpectrumRep s = opts.kind == SpectrumKind::FFT ? fft_forward(in.features) : dct_forward(in.features);
    auto sv = spectrum_vectors(s);
    if (!colors.empty() && (sv.color.size() != colors.front().size() || sv.stroke.size() != strokes.front().size())) {
      fail(ErrorKind::ShapeMismatch, "style " + in.style_id + " has a different feature shape");
    }
    if (opts.full_vectors) {
      std::vector<double> full = sv.color;
      full.insert(full.end(), sv.stroke.begin(), sv.stroke.end());
      cluster_vs.push_back(std::move(full));
    } else {
      cluster_vs.push_back(summary_vector(s, opts.channels));
    }
    colors.push_back(sv.color);
    strokes.push_back(sv.stroke);
    points.push_back({in.style_id, in.label, std::move(sv.color), std::move(sv.stroke), 0.0, 0.0, 0});
  }

  const std::size_t kn = std::min(opts.k_neighbors, points.size() - 1);
  const auto uc = isomap_embed(rows_of(colors), kn, 1);
  const auto us = isomap_embed(rows_of(strokes), kn, 1);
  const auto km = kmeans(rows_of(cluster_vs), opts.k, Rng::derive(opts.seed, "atlas"));
  for (std::size_t i = 0; i < points.size(); ++i) {
    points[i].u_color = uc(static_cast<Eigen::Index>(i), 0);
    points[i].u_stroke = us(static_cast<Eigen::Index>(i), 0);
    points[i].cluster = km.assignment[i];
  }
  return points;
}

void write_atlas_csv(const std::filesystem::path& path, const std::vector<StylePoint>& points) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) fail(ErrorKind::IoFailure, "cannot write " + path.string());
  out << "style_id,label,u_color,u_stroke,cluster\n" << std::setprecision(10);
  for (const auto& p : points) {
    out << p.style_id << ',' << to_string(p.label) << ',' << p.u_color << ',' << p.u_stroke << ',' << p.cluster
        << '\n';
  }
}

void write_atlas_svg(const std::filesystem::path& path, const std::vector<StylePoint>& points) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) fail(ErrorKind::IoFailure, "cannot write " + path.string());
  constexpr double size = 480.0, pad = 40.0;
  double x0 = 0, x1 = 0, y0 = 0, y1 = 0;
  for (const auto& p : points) {
    x0 = std::min(x0, p.u_color);
    x1 = std::max(x1, p.u_color);
    y0 = std::min(y0, p.u_stroke);
    y1 = std::max(y1, p.u_stroke);
  }
  const double sx = x1 > x0 ? (size - 2 * pad) / (x1 - x0) : 1.0;
  const double sy = y1 > y0 ? (size - 2 * pad) / (y1 - y0) : 1.0;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << size << "\" height=\"" << size << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<text x=\"" << size / 2 << "\" y=\"" << size - 8 << "\" text-anchor=\"middle\" font-size=\"12\">u_color</text>\n"
      << "<text x=\"12\" y=\"" << size / 2 << "\" font-size=\"12\" transform=\"rotate(-90 12 " << size / 2
      << ")\">u_stroke</text>\n";
  for (const auto& p : points) {
    const double x = pad + (p.u_color - x0) * sx;
    const double y = size - pad - (p.u_stroke - y0) * sy;
    out << "<circle cx=\"" << x << "\" cy=\"" << y << "\" r=\"5\" fill=\"" << svg_colour(p.label) << "\"/>"
        << "<text x=\"" << x + 7 << "\" y=\"" << y + 4 << "\" font-size=\"10\">" << xml_escape(p.style_id)
        << "</text>\n";
  }
  out << "</svg>\n";
}

}  // namespace stylebasis
