#include "stylebasis/control.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "stylebasis/error.hpp"

namespace stylebasis {

namespace {

std::vector<std::size_t> iota_ids(std::size_t begin, std::size_t end) {
  std::vector<std::size_t> ids(end - begin);
  std::iota(ids.begin(), ids.end(), begin);
  return ids;
}

std::vector<std::size_t> checked_ids(std::vector<std::size_t> ids, std::size_t count) {
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  if (!ids.empty() && ids.back() >= count) {
    fail(ErrorKind::IndexOutOfRange, "basis index " + std::to_string(ids.back()) +
                                         " >= basis count " + std::to_string(count));
  }
  return ids;
}

[[noreturn]] void unsupported(const char* selector, Method m) {
  fail(ErrorKind::UnsupportedSelector,
       std::string("selector '") + selector + "' is not defined for " + std::string(to_string(m)));
}

const char* selector_name(BasisSelector::Kind kind) {
  switch (kind) {
    case BasisSelector::Kind::All: return "all";
    case BasisSelector::Kind::Dc: return "dc";
    case BasisSelector::Kind::Rest: return "rest";
    case BasisSelector::Kind::Stroke: return "stroke";
    case BasisSelector::Kind::Color: return "color";
    case BasisSelector::Kind::Ids: return "ids";
  }
  return "?";
}

// Slots of `self` that a Mix fills with the other style's bases.
std::vector<std::size_t> free_slots(const BasisSelector& from_self, const LatentStyle& self) {
  using K = BasisSelector::Kind;
  switch (from_self.kind) {
    case K::Stroke: return resolve(BasisSelector::color(), self);
    case K::Color: return resolve(BasisSelector::stroke(), self);
    case K::Dc: return resolve(BasisSelector::rest(), self);
    case K::Rest: return resolve(BasisSelector::dc(), self);
    default: break;
  }
  const auto taken = resolve(from_self, self);
  std::vector<std::size_t> out;
  const std::set<std::size_t> taken_set(taken.begin(), taken.end());
  for (std::size_t i = 0; i < basis_count(self); ++i) {
    if (!taken_set.count(i)) out.push_back(i);
  }
  return out;
}

void check_factor(double factor) {
  if (!std::isfinite(factor) || factor < 0.0) {
    fail(ErrorKind::InvalidArgument, "intervention factor must be finite and >= 0");
  }
}

void check_compatible(const LatentStyle& a, const LatentStyle& b) {
  if (method_of(a) != method_of(b)) fail(ErrorKind::MethodMismatch, "styles use different methods");
  const bool same = std::visit(
      [&](const auto& ra) {
        using T = std::decay_t<decltype(ra)>;
        const auto& rb = std::get<T>(b);
        return ra.h == rb.h && ra.w == rb.w && ra.c == rb.c && ra.basis_count() == rb.basis_count();
      },
      a);
  if (!same) fail(ErrorKind::ShapeMismatch, "mixed styles must share h, w, c");
}

}  // namespace

std::vector<std::size_t> resolve(const BasisSelector& sel, const LatentStyle& latent) {
  using K = BasisSelector::Kind;
  const std::size_t count = basis_count(latent);
  if (sel.kind == K::All) return iota_ids(0, count);
  if (sel.kind == K::Ids) return checked_ids(sel.ids, count);

  const Method m = method_of(latent);
  if (std::holds_alternative<SpectrumRep>(latent)) {
    if (sel.kind == K::Dc || sel.kind == K::Color) return {0};
    return iota_ids(1, count);  // Rest / Stroke
  }
  if (const auto* ica = std::get_if<IcaRep>(&latent)) {
    if (sel.kind == K::Stroke) return split_basis(*ica).stroke_ids;
    if (sel.kind == K::Color) return split_basis(*ica).color_ids;
  }
  unsupported(selector_name(sel.kind), m);
}

LatentStyle intervene(const LatentStyle& latent, const std::vector<std::size_t>& ids, double factor) {
  check_factor(factor);
  const auto selected = checked_ids(ids, basis_count(latent));
  const auto f = static_cast<float>(factor);
  LatentStyle out = latent;
  if (auto* s = std::get_if<SpectrumRep>(&out)) {
    for (auto id : selected) {
      for (std::size_t ch = 0; ch < s->c; ++ch) s->at(id / s->w, id % s->w, ch) *= f;
    }
  } else if (auto* p = std::get_if<PcaRep>(&out)) {
    for (auto id : selected) p->H.row(static_cast<Eigen::Index>(id)) *= f;
  } else {
    auto& ica = std::get<IcaRep>(out);
    for (auto id : selected) ica.S.row(static_cast<Eigen::Index>(id)) *= f;
  }
  return out;
}

LatentStyle single_basis(const LatentStyle& latent, const std::vector<std::size_t>& ids) {
  const auto keep = checked_ids(ids, basis_count(latent));
  const auto all = iota_ids(0, basis_count(latent));
  std::vector<std::size_t> drop;
  std::set_difference(all.begin(), all.end(), keep.begin(), keep.end(), std::back_inserter(drop));
  return intervene(latent, drop, 0.0);
}

LatentStyle mix_latents(const LatentStyle& self, const LatentStyle& other, const Mix& op,
                        IcaMixMode mode) {
  check_compatible(self, other);
  const auto self_ids = resolve(op.from_self, self);
  const auto other_ids = resolve(op.from_other, other);

  if (const auto* s = std::get_if<SpectrumRep>(&self)) {
    const auto& o = std::get<SpectrumRep>(other);
    SpectrumRep out = *s;
    std::fill(out.coeffs.begin(), out.coeffs.end(), std::complex<float>(0.0f, 0.0f));
    const std::set<std::size_t> mine(self_ids.begin(), self_ids.end());
    for (auto id : self_ids) {
      for (std::size_t ch = 0; ch < s->c; ++ch) out.coeffs[id * s->c + ch] = s->coeffs[id * s->c + ch];
    }
    for (auto id : other_ids) {
      if (mine.count(id)) {
        fail(ErrorKind::InvalidArgument, "mix selects frequency " + std::to_string(id) + " from both styles");
      }
      for (std::size_t ch = 0; ch < s->c; ++ch) out.coeffs[id * s->c + ch] = o.coeffs[id * o.c + ch];
    }
    return out;
  }

  const auto slots = free_slots(op.from_self, self);
  if (other_ids.size() > slots.size()) {
    fail(ErrorKind::InvalidArgument, "mix takes more bases from the other style than free slots");
  }
  LatentStyle out = single_basis(self, self_ids);
  if (auto* p = std::get_if<PcaRep>(&out)) {
    const auto& o = std::get<PcaRep>(other);
    for (std::size_t t = 0; t < other_ids.size(); ++t) {
      const auto slot = static_cast<Eigen::Index>(slots[t]);
      const auto j = static_cast<Eigen::Index>(other_ids[t]);
      p->U.col(slot) = o.U.col(j);
      p->V.col(slot) = o.V.col(j);
      p->D(slot) = o.D(j);
      p->H.row(slot) = o.H.row(j);
    }
    if (op.offset_from_other) p->mean = o.mean;
    return out;
  }
  auto& ica = std::get<IcaRep>(out);
  const auto& o = std::get<IcaRep>(other);
  for (std::size_t t = 0; t < other_ids.size(); ++t) {
    const auto slot = static_cast<Eigen::Index>(slots[t]);
    const auto j = static_cast<Eigen::Index>(other_ids[t]);
    ica.S.row(slot) = o.S.row(j);
    if (mode == IcaMixMode::Column) {
      ica.A.col(slot) = o.A.col(j);
    } else {
      ica.A.row(slot) = o.A.row(j);
    }
  }
  if (op.offset_from_other) ica.mean = o.mean;
  return out;
}

void StyleBank::add(const std::string& id, FeatureMap f) {
  if (!entries_.empty() && !entries_.begin()->second.map.same_shape(f)) {
    fail(ErrorKind::ShapeMismatch, "style '" + id + "' differs in shape from the bank");
  }
  entries_[id] = Entry{std::move(f), std::nullopt};
}

void StyleBank::set_latent(const std::string& id, LatentStyle latent) {
  const auto it = entries_.find(id);
  if (it == entries_.end()) fail(ErrorKind::UnknownStyleId, "unknown style '" + id + "'");
  it->second.latent = std::move(latent);
}

const FeatureMap& StyleBank::feature_map(const std::string& id) const {
  const auto it = entries_.find(id);
  if (it == entries_.end()) fail(ErrorKind::UnknownStyleId, "unknown style '" + id + "'");
  return it->second.map;
}

LatentStyle StyleBank::latent(const std::string& id, Method method,
                              const DecomposeParams& params) const {
  const auto it = entries_.find(id);
  if (it == entries_.end()) fail(ErrorKind::UnknownStyleId, "unknown style '" + id + "'");
  if (it->second.latent && method_of(*it->second.latent) == method) return *it->second.latent;
  return decompose(it->second.map, method, params);
}

FeatureMap apply_control(const StyleBank& bank, const std::string& primary_style,
                         const ControlSpec& spec) {
  const FeatureMap& primary = bank.feature_map(primary_style);
  if (spec.is_identity()) return primary;

  LatentStyle latent = bank.latent(primary_style, spec.method, spec.params);
  for (const auto& op : spec.ops) {
    if (const auto* sb = std::get_if<SingleBasis>(&op)) {
      latent = single_basis(latent, resolve(sb->bases, latent));
    } else if (const auto* iv = std::get_if<Intervene>(&op)) {
      latent = intervene(latent, resolve(iv->bases, latent), iv->factor);
    } else if (const auto* mx = std::get_if<Mix>(&op)) {
      const auto other = bank.latent(mx->source_style_id, spec.method, spec.params);
      latent = mix_latents(latent, other, *mx, spec.ica_mix_mode);
    } else {
      const auto& roles = std::get<MixStyles>(op);
      Mix lowered;
      if (roles.stroke_from == primary_style) {
        lowered = {roles.color_from, BasisSelector::stroke(), BasisSelector::color(), true};
      } else if (roles.color_from == primary_style) {
        lowered = {roles.stroke_from, BasisSelector::color(), BasisSelector::stroke(), false};
      } else {
        fail(ErrorKind::UnknownStyleId,
             "mix must involve the primary style '" + primary_style + "'");
      }
      const auto other = bank.latent(lowered.source_style_id, spec.method, spec.params);
      latent = mix_latents(latent, other, lowered, spec.ica_mix_mode);
    }
  }
  // Edits with asymmetric index sets can break the conjugate pairing of an FFT
  // spectrum; project onto the real-signal subspace before inverting.
  if (auto* s = std::get_if<SpectrumRep>(&latent); s && s->kind == SpectrumKind::FFT) {
    *s = hermitian_symmetrize(*s);
  }
  FeatureMap out = reconstruct(latent);
  out.set_layer_name(primary.layer_name());
  return out;
}

FeatureMap mix(const StyleBank& bank, const std::string& stroke_from, const std::string& color_from,
               double stroke_intensity, Method method, const DecomposeParams& params,
               IcaMixMode mode) {
  ControlSpec spec;
  spec.method = method;
  spec.params = params;
  spec.ica_mix_mode = mode;
  spec.ops.emplace_back(MixStyles{stroke_from, color_from});
  spec.ops.emplace_back(Intervene{BasisSelector::stroke(), stroke_intensity});
  return apply_control(bank, stroke_from, spec);
}

FeatureMap interpolate(const std::vector<FeatureMap>& maps, const std::vector<double>& weights) {
  if (maps.empty() || maps.size() != weights.size()) {
    fail(ErrorKind::BadWeights, "need one weight per feature map");
  }
  double total = 0.0;
  for (double wgt : weights) {
    if (!std::isfinite(wgt) || wgt < 0.0) fail(ErrorKind::BadWeights, "weights must be >= 0");
    total += wgt;
  }
  if (std::abs(total - 1.0) > 1e-6) fail(ErrorKind::BadWeights, "weights must sum to 1");
  for (const auto& m : maps) {
    if (!m.same_shape(maps.front())) fail(ErrorKind::ShapeMismatch, "interpolated maps differ in shape");
  }
  std::vector<double> acc(maps.front().size(), 0.0);
  for (std::size_t i = 0; i < maps.size(); ++i) {
    if (weights[i] == 0.0) continue;
    const auto data = maps[i].data();
    for (std::size_t j = 0; j < acc.size(); ++j) acc[j] += weights[i] * data[j];
  }
  std::vector<float> out(acc.begin(), acc.end());
  const auto& first = maps.front();
  return FeatureMap(first.h(), first.w(), first.c(), std::move(out), first.layer_name());
}

FeatureMap region_intervene(const FeatureMap& f, const Rect& rect, double factor) {
  check_factor(factor);
  if (rect.y0 >= rect.y1 || rect.x0 >= rect.x1 || rect.y1 > f.h() || rect.x1 > f.w()) {
    fail(ErrorKind::IndexOutOfRange, "region outside the feature map");
  }
  FeatureMap out = f;
  const auto s = static_cast<float>(factor);
  for (std::size_t y = rect.y0; y < rect.y1; ++y) {
    for (std::size_t x = rect.x0; x < rect.x1; ++x) {
      for (std::size_t ch = 0; ch < f.c(); ++ch) out.at(y, x, ch) *= s;
    }
  }
  return out;
}

FeatureMap channel_subset(const FeatureMap& f, const std::vector<std::size_t>& keep) {
  std::vector<bool> kept(f.c(), false);
  for (auto ch : keep) {
    if (ch >= f.c()) fail(ErrorKind::IndexOutOfRange, "channel " + std::to_string(ch) + " out of range");
    kept[ch] = true;
  }
  FeatureMap out = f;
  auto data = out.data();
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (!kept[i % f.c()]) data[i] = 0.0f;
  }
  return out;
}

}  // namespace stylebasis
