#include "corrcalc/fincat.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <tuple>

namespace corrcalc {

namespace {

std::string cell(const std::string& a, const std::string& b) {
  return "(" + a + ", " + b + ")";
}

}  // namespace

int FinCat::object_index(const std::string& name) const {
  auto it = object_lookup_.find(name);
  return it == object_lookup_.end() ? -1 : it->second;
}

int FinCat::morphism_index(const std::string& name) const {
  auto it = morphism_lookup_.find(name);
  return it == morphism_lookup_.end() ? -1 : it->second;
}

std::vector<int> FinCat::hom(int x, int y) const {
  std::vector<int> out;
  for (int m = 0; m < static_cast<int>(num_morphisms()); ++m)
    if (src_[m] == x && tgt_[m] == y) out.push_back(m);
  return out;
}

bool FinCat::is_iso(int m) const { return inverse(m).has_value(); }

std::optional<int> FinCat::inverse(int m) const {
  for (int n : hom(tgt_[m], src_[m]))
    if (compose(n, m) == identity(src_[m]) && compose(m, n) == identity(tgt_[m]))
      return n;
  return std::nullopt;
}

bool FinCat::operator==(const FinCat& other) const {
  return objects_ == other.objects_ && mor_name_ == other.mor_name_ &&
         src_ == other.src_ && tgt_ == other.tgt_ && identity_ == other.identity_ &&
         table_ == other.table_;
}

FinCat FinCat::validate(const FinCatData& data) {
  FinCat c;
  c.name_ = data.name;
  c.objects_ = data.objects;
  for (std::size_t i = 0; i < data.objects.size(); ++i) {
    if (!c.object_lookup_.emplace(data.objects[i], static_cast<int>(i)).second)
      throw Error(ErrorCode::DuplicateName, "object " + data.objects[i], data.objects[i]);
  }
  for (std::size_t i = 0; i < data.morphisms.size(); ++i) {
    const auto& m = data.morphisms[i];
    if (!c.morphism_lookup_.emplace(m.name, static_cast<int>(i)).second)
      throw Error(ErrorCode::DuplicateName, "morphism " + m.name, m.name);
    int s = c.object_index(m.src);
    int t = c.object_index(m.tgt);
    if (s < 0 || t < 0)
      throw Error(ErrorCode::BadInput, "morphism " + m.name + " has unknown endpoint",
                  m.name);
    c.mor_name_.push_back(m.name);
    c.src_.push_back(s);
    c.tgt_.push_back(t);
  }

  const std::size_t n = c.num_morphisms();
  if (n > 60000)
    throw Error(ErrorCode::SizeCap, "composition table for " + std::to_string(n) +
                                        " morphisms exceeds the hard bound");

  c.identity_.assign(c.num_objects(), -1);
  for (std::size_t o = 0; o < c.num_objects(); ++o) {
    auto it = data.identities.find(c.objects_[o]);
    if (it == data.identities.end())
      throw Error(ErrorCode::MissingIdentity, "no identity for object " + c.objects_[o],
                  c.objects_[o]);
    int m = c.morphism_index(it->second);
    if (m < 0 || c.src_[m] != static_cast<int>(o) || c.tgt_[m] != static_cast<int>(o))
      throw Error(ErrorCode::MissingIdentity,
                  "identity of " + c.objects_[o] + " is not an endomorphism", c.objects_[o]);
    c.identity_[o] = m;
  }

  c.table_.assign(n * n, -1);
  for (const auto& t : data.compose) {
    int g = c.morphism_index(t[0]);
    int f = c.morphism_index(t[1]);
    int gf = c.morphism_index(t[2]);
    if (g < 0 || f < 0 || gf < 0)
      throw Error(ErrorCode::BadInput, "compose entry names unknown morphism",
                  cell(t[0], t[1]));
    if (c.tgt_[f] != c.src_[g])
      throw Error(ErrorCode::BadInput, "compose entry for non-composable pair",
                  cell(t[0], t[1]));
    int32_t& slot = c.table_[static_cast<std::size_t>(g) * n + f];
    if (slot >= 0 && slot != gf)
      throw Error(ErrorCode::BadInput, "conflicting compose entries", cell(t[0], t[1]));
    slot = gf;
  }

  // Totality and src/tgt coherence.
  for (int g = 0; g < static_cast<int>(n); ++g)
    for (int f = 0; f < static_cast<int>(n); ++f) {
      if (c.tgt_[f] != c.src_[g]) continue;
      int gf = c.compose(g, f);
      if (gf < 0)
        throw Error(ErrorCode::CompositionGap, "no composite for " +
                        cell(c.mor_name_[g], c.mor_name_[f]),
                    cell(c.mor_name_[g], c.mor_name_[f]));
      if (c.src_[gf] != c.src_[f] || c.tgt_[gf] != c.tgt_[g])
        throw Error(ErrorCode::SrcTgtMismatch, "composite of " +
                        cell(c.mor_name_[g], c.mor_name_[f]) + " has wrong endpoints",
                    cell(c.mor_name_[g], c.mor_name_[f]));
    }

  // Identity laws.
  for (int f = 0; f < static_cast<int>(n); ++f) {
    if (c.compose(c.identity_[c.tgt_[f]], f) != f ||
        c.compose(f, c.identity_[c.src_[f]]) != f)
      throw Error(ErrorCode::NonAssociative, "identity law fails at " + c.mor_name_[f],
                  c.mor_name_[f]);
  }

  // Associativity over all composable triples.
  for (int h = 0; h < static_cast<int>(n); ++h) {
    for (int g = 0; g < static_cast<int>(n); ++g) {
      if (c.tgt_[g] != c.src_[h]) continue;
      int hg = c.compose(h, g);
      for (int f = 0; f < static_cast<int>(n); ++f) {
        if (c.tgt_[f] != c.src_[g]) continue;
        if (c.compose(hg, f) != c.compose(h, c.compose(g, f)))
          throw Error(ErrorCode::NonAssociative,
                      "associativity fails at (" + c.mor_name_[h] + ", " + c.mor_name_[g] +
                          ", " + c.mor_name_[f] + ")",
                      c.mor_name_[h] + "," + c.mor_name_[g] + "," + c.mor_name_[f]);
      }
    }
  }
  return c;
}

FinCatData FinCat::to_data() const {
  FinCatData d;
  d.name = name_;
  d.objects = objects_;
  for (std::size_t m = 0; m < num_morphisms(); ++m)
    d.morphisms.push_back({mor_name_[m], objects_[src_[m]], objects_[tgt_[m]]});
  for (std::size_t o = 0; o < num_objects(); ++o)
    d.identities[objects_[o]] = mor_name_[identity_[o]];
  for (int g = 0; g < static_cast<int>(num_morphisms()); ++g)
    for (int f = 0; f < static_cast<int>(num_morphisms()); ++f)
      if (compose(g, f) >= 0)
        d.compose.push_back({mor_name_[g], mor_name_[f], mor_name_[compose(g, f)]});
  return d;
}

CatPtr validate_category(const FinCatData& data) {
  return std::make_shared<const FinCat>(FinCat::validate(data));
}

bool FunctorData::operator==(const FunctorData& other) const {
  if (ob_map != other.ob_map || mor_map != other.mor_map) return false;
  if (source != other.source && !(*source == *other.source)) return false;
  if (target != other.target && !(*target == *other.target)) return false;
  return true;
}

void validate_functor(const FunctorData& f) {
  const FinCat& c = *f.source;
  const FinCat& d = *f.target;
  if (f.ob_map.size() != c.num_objects() || f.mor_map.size() != c.num_morphisms())
    throw Error(ErrorCode::BadInput, "functor maps have wrong arity");
  for (int m = 0; m < static_cast<int>(c.num_morphisms()); ++m) {
    int fm = f.mor_map[m];
    if (fm < 0 || fm >= static_cast<int>(d.num_morphisms()))
      throw Error(ErrorCode::BadInput, "functor maps morphism out of range");
    if (d.src(fm) != f.ob_map[c.src(m)] || d.tgt(fm) != f.ob_map[c.tgt(m)])
      throw Error(ErrorCode::SrcTgtMismatch,
                  "functor breaks src/tgt at " + c.morphism_name(m), c.morphism_name(m));
  }
  for (int o = 0; o < static_cast<int>(c.num_objects()); ++o)
    if (f.mor_map[c.identity(o)] != d.identity(f.ob_map[o]))
      throw Error(ErrorCode::PreconditionFailed,
                  "functor breaks identity at " + c.object_name(o), c.object_name(o));
  for (int g = 0; g < static_cast<int>(c.num_morphisms()); ++g)
    for (int m = 0; m < static_cast<int>(c.num_morphisms()); ++m) {
      int gm = c.compose(g, m);
      if (gm < 0) continue;
      if (d.compose(f.mor_map[g], f.mor_map[m]) != f.mor_map[gm])
        throw Error(ErrorCode::PreconditionFailed,
                    "functor breaks composition at " +
                        cell(c.morphism_name(g), c.morphism_name(m)),
                    cell(c.morphism_name(g), c.morphism_name(m)));
    }
}

FunctorData identity_functor(const CatPtr& c) {
  FunctorData f;
  f.source = c;
  f.target = c;
  f.ob_map.resize(c->num_objects());
  f.mor_map.resize(c->num_morphisms());
  for (std::size_t i = 0; i < f.ob_map.size(); ++i) f.ob_map[i] = static_cast<int>(i);
  for (std::size_t i = 0; i < f.mor_map.size(); ++i) f.mor_map[i] = static_cast<int>(i);
  return f;
}

FunctorData compose_functors(const FunctorData& g, const FunctorData& f) {
  if (!(f.target == g.source || *f.target == *g.source))
    throw Error(ErrorCode::BoundaryMismatch, "functor composition boundary mismatch");
  FunctorData h;
  h.source = f.source;
  h.target = g.target;
  h.ob_map.resize(f.ob_map.size());
  h.mor_map.resize(f.mor_map.size());
  for (std::size_t i = 0; i < h.ob_map.size(); ++i) h.ob_map[i] = g.ob_map[f.ob_map[i]];
  for (std::size_t i = 0; i < h.mor_map.size(); ++i) h.mor_map[i] = g.mor_map[f.mor_map[i]];
  return h;
}

FunctorData constant_functor(const CatPtr& c, const CatPtr& d, int object) {
  FunctorData f;
  f.source = c;
  f.target = d;
  f.ob_map.assign(c->num_objects(), object);
  f.mor_map.assign(c->num_morphisms(), d->identity(object));
  return f;
}

bool NatTransData::operator==(const NatTransData& other) const {
  return component == other.component && source == other.source && target == other.target;
}

void validate_nat(const NatTransData& n) {
  const FinCat& c = *n.source.source;
  const FinCat& d = *n.source.target;
  if (!(n.source.source == n.target.source || *n.source.source == *n.target.source) ||
      !(n.source.target == n.target.target || *n.source.target == *n.target.target))
    throw Error(ErrorCode::BoundaryMismatch, "transformation endpoints disagree");
  if (n.component.size() != c.num_objects())
    throw Error(ErrorCode::BadInput, "transformation has wrong component count");
  for (int o = 0; o < static_cast<int>(c.num_objects()); ++o) {
    int m = n.component[o];
    if (d.src(m) != n.source.ob_map[o] || d.tgt(m) != n.target.ob_map[o])
      throw Error(ErrorCode::SrcTgtMismatch,
                  "component at " + c.object_name(o) + " has wrong boundary",
                  c.object_name(o));
  }
  for (int m = 0; m < static_cast<int>(c.num_morphisms()); ++m) {
    int lhs = d.compose(n.component[c.tgt(m)], n.source.mor_map[m]);
    int rhs = d.compose(n.target.mor_map[m], n.component[c.src(m)]);
    if (lhs != rhs)
      throw Error(ErrorCode::PreconditionFailed,
                  "naturality fails at " + c.morphism_name(m), c.morphism_name(m));
  }
}

NatTransData identity_nat(const FunctorData& f) {
  NatTransData n;
  n.source = f;
  n.target = f;
  n.component.resize(f.ob_map.size());
  for (std::size_t o = 0; o < f.ob_map.size(); ++o)
    n.component[o] = f.target->identity(f.ob_map[o]);
  return n;
}

NatTransData vcompose_nats(const NatTransData& later, const NatTransData& earlier) {
  NatTransData n;
  n.source = earlier.source;
  n.target = later.target;
  n.component.resize(earlier.component.size());
  const FinCat& d = *earlier.source.target;
  for (std::size_t o = 0; o < n.component.size(); ++o) {
    n.component[o] = d.compose(later.component[o], earlier.component[o]);
    if (n.component[o] < 0)
      throw Error(ErrorCode::BoundaryMismatch, "vertical composite undefined");
  }
  return n;
}

NatTransData hcompose_nats(const NatTransData& t, const NatTransData& s) {
  // (t * s)_x = t_{S'x} ∘ G(s_x) = G'(s_x) ∘ t_{Sx}
  NatTransData n;
  n.source = compose_functors(t.source, s.source);
  n.target = compose_functors(t.target, s.target);
  const FinCat& e = *t.source.target;
  n.component.resize(s.component.size());
  for (std::size_t x = 0; x < s.component.size(); ++x) {
    int gsx = t.source.mor_map[s.component[x]];
    n.component[x] = e.compose(t.component[s.target.ob_map[x]], gsx);
  }
  return n;
}

NatTransData whisker_functor_nat(const FunctorData& g, const NatTransData& s) {
  NatTransData n;
  n.source = compose_functors(g, s.source);
  n.target = compose_functors(g, s.target);
  n.component.resize(s.component.size());
  for (std::size_t x = 0; x < s.component.size(); ++x)
    n.component[x] = g.mor_map[s.component[x]];
  return n;
}

NatTransData whisker_nat_functor(const NatTransData& t, const FunctorData& f) {
  NatTransData n;
  n.source = compose_functors(t.source, f);
  n.target = compose_functors(t.target, f);
  n.component.resize(f.ob_map.size());
  for (std::size_t x = 0; x < f.ob_map.size(); ++x)
    n.component[x] = t.component[f.ob_map[x]];
  return n;
}

bool nat_is_iso(const NatTransData& n) {
  for (int m : n.component)
    if (!n.source.target->is_iso(m)) return false;
  return true;
}

std::optional<NatTransData> nat_inverse(const NatTransData& n) {
  NatTransData inv;
  inv.source = n.target;
  inv.target = n.source;
  inv.component.resize(n.component.size());
  for (std::size_t o = 0; o < n.component.size(); ++o) {
    auto i = n.source.target->inverse(n.component[o]);
    if (!i) return std::nullopt;
    inv.component[o] = *i;
  }
  return inv;
}

bool Cone::operator<(const Cone& other) const {
  if (apex != other.apex) return apex < other.apex;
  return legs < other.legs;
}

bool cone_commutes(const FinCat& c, const Diagram& d, const Cone& cone) {
  for (const auto& a : d.arrows)
    if (c.compose(a.mor, cone.legs[a.from]) != cone.legs[a.to]) return false;
  return true;
}

namespace {

void cones_from_apex(const FinCat& c, const Diagram& d, int apex,
                     std::vector<Cone>& out) {
  std::vector<std::vector<int>> candidates(d.objects.size());
  for (std::size_t i = 0; i < d.objects.size(); ++i) {
    candidates[i] = c.hom(apex, d.objects[i]);
    if (candidates[i].empty()) return;
  }
  Cone cur;
  cur.apex = apex;
  cur.legs.assign(d.objects.size(), -1);
  // DFS with incremental commutation checks.
  std::vector<std::size_t> pos(d.objects.size(), 0);
  std::size_t depth = 0;
  while (true) {
    if (depth == d.objects.size()) {
      out.push_back(cur);
      if (depth == 0) return;
      --depth;
      ++pos[depth];
      continue;
    }
    if (pos[depth] >= candidates[depth].size()) {
      if (depth == 0) return;
      pos[depth] = 0;
      --depth;
      ++pos[depth];
      continue;
    }
    cur.legs[depth] = candidates[depth][pos[depth]];
    bool ok = true;
    for (const auto& a : d.arrows) {
      if (static_cast<std::size_t>(std::max(a.from, a.to)) != depth) continue;
      if (static_cast<std::size_t>(std::min(a.from, a.to)) > depth) continue;
      if (c.compose(a.mor, cur.legs[a.from]) != cur.legs[a.to]) {
        ok = false;
        break;
      }
    }
    if (ok) {
      ++depth;
      if (depth < d.objects.size()) pos[depth] = 0;
    } else {
      ++pos[depth];
    }
  }
}

}  // namespace

std::vector<Cone> enumerate_cones(const FinCat& c, const Diagram& d) {
  std::vector<Cone> out;
  for (int apex = 0; apex < static_cast<int>(c.num_objects()); ++apex)
    cones_from_apex(c, d, apex, out);
  return out;
}

std::vector<int> cone_mediators(const FinCat& c, const Diagram& d, const Cone& to,
                                const Cone& from) {
  std::vector<int> out;
  for (int m : c.hom(from.apex, to.apex)) {
    bool ok = true;
    for (std::size_t i = 0; i < d.objects.size(); ++i)
      if (c.compose(to.legs[i], m) != from.legs[i]) {
        ok = false;
        break;
      }
    if (ok) out.push_back(m);
  }
  return out;
}

// A cone is terminal iff for every apex z the map hom(z, apex) -> {cones on z},
// m -> legs∘m, is a bijection.
bool cone_is_terminal(const FinCat& c, const Diagram& d, const Cone& cone) {
  for (int z = 0; z < static_cast<int>(c.num_objects()); ++z) {
    std::vector<Cone> zcones;
    cones_from_apex(c, d, z, zcones);
    std::set<std::vector<int>> images;
    std::size_t count = 0;
    for (int m : c.hom(z, cone.apex)) {
      std::vector<int> img(d.objects.size());
      for (std::size_t i = 0; i < d.objects.size(); ++i)
        img[i] = c.compose(cone.legs[i], m);
      if (!images.insert(std::move(img)).second) return false;  // not injective
      ++count;
    }
    if (count != zcones.size()) return false;
  }
  return true;
}

std::optional<Cone> limit(const FinCat& c, const Diagram& d) {
  std::vector<Cone> all = enumerate_cones(c, d);
  std::sort(all.begin(), all.end());
  // Cone counts per apex; a terminal cone must represent them exactly.
  std::vector<std::size_t> counts(c.num_objects(), 0);
  for (const auto& k : all) ++counts[k.apex];
  for (const auto& cand : all) {
    bool plausible = true;
    for (int z = 0; z < static_cast<int>(c.num_objects()) && plausible; ++z)
      if (c.hom(z, cand.apex).size() != counts[z]) plausible = false;
    if (!plausible) continue;
    if (cone_is_terminal(c, d, cand)) return cand;
  }
  return std::nullopt;
}

std::optional<Cone> pullback(const FinCat& c, int f, int g) {
  if (c.tgt(f) != c.tgt(g))
    throw Error(ErrorCode::BoundaryMismatch, "pullback needs a cospan");
  Diagram d;
  d.objects = {c.src(f), c.src(g), c.tgt(f)};
  d.arrows = {{0, 2, f}, {1, 2, g}};
  return limit(c, d);
}

std::optional<Cone> pushout(const FinCat& c, int f, int g) {
  if (c.src(f) != c.src(g))
    throw Error(ErrorCode::BoundaryMismatch, "pushout needs a span");
  // Morphism indices agree between a category and its opposite.
  auto op = opposite(std::make_shared<const FinCat>(c));
  return pullback(*op, f, g);
}

std::optional<Cone> product_cone(const FinCat& c, const std::vector<int>& objects) {
  Diagram d;
  d.objects = objects;
  return limit(c, d);
}

std::optional<int> terminal_object(const FinCat& c) {
  Diagram d;
  auto cone = limit(c, d);
  if (!cone) return std::nullopt;
  return cone->apex;
}

CommaResult comma(const FunctorData& f, const FunctorData& g, const Caps& caps) {
  if (!(f.target == g.target || *f.target == *g.target))
    throw Error(ErrorCode::BoundaryMismatch, "comma needs functors with equal target");
  const FinCat& e = *f.source;
  const FinCat& e2 = *g.source;
  const FinCat& d = *f.target;

  CommaResult res;
  FinCatData data;
  data.name = "comma";
  std::map<std::tuple<int, int, int>, int> ob_index;
  for (int a = 0; a < static_cast<int>(e.num_objects()); ++a)
    for (int b = 0; b < static_cast<int>(e2.num_objects()); ++b)
      for (int al : d.hom(f.ob_map[a], g.ob_map[b])) {
        int idx = static_cast<int>(data.objects.size());
        ob_index[{a, b, al}] = idx;
        data.objects.push_back("(" + e.object_name(a) + "|" + e2.object_name(b) + "|" +
                               d.morphism_name(al) + ")");
        res.left_ob.push_back(a);
        res.right_ob.push_back(b);
        res.alpha.push_back(al);
        if (data.objects.size() > caps.max_objects)
          throw Error(ErrorCode::SizeCap, "comma category exceeds object cap");
      }

  struct MorRec {
    int src, tgt, u, v;
  };
  std::vector<MorRec> mors;
  for (int i = 0; i < static_cast<int>(data.objects.size()); ++i)
    for (int j = 0; j < static_cast<int>(data.objects.size()); ++j)
      for (int u : e.hom(res.left_ob[i], res.left_ob[j]))
        for (int v : e2.hom(res.right_ob[i], res.right_ob[j])) {
          if (d.compose(res.alpha[j], f.mor_map[u]) !=
              d.compose(g.mor_map[v], res.alpha[i]))
            continue;
          mors.push_back({i, j, u, v});
          if (mors.size() > caps.max_morphisms)
            throw Error(ErrorCode::SizeCap, "comma category exceeds morphism cap");
        }
  std::map<std::tuple<int, int, int, int>, int> mor_index;
  for (std::size_t k = 0; k < mors.size(); ++k) {
    const auto& m = mors[k];
    mor_index[{m.src, m.tgt, m.u, m.v}] = static_cast<int>(k);
    data.morphisms.push_back({"(" + e.morphism_name(m.u) + "|" + e2.morphism_name(m.v) +
                                  ")@" + std::to_string(m.src) + ">" +
                                  std::to_string(m.tgt),
                              data.objects[m.src], data.objects[m.tgt]});
  }
  for (int i = 0; i < static_cast<int>(data.objects.size()); ++i)
    data.identities[data.objects[i]] =
        data.morphisms[mor_index.at({i, i, e.identity(res.left_ob[i]),
                                     e2.identity(res.right_ob[i])})]
            .name;
  for (std::size_t k2 = 0; k2 < mors.size(); ++k2)
    for (std::size_t k1 = 0; k1 < mors.size(); ++k1) {
      if (mors[k1].tgt != mors[k2].src) continue;
      int u = e.compose(mors[k2].u, mors[k1].u);
      int v = e2.compose(mors[k2].v, mors[k1].v);
      int c3 = mor_index.at({mors[k1].src, mors[k2].tgt, u, v});
      data.compose.push_back({data.morphisms[k2].name, data.morphisms[k1].name,
                              data.morphisms[c3].name});
    }

  res.cat = validate_category(data);
  res.proj_left.source = res.cat;
  res.proj_left.target = f.source;
  res.proj_right.source = res.cat;
  res.proj_right.target = g.source;
  res.proj_left.ob_map = res.left_ob;
  res.proj_right.ob_map = res.right_ob;
  for (const auto& m : mors) {
    res.proj_left.mor_map.push_back(m.u);
    res.proj_right.mor_map.push_back(m.v);
  }
  validate_functor(res.proj_left);
  validate_functor(res.proj_right);
  return res;
}

int ProductCatResult::ob_of(int o1, int o2) const {
  for (std::size_t i = 0; i < ob_pairs.size(); ++i)
    if (ob_pairs[i] == std::pair<int, int>{o1, o2}) return static_cast<int>(i);
  return -1;
}

int ProductCatResult::mor_of(int m1, int m2) const {
  for (std::size_t i = 0; i < mor_pairs.size(); ++i)
    if (mor_pairs[i] == std::pair<int, int>{m1, m2}) return static_cast<int>(i);
  return -1;
}

ProductCatResult product_category(const CatPtr& a, const CatPtr& b, const Caps& caps) {
  ProductCatResult res;
  FinCatData data;
  data.name = a->name() + "*" + b->name();
  if (a->num_morphisms() * b->num_morphisms() > caps.max_morphisms)
    throw Error(ErrorCode::SizeCap, "product category exceeds morphism cap");
  for (int i = 0; i < static_cast<int>(a->num_objects()); ++i)
    for (int j = 0; j < static_cast<int>(b->num_objects()); ++j) {
      res.ob_pairs.push_back({i, j});
      data.objects.push_back("(" + a->object_name(i) + "|" + b->object_name(j) + ")");
    }
  auto obidx = [&](int i, int j) { return i * static_cast<int>(b->num_objects()) + j; };
  for (int i = 0; i < static_cast<int>(a->num_morphisms()); ++i)
    for (int j = 0; j < static_cast<int>(b->num_morphisms()); ++j) {
      res.mor_pairs.push_back({i, j});
      data.morphisms.push_back({"(" + a->morphism_name(i) + "|" + b->morphism_name(j) + ")",
                                data.objects[obidx(a->src(i), b->src(j))],
                                data.objects[obidx(a->tgt(i), b->tgt(j))]});
    }
  auto moridx = [&](int i, int j) { return i * static_cast<int>(b->num_morphisms()) + j; };
  for (int i = 0; i < static_cast<int>(a->num_objects()); ++i)
    for (int j = 0; j < static_cast<int>(b->num_objects()); ++j)
      data.identities[data.objects[obidx(i, j)]] =
          data.morphisms[moridx(a->identity(i), b->identity(j))].name;
  for (int g1 = 0; g1 < static_cast<int>(a->num_morphisms()); ++g1)
    for (int g2 = 0; g2 < static_cast<int>(b->num_morphisms()); ++g2)
      for (int f1 = 0; f1 < static_cast<int>(a->num_morphisms()); ++f1) {
        if (a->tgt(f1) != a->src(g1)) continue;
        int c1 = a->compose(g1, f1);
        for (int f2 = 0; f2 < static_cast<int>(b->num_morphisms()); ++f2) {
          if (b->tgt(f2) != b->src(g2)) continue;
          data.compose.push_back({data.morphisms[moridx(g1, g2)].name,
                                  data.morphisms[moridx(f1, f2)].name,
                                  data.morphisms[moridx(c1, b->compose(g2, f2))].name});
        }
      }
  res.cat = validate_category(data);
  res.proj1.source = res.cat;
  res.proj1.target = a;
  res.proj2.source = res.cat;
  res.proj2.target = b;
  for (auto& p : res.ob_pairs) {
    res.proj1.ob_map.push_back(p.first);
    res.proj2.ob_map.push_back(p.second);
  }
  for (auto& p : res.mor_pairs) {
    res.proj1.mor_map.push_back(p.first);
    res.proj2.mor_map.push_back(p.second);
  }
  validate_functor(res.proj1);
  validate_functor(res.proj2);
  return res;
}

std::vector<FunctorData> enumerate_functors(const CatPtr& c, const CatPtr& d,
                                            const Caps& caps) {
  std::vector<FunctorData> out;
  const int nob = static_cast<int>(c->num_objects());
  const int nmor = static_cast<int>(c->num_morphisms());
  std::vector<int> ob(nob, 0);
  if (nob == 0) {
    FunctorData f;
    f.source = c;
    f.target = d;
    out.push_back(f);
    return out;
  }
  if (d->num_objects() == 0) return out;

  std::vector<int> mor(nmor, -1);
  // Every composable pair (g, f) is checked at step max(g, f, g∘f), when all
  // three images are assigned.
  auto pair_checks_pass = [&](int m) {
    for (int j = 0; j <= m; ++j) {
      int cj = c->compose(m, j);
      if (cj >= 0 && cj <= m && d->compose(mor[m], mor[j]) != mor[cj]) return false;
      int jc = c->compose(j, m);
      if (jc >= 0 && jc <= m && d->compose(mor[j], mor[m]) != mor[jc]) return false;
    }
    for (int g = 0; g < m; ++g)
      for (int f = 0; f < m; ++f)
        if (c->compose(g, f) == m && d->compose(mor[g], mor[f]) != mor[m]) return false;
    return true;
  };
  // DFS over morphism images for a fixed object assignment; identities forced.
  std::function<void(int)> assign_mor = [&](int m) {
    if (m == nmor) {
      if (out.size() >= caps.max_objects)
        throw Error(ErrorCode::SizeCap, "functor enumeration exceeds cap");
      FunctorData f;
      f.source = c;
      f.target = d;
      f.ob_map = ob;
      f.mor_map = mor;
      out.push_back(std::move(f));
      return;
    }
    std::vector<int> cands;
    if (c->is_identity(m)) {
      cands = {d->identity(ob[c->src(m)])};
    } else {
      cands = d->hom(ob[c->src(m)], ob[c->tgt(m)]);
    }
    for (int img : cands) {
      mor[m] = img;
      if (pair_checks_pass(m)) assign_mor(m + 1);
    }
    mor[m] = -1;
  };

  std::function<void(int)> assign_ob = [&](int o) {
    if (o == nob) {
      assign_mor(0);
      return;
    }
    for (int img = 0; img < static_cast<int>(d->num_objects()); ++img) {
      ob[o] = img;
      assign_ob(o + 1);
    }
  };
  assign_ob(0);
  return out;
}

std::vector<FunctorData> enumerate_functors_over(const FunctorData& p,
                                                 const FunctorData& q,
                                                 const Caps& caps) {
  const CatPtr& c = p.source;
  const CatPtr& d = q.source;
  std::vector<FunctorData> out;
  const int nob = static_cast<int>(c->num_objects());
  const int nmor = static_cast<int>(c->num_morphisms());
  std::vector<int> ob(nob, -1);
  std::vector<int> mor(nmor, -1);
  if (nob == 0) {
    out.push_back({c, d, {}, {}});
    return out;
  }
  auto pair_checks_pass = [&](int m) {
    for (int j = 0; j <= m; ++j) {
      int cj = c->compose(m, j);
      if (cj >= 0 && cj <= m && d->compose(mor[m], mor[j]) != mor[cj]) return false;
      int jc = c->compose(j, m);
      if (jc >= 0 && jc <= m && d->compose(mor[j], mor[m]) != mor[jc]) return false;
    }
    for (int g = 0; g < m; ++g)
      for (int f = 0; f < m; ++f)
        if (c->compose(g, f) == m && d->compose(mor[g], mor[f]) != mor[m]) return false;
    return true;
  };
  std::function<void(int)> assign_mor = [&](int m) {
    if (m == nmor) {
      if (out.size() >= caps.max_objects)
        throw Error(ErrorCode::SizeCap, "functor enumeration exceeds cap");
      out.push_back({c, d, ob, mor});
      return;
    }
    std::vector<int> cands;
    if (c->is_identity(m)) {
      cands = {d->identity(ob[c->src(m)])};
    } else {
      for (int img : d->hom(ob[c->src(m)], ob[c->tgt(m)]))
        if (q.mor_map[img] == p.mor_map[m]) cands.push_back(img);
    }
    for (int img : cands) {
      mor[m] = img;
      if (pair_checks_pass(m)) assign_mor(m + 1);
    }
    mor[m] = -1;
  };
  std::function<void(int)> assign_ob = [&](int o) {
    if (o == nob) {
      assign_mor(0);
      return;
    }
    for (int img = 0; img < static_cast<int>(d->num_objects()); ++img) {
      if (q.ob_map[img] != p.ob_map[o]) continue;
      ob[o] = img;
      assign_ob(o + 1);
    }
  };
  assign_ob(0);
  return out;
}

std::vector<NatTransData> enumerate_nats(const FunctorData& f, const FunctorData& g) {
  std::vector<NatTransData> out;
  const FinCat& c = *f.source;
  const FinCat& d = *f.target;
  const int nob = static_cast<int>(c.num_objects());
  std::vector<int> comp(nob, -1);
  std::function<void(int)> assign = [&](int o) {
    if (o == nob) {
      NatTransData n;
      n.source = f;
      n.target = g;
      n.component = comp;
      out.push_back(std::move(n));
      return;
    }
    for (int m : d.hom(f.ob_map[o], g.ob_map[o])) {
      comp[o] = m;
      bool ok = true;
      for (int mo = 0; mo < static_cast<int>(c.num_morphisms()) && ok; ++mo) {
        int s = c.src(mo), t = c.tgt(mo);
        if (comp[s] < 0 || comp[t] < 0) continue;
        if (s != o && t != o) continue;
        if (d.compose(comp[t], f.mor_map[mo]) != d.compose(g.mor_map[mo], comp[s]))
          ok = false;
      }
      if (ok) assign(o + 1);
    }
    comp[o] = -1;
  };
  assign(0);
  return out;
}

int FunctorCategoryResult::object_of(const FunctorData& f) const {
  for (std::size_t i = 0; i < functors.size(); ++i)
    if (functors[i].ob_map == f.ob_map && functors[i].mor_map == f.mor_map)
      return static_cast<int>(i);
  return -1;
}

int FunctorCategoryResult::morphism_of(const NatTransData& n) const {
  for (std::size_t i = 0; i < nats.size(); ++i)
    if (nats[i].component == n.component &&
        nats[i].source.ob_map == n.source.ob_map &&
        nats[i].source.mor_map == n.source.mor_map &&
        nats[i].target.ob_map == n.target.ob_map &&
        nats[i].target.mor_map == n.target.mor_map)
      return static_cast<int>(i);
  return -1;
}

FunctorCategoryResult functor_category(const CatPtr& c, const CatPtr& d,
                                       const Caps& caps) {
  FunctorCategoryResult res;
  res.functors = enumerate_functors(c, d, caps);
  FinCatData data;
  data.name = "Fun(" + c->name() + "," + d->name() + ")";
  for (std::size_t i = 0; i < res.functors.size(); ++i)
    data.objects.push_back("F" + std::to_string(i));
  std::map<std::tuple<int, int, std::vector<int>>, int> mor_index;
  for (std::size_t i = 0; i < res.functors.size(); ++i)
    for (std::size_t j = 0; j < res.functors.size(); ++j)
      for (auto& n : enumerate_nats(res.functors[i], res.functors[j])) {
        int idx = static_cast<int>(res.nats.size());
        if (res.nats.size() >= caps.max_morphisms)
          throw Error(ErrorCode::SizeCap, "functor category exceeds morphism cap");
        mor_index[{static_cast<int>(i), static_cast<int>(j), n.component}] = idx;
        data.morphisms.push_back({"n" + std::to_string(idx), data.objects[i],
                                  data.objects[j]});
        res.nats.push_back(std::move(n));
      }
  const FinCat& dd = *d;
  for (std::size_t i = 0; i < res.functors.size(); ++i) {
    std::vector<int> idc(c->num_objects());
    for (std::size_t o = 0; o < idc.size(); ++o)
      idc[o] = dd.identity(res.functors[i].ob_map[o]);
    data.identities[data.objects[i]] =
        data.morphisms[mor_index.at({static_cast<int>(i), static_cast<int>(i), idc})].name;
  }
  for (std::size_t k2 = 0; k2 < res.nats.size(); ++k2)
    for (std::size_t k1 = 0; k1 < res.nats.size(); ++k1) {
      const auto& n1 = res.nats[k1];
      const auto& n2 = res.nats[k2];
      // composable iff target functor of n1 == source functor of n2
      if (!(n1.target.ob_map == n2.source.ob_map && n1.target.mor_map == n2.source.mor_map))
        continue;
      std::vector<int> comp(c->num_objects());
      for (std::size_t o = 0; o < comp.size(); ++o)
        comp[o] = dd.compose(n2.component[o], n1.component[o]);
      int si = -1, ti = -1;
      for (std::size_t q = 0; q < res.functors.size(); ++q) {
        if (res.functors[q].ob_map == n1.source.ob_map &&
            res.functors[q].mor_map == n1.source.mor_map)
          si = static_cast<int>(q);
        if (res.functors[q].ob_map == n2.target.ob_map &&
            res.functors[q].mor_map == n2.target.mor_map)
          ti = static_cast<int>(q);
      }
      data.compose.push_back({data.morphisms[k2].name, data.morphisms[k1].name,
                              data.morphisms[mor_index.at({si, ti, comp})].name});
    }
  res.cat = validate_category(data);
  return res;
}

EquivalenceReport is_equivalence(const FunctorData& f) {
  EquivalenceReport rep;
  const FinCat& c = *f.source;
  const FinCat& d = *f.target;
  rep.fully_faithful = true;
  for (int a = 0; a < static_cast<int>(c.num_objects()) && rep.fully_faithful; ++a)
    for (int b = 0; b < static_cast<int>(c.num_objects()) && rep.fully_faithful; ++b) {
      auto source_hom = c.hom(a, b);
      auto target_hom = d.hom(f.ob_map[a], f.ob_map[b]);
      std::set<int> images;
      for (int m : source_hom) images.insert(f.mor_map[m]);
      if (images.size() != source_hom.size() || images.size() != target_hom.size()) {
        rep.fully_faithful = false;
        rep.witness = "hom(" + c.object_name(a) + "," + c.object_name(b) + ")";
      }
    }
  auto iso_to_image = [&](int dob) -> std::optional<std::pair<int, int>> {
    for (int a = 0; a < static_cast<int>(c.num_objects()); ++a)
      for (int m : d.hom(dob, f.ob_map[a]))
        if (d.is_iso(m)) return std::make_pair(a, m);
    return std::nullopt;
  };
  rep.essentially_surjective = true;
  for (int dob = 0; dob < static_cast<int>(d.num_objects()); ++dob)
    if (!iso_to_image(dob)) {
      rep.essentially_surjective = false;
      if (rep.witness.empty()) rep.witness = d.object_name(dob);
      break;
    }
  if (!rep.is_equivalence()) return rep;

  // Quasi-inverse: send d to the least preimage-up-to-iso, transport morphisms
  // through the chosen isos, using full faithfulness to pick unique preimages.
  FunctorData g;
  g.source = f.target;
  g.target = f.source;
  g.ob_map.resize(d.num_objects());
  std::vector<int> iso(d.num_objects());  // iso: dob -> F(g(dob))
  for (int dob = 0; dob < static_cast<int>(d.num_objects()); ++dob) {
    auto pick = iso_to_image(dob);
    g.ob_map[dob] = pick->first;
    iso[dob] = pick->second;
  }
  g.mor_map.resize(d.num_morphisms());
  for (int m = 0; m < static_cast<int>(d.num_morphisms()); ++m) {
    int s = d.src(m), t = d.tgt(m);
    int conj = d.compose(iso[t], d.compose(m, *d.inverse(iso[s])));
    int pre = -1;
    for (int cm : c.hom(g.ob_map[s], g.ob_map[t]))
      if (f.mor_map[cm] == conj) {
        pre = cm;
        break;
      }
    g.mor_map[m] = pre;
  }
  validate_functor(g);
  rep.quasi_inverse = g;
  return rep;
}

CatPtr opposite(const CatPtr& c) {
  FinCatData data;
  data.name = c->name() + "_op";
  for (std::size_t o = 0; o < c->num_objects(); ++o)
    data.objects.push_back(c->object_name(static_cast<int>(o)));
  for (int m = 0; m < static_cast<int>(c->num_morphisms()); ++m)
    data.morphisms.push_back({c->morphism_name(m), c->object_name(c->tgt(m)),
                              c->object_name(c->src(m))});
  for (std::size_t o = 0; o < c->num_objects(); ++o)
    data.identities[c->object_name(static_cast<int>(o))] =
        c->morphism_name(c->identity(static_cast<int>(o)));
  for (int g = 0; g < static_cast<int>(c->num_morphisms()); ++g)
    for (int f = 0; f < static_cast<int>(c->num_morphisms()); ++f)
      if (c->compose(g, f) >= 0)
        data.compose.push_back({c->morphism_name(f), c->morphism_name(g),
                                c->morphism_name(c->compose(g, f))});
  return validate_category(data);
}

FunctorData opposite_functor(const FunctorData& f) {
  FunctorData g;
  g.source = opposite(f.source);
  g.target = opposite(f.target);
  g.ob_map = f.ob_map;
  g.mor_map = f.mor_map;
  return g;
}

SubcategoryResult full_subcategory(const CatPtr& c, const std::vector<int>& objects) {
  SubcategoryResult res;
  res.ob_of = objects;
  FinCatData data;
  data.name = c->name() + "|full";
  std::map<int, int> ob_new;
  for (std::size_t i = 0; i < objects.size(); ++i) {
    ob_new[objects[i]] = static_cast<int>(i);
    data.objects.push_back(c->object_name(objects[i]));
  }
  for (int m = 0; m < static_cast<int>(c->num_morphisms()); ++m) {
    if (!ob_new.count(c->src(m)) || !ob_new.count(c->tgt(m))) continue;
    res.mor_of.push_back(m);
    data.morphisms.push_back({c->morphism_name(m), c->object_name(c->src(m)),
                              c->object_name(c->tgt(m))});
  }
  for (int o : objects)
    data.identities[c->object_name(o)] = c->morphism_name(c->identity(o));
  for (int m2 : res.mor_of)
    for (int m1 : res.mor_of) {
      if (c->tgt(m1) != c->src(m2)) continue;
      data.compose.push_back({c->morphism_name(m2), c->morphism_name(m1),
                              c->morphism_name(c->compose(m2, m1))});
    }
  res.cat = validate_category(data);
  res.incl.source = res.cat;
  res.incl.target = c;
  res.incl.ob_map = res.ob_of;
  res.incl.mor_map = res.mor_of;
  validate_functor(res.incl);
  return res;
}

bool categories_isomorphic(const CatPtr& a, const CatPtr& b) {
  if (a->num_objects() != b->num_objects() || a->num_morphisms() != b->num_morphisms())
    return false;
  const int nob = static_cast<int>(a->num_objects());
  const int nmor = static_cast<int>(a->num_morphisms());
  std::vector<int> ob(nob, -1);
  std::vector<bool> ob_used(nob, false);
  std::vector<int> mor(nmor, -1);
  std::vector<bool> mor_used(nmor, false);

  auto pair_checks_pass = [&](int m) {
    for (int j = 0; j <= m; ++j) {
      int cj = a->compose(m, j);
      if (cj >= 0 && cj <= m && b->compose(mor[m], mor[j]) != mor[cj]) return false;
      int jc = a->compose(j, m);
      if (jc >= 0 && jc <= m && b->compose(mor[j], mor[m]) != mor[jc]) return false;
    }
    for (int g = 0; g < m; ++g)
      for (int f = 0; f < m; ++f)
        if (a->compose(g, f) == m && b->compose(mor[g], mor[f]) != mor[m]) return false;
    return true;
  };
  std::function<bool(int)> assign_mor = [&](int m) -> bool {
    if (m == nmor) return true;
    for (int img : b->hom(ob[a->src(m)], ob[a->tgt(m)])) {
      if (mor_used[img]) continue;
      if (a->is_identity(m) != (img == b->identity(ob[a->src(m)]))) continue;
      mor[m] = img;
      mor_used[img] = true;
      if (pair_checks_pass(m) && assign_mor(m + 1)) return true;
      mor_used[img] = false;
      mor[m] = -1;
    }
    return false;
  };
  std::function<bool(int)> assign_ob = [&](int o) -> bool {
    if (o == nob) return assign_mor(0);
    for (int img = 0; img < nob; ++img) {
      if (ob_used[img]) continue;
      if (a->hom(o, o).size() != b->hom(img, img).size()) continue;
      ob[o] = img;
      ob_used[img] = true;
      if (assign_ob(o + 1)) return true;
      ob_used[img] = false;
      ob[o] = -1;
    }
    return false;
  };
  return assign_ob(0);
}

}  // namespace corrcalc
