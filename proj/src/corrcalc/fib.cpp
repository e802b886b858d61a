#include "corrcalc/fib.hpp"

#include <algorithm>
#include <tuple>

namespace corrcalc {

bool is_cartesian_lift(const FunctorData& p, int phi, int f) {
  const FinCat& e = *p.source;
  const FinCat& d = *p.target;
  if (p.mor_map[phi] != f)
    throw Error(ErrorCode::NotOverF, "candidate lift does not lie over the base arrow");
  int esrc = e.src(phi), etgt = e.tgt(phi);
  for (int e2 = 0; e2 < static_cast<int>(e.num_objects()); ++e2)
    for (int psi : e.hom(e2, etgt))
      for (int h : d.hom(p.ob_map[e2], d.src(f))) {
        if (d.compose(f, h) != p.mor_map[psi]) continue;
        int count = 0;
        for (int chi : e.hom(e2, esrc))
          if (e.compose(phi, chi) == psi && p.mor_map[chi] == h) ++count;
        if (count != 1) return false;
      }
  return true;
}

bool is_cocartesian_lift(const FunctorData& p, int phi, int f) {
  const FinCat& e = *p.source;
  const FinCat& d = *p.target;
  if (p.mor_map[phi] != f)
    throw Error(ErrorCode::NotOverF, "candidate lift does not lie over the base arrow");
  int esrc = e.src(phi), etgt = e.tgt(phi);
  for (int e2 = 0; e2 < static_cast<int>(e.num_objects()); ++e2)
    for (int psi : e.hom(esrc, e2))
      for (int h : d.hom(d.tgt(f), p.ob_map[e2])) {
        if (d.compose(h, f) != p.mor_map[psi]) continue;
        int count = 0;
        for (int chi : e.hom(etgt, e2))
          if (e.compose(chi, phi) == psi && p.mor_map[chi] == h) ++count;
        if (count != 1) return false;
      }
  return true;
}

FibrationCheck check_fibration(const FunctorData& proj, const std::set<int>& cart_over,
                               const std::set<int>& cocart_over) {
  validate_functor(proj);
  FibrationCheck out;
  Fibration fib;
  fib.total = proj.source;
  fib.base = proj.target;
  fib.proj = proj;
  fib.cart_over = cart_over;
  fib.cocart_over = cocart_over;
  const FinCat& e = *proj.source;
  const FinCat& d = *proj.target;
  for (int f : cart_over) {
    for (int eo = 0; eo < static_cast<int>(e.num_objects()); ++eo) {
      if (proj.ob_map[eo] != d.tgt(f)) continue;
      int found = -1;
      for (int phi = 0; phi < static_cast<int>(e.num_morphisms()); ++phi) {
        if (e.tgt(phi) != eo || proj.mor_map[phi] != f) continue;
        if (is_cartesian_lift(proj, phi, f)) {
          found = phi;
          break;
        }
      }
      if (found < 0) {
        out.failure = "no Cartesian lift of " + d.morphism_name(f) + " ending at " +
                      e.object_name(eo);
        out.failure_at = {f, eo};
        return out;
      }
      fib.cart_lifts[{f, eo}] = found;
    }
  }
  for (int f : cocart_over) {
    for (int eo = 0; eo < static_cast<int>(e.num_objects()); ++eo) {
      if (proj.ob_map[eo] != d.src(f)) continue;
      int found = -1;
      for (int phi = 0; phi < static_cast<int>(e.num_morphisms()); ++phi) {
        if (e.src(phi) != eo || proj.mor_map[phi] != f) continue;
        if (is_cocartesian_lift(proj, phi, f)) {
          found = phi;
          break;
        }
      }
      if (found < 0) {
        out.failure = "no co-Cartesian lift of " + d.morphism_name(f) +
                      " starting at " + e.object_name(eo);
        out.failure_at = {f, eo};
        return out;
      }
      fib.cocart_lifts[{f, eo}] = found;
    }
  }
  out.fibration = std::move(fib);
  return out;
}

void validate_cat_pseudofunctor(const CatPseudofunctor& p) {
  const FinCat& base = *p.base;
  if (p.fibre.size() != base.num_objects() ||
      p.transition.size() != base.num_morphisms() ||
      p.unitor.size() != base.num_objects())
    throw Error(ErrorCode::BadInput, "pseudofunctor family has wrong shape");
  for (int f = 0; f < static_cast<int>(base.num_morphisms()); ++f) {
    const FunctorData& t = p.transition[f];
    int want_src = p.contravariant ? base.tgt(f) : base.src(f);
    int want_tgt = p.contravariant ? base.src(f) : base.tgt(f);
    if (!(*t.source == *p.fibre[want_src]) || !(*t.target == *p.fibre[want_tgt]))
      throw Error(ErrorCode::BoundaryMismatch,
                  "transition of " + base.morphism_name(f) + " has wrong boundary");
    validate_functor(t);
  }
  for (int o = 0; o < static_cast<int>(base.num_objects()); ++o) {
    const NatTransData& u = p.unitor[o];
    validate_nat(u);
    if (!nat_is_iso(u))
      throw Error(ErrorCode::NonInvertibleCoherence, "unitor at " + base.object_name(o));
    if (!(u.source == identity_functor(p.fibre[o])) ||
        !(u.target == p.transition[base.identity(o)]))
      throw Error(ErrorCode::BoundaryMismatch,
                  "unitor boundary at " + base.object_name(o));
  }
  for (int g = 0; g < static_cast<int>(base.num_morphisms()); ++g)
    for (int f = 0; f < static_cast<int>(base.num_morphisms()); ++f) {
      if (base.compose(g, f) < 0) continue;
      auto it = p.compositor.find({g, f});
      if (it == p.compositor.end())
        throw Error(ErrorCode::BadInput, "missing compositor at (" +
                        base.morphism_name(g) + ", " + base.morphism_name(f) + ")");
      const NatTransData& c = it->second;
      validate_nat(c);
      if (!nat_is_iso(c))
        throw Error(ErrorCode::NonInvertibleCoherence,
                    "compositor at (" + base.morphism_name(g) + ", " +
                        base.morphism_name(f) + ")");
      FunctorData lhs = p.contravariant
                            ? compose_functors(p.transition[f], p.transition[g])
                            : compose_functors(p.transition[g], p.transition[f]);
      if (!(c.source == lhs) || !(c.target == p.transition[base.compose(g, f)]))
        throw Error(ErrorCode::BoundaryMismatch,
                    "compositor boundary at (" + base.morphism_name(g) + ", " +
                        base.morphism_name(f) + ")");
    }
  // Associativity coherence.
  for (int h = 0; h < static_cast<int>(base.num_morphisms()); ++h)
    for (int g = 0; g < static_cast<int>(base.num_morphisms()); ++g) {
      if (base.compose(h, g) < 0) continue;
      for (int f = 0; f < static_cast<int>(base.num_morphisms()); ++f) {
        if (base.compose(g, f) < 0) continue;
        int gf = base.compose(g, f), hg = base.compose(h, g);
        NatTransData lhs, rhs;
        if (!p.contravariant) {
          lhs = vcompose_nats(p.comp_at(h, gf),
                              whisker_functor_nat(p.transition[h], p.comp_at(g, f)));
          rhs = vcompose_nats(p.comp_at(hg, f),
                              whisker_nat_functor(p.comp_at(h, g), p.transition[f]));
        } else {
          lhs = vcompose_nats(p.comp_at(h, gf),
                              whisker_nat_functor(p.comp_at(g, f), p.transition[h]));
          rhs = vcompose_nats(p.comp_at(hg, f),
                              whisker_functor_nat(p.transition[f], p.comp_at(h, g)));
        }
        if (lhs.component != rhs.component)
          throw Error(ErrorCode::CoherenceFailure,
                      "compositor coherence fails at (" + base.morphism_name(h) + ", " +
                          base.morphism_name(g) + ", " + base.morphism_name(f) + ")");
      }
    }
  // Unit coherence.
  for (int f = 0; f < static_cast<int>(base.num_morphisms()); ++f) {
    int s = base.src(f), t = base.tgt(f);
    NatTransData left, right;
    if (!p.contravariant) {
      left = vcompose_nats(p.comp_at(f, base.identity(s)),
                           whisker_functor_nat(p.transition[f], p.unitor[s]));
      right = vcompose_nats(p.comp_at(base.identity(t), f),
                            whisker_nat_functor(p.unitor[t], p.transition[f]));
    } else {
      left = vcompose_nats(p.comp_at(f, base.identity(s)),
                           whisker_nat_functor(p.unitor[s], p.transition[f]));
      right = vcompose_nats(p.comp_at(base.identity(t), f),
                            whisker_functor_nat(p.transition[f], p.unitor[t]));
    }
    auto idf = identity_nat(p.transition[f]);
    if (left.component != idf.component || right.component != idf.component)
      throw Error(ErrorCode::CoherenceFailure,
                  "unit coherence fails at " + base.morphism_name(f));
  }
}

CatPseudofunctor strict_cat_functor(const CatPtr& base, bool contravariant,
                                    std::vector<CatPtr> fibres,
                                    std::vector<FunctorData> transitions) {
  CatPseudofunctor p;
  p.base = base;
  p.contravariant = contravariant;
  p.fibre = std::move(fibres);
  p.transition = std::move(transitions);
  for (int o = 0; o < static_cast<int>(base->num_objects()); ++o) {
    NatTransData u = identity_nat(identity_functor(p.fibre[o]));
    u.target = p.transition[base->identity(o)];
    p.unitor.push_back(std::move(u));
  }
  for (int g = 0; g < static_cast<int>(base->num_morphisms()); ++g)
    for (int f = 0; f < static_cast<int>(base->num_morphisms()); ++f) {
      int gf = base->compose(g, f);
      if (gf < 0) continue;
      FunctorData comp = contravariant
                             ? compose_functors(p.transition[f], p.transition[g])
                             : compose_functors(p.transition[g], p.transition[f]);
      NatTransData id = identity_nat(comp);
      id.target = p.transition[gf];
      p.compositor[{g, f}] = std::move(id);
    }
  validate_cat_pseudofunctor(p);
  return p;
}

CatPseudofunctor constant_cat_functor(const CatPtr& base, const CatPtr& value) {
  std::vector<CatPtr> fibres(base->num_objects(), value);
  std::vector<FunctorData> trans(base->num_morphisms(), identity_functor(value));
  return strict_cat_functor(base, false, std::move(fibres), std::move(trans));
}

void validate_cat_pseudotransformation(const CatPseudofunctor& f,
                                       const CatPseudofunctor& g,
                                       const CatPseudoTransformation& t) {
  const FinCat& base = *f.base;
  if (f.contravariant != g.contravariant)
    throw Error(ErrorCode::BadInput, "mixed variance transformation");
  if (t.component.size() != base.num_objects() || t.cell.size() != base.num_morphisms())
    throw Error(ErrorCode::BadInput, "transformation has wrong shape");
  for (int o = 0; o < static_cast<int>(base.num_objects()); ++o) {
    validate_functor(t.component[o]);
    if (!(*t.component[o].source == *f.fibre[o]) ||
        !(*t.component[o].target == *g.fibre[o]))
      throw Error(ErrorCode::BoundaryMismatch,
                  "component boundary at " + base.object_name(o));
  }
  // Cells: covariant case phi_tgt ∘ F(u) => G(u) ∘ phi_src; contravariant
  // case phi_src ∘ F(u) => G(u) ∘ phi_tgt.
  for (int u = 0; u < static_cast<int>(base.num_morphisms()); ++u) {
    int a = f.contravariant ? base.tgt(u) : base.src(u);
    int b = f.contravariant ? base.src(u) : base.tgt(u);
    const NatTransData& cell = t.cell[u];
    validate_nat(cell);
    if (!nat_is_iso(cell))
      throw Error(ErrorCode::NonInvertibleCoherence, "cell at " + base.morphism_name(u));
    if (!(cell.source == compose_functors(t.component[b], f.transition[u])) ||
        !(cell.target == compose_functors(g.transition[u], t.component[a])))
      throw Error(ErrorCode::BoundaryMismatch,
                  "cell boundary at " + base.morphism_name(u));
  }
  // Unit coherence: cell_id ∘ (phi ⊳ unitor^F) = unitor^G ⊲ phi.
  for (int o = 0; o < static_cast<int>(base.num_objects()); ++o) {
    auto lhs = vcompose_nats(t.cell[base.identity(o)],
                             whisker_functor_nat(t.component[o], f.unitor[o]));
    auto rhs = whisker_nat_functor(g.unitor[o], t.component[o]);
    if (lhs.component != rhs.component)
      throw Error(ErrorCode::CoherenceFailure,
                  "transformation unit axiom fails at " + base.object_name(o));
  }
  // Composition coherence.
  for (int v = 0; v < static_cast<int>(base.num_morphisms()); ++v)
    for (int u = 0; u < static_cast<int>(base.num_morphisms()); ++u) {
      int vu = base.compose(v, u);
      if (vu < 0) continue;
      NatTransData lhs, rhs;
      if (!f.contravariant) {
        lhs = vcompose_nats(t.cell[vu], whisker_functor_nat(t.component[base.tgt(v)],
                                                            f.comp_at(v, u)));
        rhs = vcompose_nats(
            whisker_nat_functor(g.comp_at(v, u), t.component[base.src(u)]),
            vcompose_nats(whisker_functor_nat(g.transition[v], t.cell[u]),
                          whisker_nat_functor(t.cell[v], f.transition[u])));
      } else {
        lhs = vcompose_nats(t.cell[vu], whisker_functor_nat(t.component[base.src(u)],
                                                            f.comp_at(v, u)));
        rhs = vcompose_nats(
            whisker_nat_functor(g.comp_at(v, u), t.component[base.tgt(v)]),
            vcompose_nats(whisker_functor_nat(g.transition[u], t.cell[v]),
                          whisker_nat_functor(t.cell[u], f.transition[v])));
      }
      if (lhs.component != rhs.component)
        throw Error(ErrorCode::CoherenceFailure,
                    "transformation composition axiom fails at (" +
                        base.morphism_name(v) + ", " + base.morphism_name(u) + ")");
    }
}

bool cat_pseudofunctors_isomorphic(const CatPseudofunctor& f,
                                   const CatPseudofunctor& g) {
  const FinCat& base = *f.base;
  if (f.contravariant != g.contravariant) return false;
  std::vector<std::vector<FunctorData>> comps(base.num_objects());
  for (int o = 0; o < static_cast<int>(base.num_objects()); ++o) {
    for (auto& cand : enumerate_functors(f.fibre[o], g.fibre[o])) {
      auto rep = is_equivalence(cand);
      std::set<int> obs(cand.ob_map.begin(), cand.ob_map.end());
      bool bijective = obs.size() == cand.ob_map.size() &&
                       obs.size() == g.fibre[o]->num_objects();
      if (bijective && rep.fully_faithful) comps[o].push_back(cand);
    }
    if (comps[o].empty()) return false;
  }
  CatPseudoTransformation t;
  t.component.resize(base.num_objects());
  t.cell.resize(base.num_morphisms());
  std::function<bool(int)> cells = [&](int u) -> bool {
    if (u == static_cast<int>(base.num_morphisms())) {
      try {
        validate_cat_pseudotransformation(f, g, t);
        return true;
      } catch (const Error&) {
        return false;
      }
    }
    int a = f.contravariant ? base.tgt(u) : base.src(u);
    int b = f.contravariant ? base.src(u) : base.tgt(u);
    auto src = compose_functors(t.component[b], f.transition[u]);
    auto tgt = compose_functors(g.transition[u], t.component[a]);
    for (auto& cell : enumerate_nats(src, tgt)) {
      if (!nat_is_iso(cell)) continue;
      t.cell[u] = cell;
      if (cells(u + 1)) return true;
    }
    return false;
  };
  std::function<bool(int)> assign = [&](int o) -> bool {
    if (o == static_cast<int>(base.num_objects())) return cells(0);
    for (const auto& cand : comps[o]) {
      t.component[o] = cand;
      if (assign(o + 1)) return true;
    }
    return false;
  };
  return assign(0);
}

Fibration grothendieck(const CatPseudofunctor& p, const Caps& caps) {
  validate_cat_pseudofunctor(p);
  const FinCat& base = *p.base;
  FinCatData d;
  d.name = std::string("int(") + base.name() + ")";
  std::vector<std::pair<int, int>> obs;
  std::map<std::pair<int, int>, int> ob_index;
  for (int i = 0; i < static_cast<int>(base.num_objects()); ++i)
    for (int x = 0; x < static_cast<int>(p.fibre[i]->num_objects()); ++x) {
      ob_index[{i, x}] = static_cast<int>(obs.size());
      obs.push_back({i, x});
      d.objects.push_back("(" + base.object_name(i) + "|" +
                          p.fibre[i]->object_name(x) + ")");
      if (obs.size() > caps.max_objects)
        throw Error(ErrorCode::SizeCap, "total category exceeds object cap");
    }
  struct MorRec {
    int src, tgt, f, xi;
  };
  std::vector<MorRec> mors;
  std::map<std::tuple<int, int, int, int>, int> mor_index;
  for (int i = 0; i < static_cast<int>(obs.size()); ++i)
    for (int j = 0; j < static_cast<int>(obs.size()); ++j) {
      auto [di, x] = obs[i];
      auto [dj, x2] = obs[j];
      for (int f : base.hom(di, dj)) {
        // covariant: xi: F(f)(x) -> x2 in the fibre over dj; contravariant:
        // xi: x -> F(f)(x2) in the fibre over di.
        std::vector<int> xis = p.contravariant
                                   ? p.fibre[di]->hom(x, p.transition[f].ob_map[x2])
                                   : p.fibre[dj]->hom(p.transition[f].ob_map[x], x2);
        for (int xi : xis) {
          mor_index[{i, j, f, xi}] = static_cast<int>(mors.size());
          mors.push_back({i, j, f, xi});
          d.morphisms.push_back(
              {"(" + base.morphism_name(f) + "|" +
                   (p.contravariant ? p.fibre[di] : p.fibre[dj])->morphism_name(xi) +
                   ")@" + std::to_string(i) + ">" + std::to_string(j),
               d.objects[i], d.objects[j]});
          if (mors.size() > caps.max_morphisms)
            throw Error(ErrorCode::SizeCap, "total category exceeds morphism cap");
        }
      }
    }
  for (int i = 0; i < static_cast<int>(obs.size()); ++i) {
    auto [di, x] = obs[i];
    int idf = base.identity(di);
    auto inv = nat_inverse(p.unitor[di]);
    int xi = p.contravariant ? p.unitor[di].component[x] : inv->component[x];
    d.identities[d.objects[i]] = d.morphisms[mor_index.at({i, i, idf, xi})].name;
  }
  for (std::size_t k2 = 0; k2 < mors.size(); ++k2)
    for (std::size_t k1 = 0; k1 < mors.size(); ++k1) {
      if (mors[k1].tgt != mors[k2].src) continue;
      const auto& m1 = mors[k1];
      const auto& m2 = mors[k2];
      int f = m1.f, g = m2.f;
      int gf = base.compose(g, f);
      int xi;
      if (!p.contravariant) {
        // F(gf)x --inv compositor--> F(g)F(f)x --F(g)(xi1)--> F(g)x' --xi2--> x''
        auto inv = nat_inverse(p.comp_at(g, f));
        const FinCat& fib = *p.fibre[obs[m2.tgt].first];
        int x0 = obs[m1.src].second;
        xi = fib.compose(m2.xi, fib.compose(p.transition[g].mor_map[m1.xi],
                                            inv->component[x0]));
      } else {
        // x --xi1--> F(f)x' --F(f)(xi2)--> F(f)F(g)x'' --compositor--> F(gf)x''
        const FinCat& fib = *p.fibre[obs[m1.src].first];
        int x2 = obs[m2.tgt].second;
        xi = fib.compose(p.comp_at(g, f).component[x2],
                         fib.compose(p.transition[f].mor_map[m2.xi], m1.xi));
      }
      d.compose.push_back({d.morphisms[k2].name, d.morphisms[k1].name,
                           d.morphisms[mor_index.at({m1.src, m2.tgt, gf, xi})].name});
    }
  auto total = validate_category(d);
  FunctorData proj;
  proj.source = total;
  proj.target = p.base;
  for (auto& [di, x] : obs) {
    proj.ob_map.push_back(di);
    (void)x;
  }
  for (auto& m : mors) proj.mor_map.push_back(m.f);
  validate_functor(proj);

  std::set<int> all;
  for (int f = 0; f < static_cast<int>(base.num_morphisms()); ++f) all.insert(f);
  auto check =
      p.contravariant ? check_fibration(proj, all, {}) : check_fibration(proj, {}, all);
  if (!check.fibration)
    throw Error(ErrorCode::CoherenceFailure,
                "integrated category is not fibred: " + check.failure);
  return *check.fibration;
}

namespace {

// Fibre category of a fibration at a base object, with index maps back to
// the total category.
struct FibreCat {
  CatPtr cat;
  std::vector<int> obs;
  std::vector<int> mors;
  std::map<int, int> ob_of_total;
  std::map<int, int> mor_of_total;
};

FibreCat fibre_of(const FunctorData& proj, int dob) {
  FibreCat out;
  const FinCat& e = *proj.source;
  const FinCat& d = *proj.target;
  FinCatData data;
  data.name = e.name() + "@" + d.object_name(dob);
  for (int eo = 0; eo < static_cast<int>(e.num_objects()); ++eo)
    if (proj.ob_map[eo] == dob) {
      out.ob_of_total[eo] = static_cast<int>(out.obs.size());
      out.obs.push_back(eo);
      data.objects.push_back(e.object_name(eo));
    }
  for (int m = 0; m < static_cast<int>(e.num_morphisms()); ++m) {
    if (proj.mor_map[m] != d.identity(dob)) continue;
    if (!out.ob_of_total.count(e.src(m))) continue;
    out.mor_of_total[m] = static_cast<int>(out.mors.size());
    out.mors.push_back(m);
    data.morphisms.push_back(
        {e.morphism_name(m), e.object_name(e.src(m)), e.object_name(e.tgt(m))});
  }
  for (int eo : out.obs)
    data.identities[e.object_name(eo)] = e.morphism_name(e.identity(eo));
  for (int m2 : out.mors)
    for (int m1 : out.mors) {
      if (e.tgt(m1) != e.src(m2)) continue;
      data.compose.push_back({e.morphism_name(m2), e.morphism_name(m1),
                              e.morphism_name(e.compose(m2, m1))});
    }
  out.cat = validate_category(data);
  return out;
}

// Unique morphism over an identity with a prescribed composite against the
// given structural arrow.
int factor_over_identity(const Fibration& p, int from, int to, int through,
                         int target, bool through_first) {
  const FinCat& e = *p.total;
  int found = -1;
  for (int u : e.hom(from, to)) {
    if (p.proj.mor_map[u] != p.base->identity(p.proj.ob_map[from])) continue;
    int composite = through_first ? e.compose(u, through) : e.compose(through, u);
    if (composite != target) continue;
    if (found >= 0)
      throw Error(ErrorCode::NonUniqueMediator, "two factorizations over the identity");
    found = u;
  }
  if (found < 0)
    throw Error(ErrorCode::NonUniqueMediator, "no factorization over the identity");
  return found;
}

}  // namespace

CatPseudofunctor fibre_transport(const Fibration& p, bool contravariant) {
  const FinCat& d = *p.base;
  const FinCat& e = *p.total;
  CatPseudofunctor out;
  out.base = p.base;
  out.contravariant = contravariant;
  std::vector<FibreCat> fibres;
  for (int i = 0; i < static_cast<int>(d.num_objects()); ++i) {
    fibres.push_back(fibre_of(p.proj, i));
    out.fibre.push_back(fibres.back().cat);
  }
  out.transition.resize(d.num_morphisms());
  for (int f = 0; f < static_cast<int>(d.num_morphisms()); ++f) {
    int s = d.src(f), t = d.tgt(f);
    FunctorData tr;
    if (!contravariant) {
      tr.source = fibres[s].cat;
      tr.target = fibres[t].cat;
      for (int x : fibres[s].obs)
        tr.ob_map.push_back(fibres[t].ob_of_total.at(e.tgt(p.cocart_lift(f, x))));
      for (int m : fibres[s].mors) {
        int x = e.src(m), y = e.tgt(m);
        int lx = p.cocart_lift(f, x), ly = p.cocart_lift(f, y);
        int n = factor_over_identity(p, e.tgt(lx), e.tgt(ly), lx, e.compose(ly, m),
                                     true);
        tr.mor_map.push_back(fibres[t].mor_of_total.at(n));
      }
    } else {
      tr.source = fibres[t].cat;
      tr.target = fibres[s].cat;
      for (int x : fibres[t].obs)
        tr.ob_map.push_back(fibres[s].ob_of_total.at(e.src(p.cart_lift(f, x))));
      for (int m : fibres[t].mors) {
        int x = e.src(m), y = e.tgt(m);
        int lx = p.cart_lift(f, x), ly = p.cart_lift(f, y);
        int n = factor_over_identity(p, e.src(lx), e.src(ly), ly, e.compose(m, lx),
                                     false);
        tr.mor_map.push_back(fibres[s].mor_of_total.at(n));
      }
    }
    validate_functor(tr);
    out.transition[f] = tr;
  }
  for (int i = 0; i < static_cast<int>(d.num_objects()); ++i) {
    NatTransData u;
    u.source = identity_functor(fibres[i].cat);
    u.target = out.transition[d.identity(i)];
    for (int x : fibres[i].obs) {
      int lift = contravariant ? p.cart_lift(d.identity(i), x)
                               : p.cocart_lift(d.identity(i), x);
      int cell = contravariant ? *e.inverse(lift) : lift;
      u.component.push_back(fibres[i].mor_of_total.at(cell));
    }
    validate_nat(u);
    out.unitor.push_back(std::move(u));
  }
  for (int g = 0; g < static_cast<int>(d.num_morphisms()); ++g)
    for (int f = 0; f < static_cast<int>(d.num_morphisms()); ++f) {
      int gf = d.compose(g, f);
      if (gf < 0) continue;
      NatTransData c;
      if (!contravariant) {
        c.source = compose_functors(out.transition[g], out.transition[f]);
        c.target = out.transition[gf];
        const auto& fs = fibres[d.src(f)];
        const auto& ft = fibres[d.tgt(g)];
        for (int x : fs.obs) {
          int lf = p.cocart_lift(f, x);
          int lg = p.cocart_lift(g, e.tgt(lf));
          int lgf = p.cocart_lift(gf, x);
          int n = factor_over_identity(p, e.tgt(lg), e.tgt(lgf), e.compose(lg, lf),
                                       lgf, true);
          c.component.push_back(ft.mor_of_total.at(n));
        }
      } else {
        c.source = compose_functors(out.transition[f], out.transition[g]);
        c.target = out.transition[gf];
        const auto& ft = fibres[d.tgt(g)];
        const auto& fs = fibres[d.src(f)];
        for (int x : ft.obs) {
          int lg = p.cart_lift(g, x);
          int lf = p.cart_lift(f, e.src(lg));
          int lgf = p.cart_lift(gf, x);
          int n = factor_over_identity(p, e.src(lf), e.src(lgf), lgf,
                                       e.compose(lg, lf), false);
          c.component.push_back(fs.mor_of_total.at(n));
        }
      }
      validate_nat(c);
      out.compositor[{g, f}] = std::move(c);
    }
  validate_cat_pseudofunctor(out);
  return out;
}

bool fibrations_equivalent(const Fibration& a, const Fibration& b) {
  if (!(*a.base == *b.base)) return false;
  for (auto& cand : enumerate_functors_over(a.proj, b.proj)) {
    auto rep = is_equivalence(cand);
    if (!rep.is_equivalence()) continue;
    bool preserves = true;
    for (const auto& [key, lift] : a.cart_lifts) {
      if (!b.cart_over.count(key.first)) continue;
      if (!is_cartesian_lift(b.proj, cand.mor_map[lift], key.first)) preserves = false;
    }
    for (const auto& [key, lift] : a.cocart_lifts) {
      if (!b.cocart_over.count(key.first)) continue;
      if (!is_cocartesian_lift(b.proj, cand.mor_map[lift], key.first)) preserves = false;
    }
    if (preserves) return true;
  }
  return false;
}

FreeCartesianResult free_cartesian(const MarkedCat& m, const FunctorData& p,
                                   const std::vector<Fibration>& test_family,
                                   const Caps& caps) {
  FreeCartesianResult out;
  auto comma_res = marked_comma(m, p, caps);
  auto check = check_fibration(comma_res.proj, m.marking, {});
  if (!check.fibration)
    throw Error(ErrorCode::CoherenceFailure,
                "marked comma is not S-Cartesian: " + check.failure);
  out.fibration = *check.fibration;
  out.incl = comma_res.incl;
  out.freeness.free = true;

  for (const auto& g : test_family) {
    // Functors over the base that preserve the certified Cartesian lifts,
    // with vertical transformations on both sides of the restriction.
    std::vector<FunctorData> scart;
    for (auto& cand : enumerate_functors_over(out.fibration.proj, g.proj, caps)) {
      bool cartesian = true;
      for (const auto& [key, lift] : out.fibration.cart_lifts)
        if (!is_cartesian_lift(g.proj, cand.mor_map[lift], key.first)) {
          cartesian = false;
          break;
        }
      if (cartesian) scart.push_back(cand);
    }
    std::vector<FunctorData> funs_over = enumerate_functors_over(p, g.proj, caps);
    std::set<std::pair<std::vector<int>, std::vector<int>>> images;
    for (const auto& t : scart) {
      auto r = compose_functors(t, out.incl);
      images.insert({r.ob_map, r.mor_map});
    }
    if (images.size() != scart.size() || images.size() != funs_over.size()) {
      out.freeness.free = false;
      out.freeness.witness =
          "restriction is not bijective on objects against " + g.total->name();
      continue;
    }
    auto vertical_count = [&g](const FunctorData& t1, const FunctorData& t2) {
      int count = 0;
      for (auto& n : enumerate_nats(t1, t2)) {
        bool vertical = true;
        for (std::size_t o = 0; o < n.component.size(); ++o)
          if (g.proj.mor_map[n.component[o]] !=
              g.base->identity(g.proj.ob_map[t1.ob_map[o]]))
            vertical = false;
        if (vertical) ++count;
      }
      return count;
    };
    for (const auto& t1 : scart)
      for (const auto& t2 : scart) {
        int upstairs = vertical_count(t1, t2);
        int downstairs = vertical_count(compose_functors(t1, out.incl),
                                        compose_functors(t2, out.incl));
        if (upstairs != downstairs) {
          out.freeness.free = false;
          out.freeness.witness =
              "restriction is not bijective on hom-sets against " + g.total->name();
        }
      }
  }
  return out;
}

BaseChangeFibReport check_bicartesian_base_change(const Fibration& p,
                                                  const MarkedCat& m) {
  BaseChangeFibReport rep;
  if (!m.certificate)
    throw Error(ErrorCode::MissingCertificate, "base marking is not certified");
  const FinCat& d = *p.base;
  const FinCat& e = *p.total;
  for (const auto& [key, cone] : *m.certificate) {
    auto [f, g] = key;  // f marked; pullback square (w; legs to src f, src g)
    if (!p.cocart_over.count(g) || !p.cocart_over.count(cone.legs[0]) ||
        !p.cart_over.count(f) || !p.cart_over.count(cone.legs[1]))
      throw Error(ErrorCode::PreconditionFailed,
                  "fibration lacks certified lifts for the square of (" +
                      d.morphism_name(f) + ", " + d.morphism_name(g) + ")");
    int ftilde = cone.legs[1];  // marked pullback of f along g
    int gtilde = cone.legs[0];  // pullback of g along f
    for (int u = 0; u < static_cast<int>(e.num_objects()); ++u) {
      if (p.proj.ob_map[u] != d.src(g)) continue;
      int phi1 = p.cart_lift(ftilde, u);  // f~^! u -> u
      int psi1 = p.cocart_lift(g, u);     // u -> g_! u
      int along = e.compose(psi1, phi1);  // over g ∘ f~ = f ∘ g~
      int psi2 = p.cocart_lift(gtilde, e.src(phi1));
      int chi = -1;
      for (int cand : e.hom(e.tgt(psi2), e.tgt(psi1)))
        if (p.proj.mor_map[cand] == f && e.compose(cand, psi2) == along) {
          chi = cand;
          break;
        }
      if (chi < 0) {
        rep.counterexample = "no factorization through the co-Cartesian lift at " +
                             e.object_name(u);
        return rep;
      }
      int phi2 = p.cart_lift(f, e.tgt(psi1));
      int nu = -1;
      for (int cand : e.hom(e.tgt(psi2), e.src(phi2)))
        if (p.proj.mor_map[cand] == d.identity(d.src(f)) &&
            e.compose(phi2, cand) == chi) {
          nu = cand;
          break;
        }
      if (nu < 0) {
        rep.counterexample =
            "no factorization through the Cartesian lift at " + e.object_name(u);
        return rep;
      }
      if (!e.is_iso(nu)) {
        rep.counterexample = "comparison map at (" + d.morphism_name(f) + ", " +
                             d.morphism_name(g) + "; " + e.object_name(u) +
                             ") is not invertible";
        return rep;
      }
    }
  }
  rep.holds = true;
  return rep;
}

FreeBicartesianResult free_bicartesian(const MarkedCat& m, const FunctorData& p,
                                       const Caps& caps) {
  FreeBicartesianResult out;
  auto inner = marked_comma(m, p, caps);
  auto outer = comma(inner.proj, identity_functor(m.cat), caps);
  std::set<int> all;
  for (int f = 0; f < static_cast<int>(m.cat->num_morphisms()); ++f) all.insert(f);
  auto check = check_fibration(outer.proj_right, m.marking, all);
  if (!check.fibration)
    throw Error(ErrorCode::CoherenceFailure,
                "free bi-Cartesian construction failed: " + check.failure);
  out.fibration = *check.fibration;

  const FinCat& e = *p.source;
  out.incl.source = p.source;
  out.incl.target = out.fibration.total;
  for (int eo = 0; eo < static_cast<int>(e.num_objects()); ++eo) {
    int inner_ob = inner.incl.ob_map[eo];
    int found = -1;
    for (int i = 0; i < static_cast<int>(outer.left_ob.size()); ++i)
      if (outer.left_ob[i] == inner_ob &&
          outer.alpha[i] == m.cat->identity(p.ob_map[eo]))
        found = i;
    out.incl.ob_map.push_back(found);
  }
  for (int u = 0; u < static_cast<int>(e.num_morphisms()); ++u) {
    int inner_mor = inner.incl.mor_map[u];
    int found = -1;
    for (int i = 0; i < static_cast<int>(outer.cat->num_morphisms()); ++i)
      if (outer.proj_left.mor_map[i] == inner_mor &&
          outer.proj_right.mor_map[i] == p.mor_map[u] &&
          outer.cat->src(i) == out.incl.ob_map[e.src(u)] &&
          outer.cat->tgt(i) == out.incl.ob_map[e.tgt(u)])
        found = i;
    out.incl.mor_map.push_back(found);
  }
  validate_functor(out.incl);

  out.base_change = check_bicartesian_base_change(
      out.fibration, m.certificate ? m : certify_base_change(m));
  return out;
}

TwistedReport check_twisted_bicartesian(const FunctorData& p,
                                        const ProductCatResult& base,
                                        const MarkedCat& mc, const MarkedCat& md) {
  TwistedReport rep;
  validate_functor(p);
  const FinCat& e = *p.source;
  const FinCat& c = *mc.cat;
  const FinCat& d = *md.cat;

  auto q = compose_functors(base.proj1, p);  // E -> C
  auto r = compose_functors(base.proj2, p);  // E -> D

  // i) E -> C is (S_C, C)-Cartesian; structural arrows stay in D-slices.
  std::set<int> all_c;
  for (int f = 0; f < static_cast<int>(c.num_morphisms()); ++f) all_c.insert(f);
  auto check_q = check_fibration(q, all_c, mc.marking);
  if (!check_q.fibration) {
    rep.failing_condition = 1;
    rep.witness = check_q.failure;
    return rep;
  }
  for (int phi = 0; phi < static_cast<int>(e.num_morphisms()); ++phi) {
    int fc = q.mor_map[phi];
    bool structural = is_cartesian_lift(q, phi, fc) ||
                      (mc.marked(fc) && is_cocartesian_lift(q, phi, fc));
    if (structural && !d.is_iso(r.mor_map[phi])) {
      rep.failing_condition = 1;
      rep.witness = "structural arrow " + e.morphism_name(phi) + " leaves the D-slice";
      return rep;
    }
  }

  // ii) fibres over C are bi-Cartesian over D.
  std::set<int> all_d;
  for (int f = 0; f < static_cast<int>(d.num_morphisms()); ++f) all_d.insert(f);
  std::vector<Fibration> fibre_fib(c.num_objects());
  std::vector<FibreCat> fibres;
  for (int co = 0; co < static_cast<int>(c.num_objects()); ++co) {
    fibres.push_back(fibre_of(q, co));
    FunctorData pd;
    pd.source = fibres[co].cat;
    pd.target = md.cat;
    for (int eo : fibres[co].obs) pd.ob_map.push_back(r.ob_map[eo]);
    for (int mo : fibres[co].mors) pd.mor_map.push_back(r.mor_map[mo]);
    validate_functor(pd);
    auto check_fib = check_fibration(pd, md.marking, all_d);
    if (!check_fib.fibration) {
      rep.failing_condition = 2;
      rep.witness = "fibre over " + c.object_name(co) + ": " + check_fib.failure;
      return rep;
    }
    fibre_fib[co] = *check_fib.fibration;
  }

  // iii) pullback functors and iv) pushforward functors between fibres are
  // bi-Cartesian transformations. Structural lifts with identity D-component
  // are used so the transport lands strictly over D.
  auto transport_check = [&](int fc, bool cocart) -> bool {
    int c_from = cocart ? c.src(fc) : c.tgt(fc);
    int c_to = cocart ? c.tgt(fc) : c.src(fc);
    std::map<int, int> on_obs, via;
    for (int eo : fibres[c_from].obs) {
      int chosen = -1;
      for (int phi = 0; phi < static_cast<int>(e.num_morphisms()); ++phi) {
        if (q.mor_map[phi] != fc) continue;
        if (cocart && (e.src(phi) != eo || !is_cocartesian_lift(q, phi, fc))) continue;
        if (!cocart && (e.tgt(phi) != eo || !is_cartesian_lift(q, phi, fc))) continue;
        if (r.mor_map[phi] != d.identity(r.ob_map[eo])) continue;
        chosen = phi;
        break;
      }
      if (chosen < 0) {
        rep.witness = "no structural lift over the D-identity at " + e.object_name(eo);
        return false;
      }
      on_obs[eo] = cocart ? e.tgt(chosen) : e.src(chosen);
      via[eo] = chosen;
    }
    FunctorData tr;
    tr.source = fibre_fib[c_from].total;
    tr.target = fibre_fib[c_to].total;
    for (int eo : fibres[c_from].obs)
      tr.ob_map.push_back(fibres[c_to].ob_of_total.at(on_obs.at(eo)));
    for (int mo : fibres[c_from].mors) {
      int x = e.src(mo), y = e.tgt(mo);
      int found = -1;
      for (int u : e.hom(on_obs.at(x), on_obs.at(y))) {
        if (q.mor_map[u] != c.identity(c_to)) continue;
        bool commutes = cocart
                            ? e.compose(u, via.at(x)) == e.compose(via.at(y), mo)
                            : e.compose(via.at(y), u) == e.compose(mo, via.at(x));
        if (commutes) {
          found = u;
          break;
        }
      }
      if (found < 0) {
        rep.witness = "transport of " + e.morphism_name(mo) + " missing";
        return false;
      }
      tr.mor_map.push_back(fibres[c_to].mor_of_total.at(found));
    }
    try {
      validate_functor(tr);
    } catch (const Error& err) {
      rep.witness = err.what();
      return false;
    }
    for (std::size_t i = 0; i < tr.ob_map.size(); ++i)
      if (fibre_fib[c_to].proj.ob_map[tr.ob_map[i]] !=
          fibre_fib[c_from].proj.ob_map[i]) {
        rep.witness = "transport does not commute with the projection to D";
        return false;
      }
    for (const auto& [key, lift] : fibre_fib[c_from].cocart_lifts)
      if (!is_cocartesian_lift(fibre_fib[c_to].proj, tr.mor_map[lift], key.first)) {
        rep.witness = "transport breaks a co-Cartesian lift";
        return false;
      }
    for (const auto& [key, lift] : fibre_fib[c_from].cart_lifts)
      if (!is_cartesian_lift(fibre_fib[c_to].proj, tr.mor_map[lift], key.first)) {
        rep.witness = "transport breaks a Cartesian lift";
        return false;
      }
    return true;
  };
  for (int fc = 0; fc < static_cast<int>(c.num_morphisms()); ++fc) {
    if (!transport_check(fc, false)) {
      rep.failing_condition = 3;
      if (rep.witness.empty()) rep.witness = "pullback along " + c.morphism_name(fc);
      return rep;
    }
  }
  for (int fc : mc.marking) {
    if (!transport_check(fc, true)) {
      rep.failing_condition = 4;
      if (rep.witness.empty()) rep.witness = "pushforward along " + c.morphism_name(fc);
      return rep;
    }
  }
  rep.holds = true;
  return rep;
}

IntegralMarkingResult integral_marking(const MarkedFamily& family, const Caps& caps) {
  const FinCat& idx = *family.index;
  if (family.fibre.size() != idx.num_objects() ||
      family.transition.size() != idx.num_morphisms())
    throw Error(ErrorCode::BadInput, "family has wrong shape");
  for (int u = 0; u < static_cast<int>(idx.num_morphisms()); ++u) {
    const auto& t = family.transition[u];
    if (!(*t.source == *family.fibre[idx.tgt(u)].cat) ||
        !(*t.target == *family.fibre[idx.src(u)].cat))
      throw Error(ErrorCode::BoundaryMismatch,
                  "transition of " + idx.morphism_name(u) + " has wrong boundary");
    require_marked_functor(family.fibre[idx.tgt(u)], family.fibre[idx.src(u)], t);
  }
  for (int o = 0; o < static_cast<int>(idx.num_objects()); ++o)
    if (!(family.transition[idx.identity(o)] == identity_functor(family.fibre[o].cat)))
      throw Error(ErrorCode::BadInput, "family transitions are not strictly unital");
  for (int v = 0; v < static_cast<int>(idx.num_morphisms()); ++v)
    for (int u = 0; u < static_cast<int>(idx.num_morphisms()); ++u) {
      int vu = idx.compose(v, u);
      if (vu < 0) continue;
      if (!(compose_functors(family.transition[u], family.transition[v]) ==
            family.transition[vu]))
        throw Error(ErrorCode::BadInput,
                    "family transitions are not strictly functorial");
    }

  IntegralMarkingResult out;
  FinCatData d;
  d.name = "int(" + idx.name() + ")";
  std::map<std::pair<int, int>, int> ob_index;
  for (int i = 0; i < static_cast<int>(idx.num_objects()); ++i)
    for (int x = 0; x < static_cast<int>(family.fibre[i].cat->num_objects()); ++x) {
      ob_index[{i, x}] = static_cast<int>(out.obs.size());
      out.obs.push_back({i, x});
      d.objects.push_back("(" + idx.object_name(i) + "|" +
                          family.fibre[i].cat->object_name(x) + ")");
      if (out.obs.size() > caps.max_objects)
        throw Error(ErrorCode::SizeCap, "integral exceeds object cap");
    }
  struct MorRec {
    int src, tgt, u, xi;
  };
  std::vector<MorRec> mors;
  std::map<std::tuple<int, int, int, int>, int> mor_index;
  for (int i = 0; i < static_cast<int>(out.obs.size()); ++i)
    for (int j = 0; j < static_cast<int>(out.obs.size()); ++j) {
      auto [ii, x] = out.obs[i];
      auto [jj, x2] = out.obs[j];
      for (int u : idx.hom(ii, jj))
        for (int xi : family.fibre[ii].cat->hom(x, family.transition[u].ob_map[x2])) {
          mor_index[{i, j, u, xi}] = static_cast<int>(mors.size());
          mors.push_back({i, j, u, xi});
          d.morphisms.push_back({"(" + idx.morphism_name(u) + "|" +
                                     family.fibre[ii].cat->morphism_name(xi) + ")@" +
                                     std::to_string(i) + ">" + std::to_string(j),
                                 d.objects[i], d.objects[j]});
          if (mors.size() > caps.max_morphisms)
            throw Error(ErrorCode::SizeCap, "integral exceeds morphism cap");
        }
    }
  for (int i = 0; i < static_cast<int>(out.obs.size()); ++i) {
    auto [ii, x] = out.obs[i];
    d.identities[d.objects[i]] =
        d.morphisms[mor_index.at(
                        {i, i, idx.identity(ii), family.fibre[ii].cat->identity(x)})]
            .name;
  }
  for (std::size_t k2 = 0; k2 < mors.size(); ++k2)
    for (std::size_t k1 = 0; k1 < mors.size(); ++k1) {
      if (mors[k1].tgt != mors[k2].src) continue;
      const auto& m1 = mors[k1];
      const auto& m2 = mors[k2];
      int vu = idx.compose(m2.u, m1.u);
      const FinCat& fib = *family.fibre[out.obs[m1.src].first].cat;
      int xi = fib.compose(family.transition[m1.u].mor_map[m2.xi], m1.xi);
      d.compose.push_back({d.morphisms[k2].name, d.morphisms[k1].name,
                           d.morphisms[mor_index.at({m1.src, m2.tgt, vu, xi})].name});
    }
  auto total = validate_category(d);

  std::set<int> marking;
  for (std::size_t k = 0; k < mors.size(); ++k) {
    const auto& mr = mors[k];
    auto [ii, x] = out.obs[mr.src];
    if (mr.u == idx.identity(ii) && family.fibre[ii].marked(mr.xi))
      marking.insert(static_cast<int>(k));
    (void)x;
  }
  out.total = certify_base_change(validate_marking_idx(total, marking));

  // The projection is the Cartesian fibration integrating the contravariant
  // family; lifts of u end at the tautological pairs.
  out.proj.source = total;
  out.proj.target = family.index;
  for (auto& [ii, x] : out.obs) {
    out.proj.ob_map.push_back(ii);
    (void)x;
  }
  for (auto& mr : mors) out.proj.mor_map.push_back(mr.u);
  validate_functor(out.proj);
  return out;
}

}  // namespace corrcalc
