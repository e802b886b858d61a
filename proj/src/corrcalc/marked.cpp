#include "corrcalc/marked.hpp"

#include <tuple>

namespace corrcalc {

const Cone& MarkedCat::chosen_pullback(int marked_f, int g) const {
  if (!certificate)
    throw Error(ErrorCode::MissingCertificate, "marking has no base-change certificate");
  auto it = certificate->find({marked_f, g});
  if (it == certificate->end())
    throw Error(ErrorCode::MissingCertificate,
                "no certified pullback for (" + cat->morphism_name(marked_f) + ", " +
                    cat->morphism_name(g) + ")");
  return it->second;
}

MarkedCat validate_marking(const CatPtr& c, const std::set<std::string>& names) {
  std::set<int> marking;
  for (const auto& n : names) {
    int m = c->morphism_index(n);
    if (m < 0) throw Error(ErrorCode::BadInput, "marked morphism " + n + " is unknown", n);
    marking.insert(m);
  }
  return validate_marking_idx(c, marking);
}

MarkedCat validate_marking_idx(const CatPtr& c, const std::set<int>& marking_in) {
  MarkedCat m;
  m.cat = c;
  m.marking = marking_in;
  for (std::size_t o = 0; o < c->num_objects(); ++o)
    m.marking.insert(c->identity(static_cast<int>(o)));
  for (int g : m.marking)
    for (int f : m.marking) {
      if (c->tgt(f) != c->src(g)) continue;
      if (!m.marking.count(c->compose(g, f)))
        throw Error(ErrorCode::NotClosed,
                    "composite of marked (" + c->morphism_name(g) + ", " +
                        c->morphism_name(f) + ") is unmarked",
                    "(" + c->morphism_name(g) + ", " + c->morphism_name(f) + ")");
    }
  return m;
}

MarkedCat maximal_marking(const CatPtr& c) {
  std::set<int> all;
  for (int m = 0; m < static_cast<int>(c->num_morphisms()); ++m) all.insert(m);
  return validate_marking_idx(c, all);
}

MarkedCat trivial_marking(const CatPtr& c) {
  std::set<int> isos;
  for (int m = 0; m < static_cast<int>(c->num_morphisms()); ++m)
    if (c->is_iso(m)) isos.insert(m);
  return validate_marking_idx(c, isos);
}

BaseChangeReport has_base_change(const MarkedCat& m) {
  BaseChangeReport rep;
  const FinCat& c = *m.cat;
  for (int f = 0; f < static_cast<int>(c.num_morphisms()); ++f) {
    if (!m.marked(f)) continue;
    for (int g = 0; g < static_cast<int>(c.num_morphisms()); ++g) {
      if (c.tgt(g) != c.tgt(f)) continue;
      auto cone = pullback(c, f, g);
      bool ok = cone.has_value() && m.marked(cone->legs[1]);
      if (!ok) {
        rep.holds = false;
        rep.counterexample_pair = {f, g};
        rep.missing_pullback = !cone.has_value();
        rep.counterexample = cone.has_value()
                                 ? "pulled-back leg " + c.morphism_name(cone->legs[1]) +
                                       " of (" + c.morphism_name(f) + ", " +
                                       c.morphism_name(g) + ") is unmarked"
                                 : "no pullback of (" + c.morphism_name(f) + ", " +
                                       c.morphism_name(g) + ")";
        return rep;
      }
      rep.certificate[{f, g}] = *cone;
    }
  }
  rep.holds = true;
  return rep;
}

MarkedCat certify_base_change(const MarkedCat& m) {
  auto rep = has_base_change(m);
  if (!rep.holds)
    throw Error(ErrorCode::PreconditionFailed,
                "marking does not have base change: " + rep.counterexample,
                rep.counterexample);
  MarkedCat out = m;
  out.certificate = std::move(rep.certificate);
  return out;
}

BaseChangeReport has_collar_change(const MarkedCat& m) {
  MarkedCat dual;
  dual.cat = opposite(m.cat);
  dual.marking = m.marking;
  return has_base_change(dual);
}

MarkedCommaResult marked_comma(const MarkedCat& m, const FunctorData& p,
                               const Caps& caps) {
  if (!(p.target == m.cat || *p.target == *m.cat))
    throw Error(ErrorCode::BoundaryMismatch, "marked comma needs a functor into the base");
  const FinCat& d = *m.cat;
  const FinCat& e = *p.source;

  MarkedCommaResult res;
  FinCatData data;
  data.name = d.name() + "#" + e.name();
  for (int eo = 0; eo < static_cast<int>(e.num_objects()); ++eo)
    for (int f = 0; f < static_cast<int>(d.num_morphisms()); ++f) {
      if (!m.marked(f) || d.tgt(f) != p.ob_map[eo]) continue;
      res.ob_e.push_back(eo);
      res.roof.push_back(f);
      data.objects.push_back("(" + e.object_name(eo) + "|" + d.morphism_name(f) + ")");
      if (data.objects.size() > caps.max_objects)
        throw Error(ErrorCode::SizeCap, "marked comma exceeds object cap");
    }

  struct MorRec {
    int src, tgt, u, t;  // u in E, top edge t in D
  };
  std::vector<MorRec> mors;
  for (int i = 0; i < static_cast<int>(data.objects.size()); ++i)
    for (int j = 0; j < static_cast<int>(data.objects.size()); ++j)
      for (int u : e.hom(res.ob_e[i], res.ob_e[j]))
        for (int t : d.hom(d.src(res.roof[i]), d.src(res.roof[j]))) {
          if (d.compose(res.roof[j], t) != d.compose(p.mor_map[u], res.roof[i])) continue;
          mors.push_back({i, j, u, t});
          if (mors.size() > caps.max_morphisms)
            throw Error(ErrorCode::SizeCap, "marked comma exceeds morphism cap");
        }
  std::map<std::tuple<int, int, int, int>, int> mor_index;
  for (std::size_t k = 0; k < mors.size(); ++k) {
    const auto& mm = mors[k];
    mor_index[{mm.src, mm.tgt, mm.u, mm.t}] = static_cast<int>(k);
    data.morphisms.push_back({"(" + e.morphism_name(mm.u) + "|" + d.morphism_name(mm.t) +
                                  ")@" + std::to_string(mm.src) + ">" +
                                  std::to_string(mm.tgt),
                              data.objects[mm.src], data.objects[mm.tgt]});
  }
  for (int i = 0; i < static_cast<int>(data.objects.size()); ++i)
    data.identities[data.objects[i]] =
        data.morphisms[mor_index.at({i, i, e.identity(res.ob_e[i]),
                                     d.identity(d.src(res.roof[i]))})]
            .name;
  for (std::size_t k2 = 0; k2 < mors.size(); ++k2)
    for (std::size_t k1 = 0; k1 < mors.size(); ++k1) {
      if (mors[k1].tgt != mors[k2].src) continue;
      int u = e.compose(mors[k2].u, mors[k1].u);
      int t = d.compose(mors[k2].t, mors[k1].t);
      data.compose.push_back(
          {data.morphisms[k2].name, data.morphisms[k1].name,
           data.morphisms[mor_index.at({mors[k1].src, mors[k2].tgt, u, t})].name});
    }
  res.cat = validate_category(data);

  res.proj.source = res.cat;
  res.proj.target = m.cat;
  for (int i = 0; i < static_cast<int>(data.objects.size()); ++i)
    res.proj.ob_map.push_back(d.src(res.roof[i]));
  for (const auto& mm : mors) res.proj.mor_map.push_back(mm.t);
  validate_functor(res.proj);

  res.incl.source = p.source;
  res.incl.target = res.cat;
  for (int eo = 0; eo < static_cast<int>(e.num_objects()); ++eo) {
    int target = -1;
    for (int i = 0; i < static_cast<int>(res.ob_e.size()); ++i)
      if (res.ob_e[i] == eo && res.roof[i] == d.identity(p.ob_map[eo])) target = i;
    res.incl.ob_map.push_back(target);
  }
  for (int u = 0; u < static_cast<int>(e.num_morphisms()); ++u)
    res.incl.mor_map.push_back(mor_index.at({res.incl.ob_map[e.src(u)],
                                             res.incl.ob_map[e.tgt(u)], u,
                                             p.mor_map[u]}));
  validate_functor(res.incl);
  return res;
}

void require_marked_functor(const MarkedCat& d0, const MarkedCat& d1,
                            const FunctorData& f) {
  validate_functor(f);
  const FinCat& c1 = *d1.cat;
  for (int m : d0.marking)
    if (!d1.marked(f.mor_map[m]))
      throw Error(ErrorCode::PreconditionFailed,
                  "functor does not preserve the marking at " +
                      d0.cat->morphism_name(m),
                  d0.cat->morphism_name(m));
  if (!d0.certificate)
    throw Error(ErrorCode::MissingCertificate, "source marking is not certified");
  for (const auto& [key, cone] : *d0.certificate) {
    Cone image;
    image.apex = f.ob_map[cone.apex];
    image.legs = {f.mor_map[cone.legs[0]], f.mor_map[cone.legs[1]],
                  f.mor_map[cone.legs[2]]};
    Diagram dia;
    dia.objects = {c1.tgt(image.legs[0]), c1.tgt(image.legs[1]), c1.tgt(image.legs[2])};
    dia.arrows = {{0, 2, f.mor_map[key.first]}, {1, 2, f.mor_map[key.second]}};
    if (!cone_commutes(c1, dia, image) || !cone_is_terminal(c1, dia, image))
      throw Error(ErrorCode::PreconditionFailed,
                  "functor does not preserve the base-change square of (" +
                      d0.cat->morphism_name(key.first) + ", " +
                      d0.cat->morphism_name(key.second) + ")",
                  d0.cat->morphism_name(key.first));
  }
}

bool is_base_change_exact(const MarkedCat& d0, const MarkedCat& d1,
                          const NatTransData& psi) {
  require_marked_functor(d0, d1, psi.source);
  require_marked_functor(d0, d1, psi.target);
  validate_nat(psi);
  const FinCat& c0 = *d0.cat;
  const FinCat& c1 = *d1.cat;
  for (int m : d0.marking) {
    int s = c0.src(m), t = c0.tgt(m);
    // Square: F0 s -> F1 s over F0 t -> F1 t; check it is a pullback of the
    // cospan (psi_t, F1 m).
    Diagram dia;
    dia.objects = {psi.source.ob_map[t], psi.target.ob_map[s], psi.target.ob_map[t]};
    dia.arrows = {{0, 2, psi.component[t]}, {1, 2, psi.target.mor_map[m]}};
    Cone cone;
    cone.apex = psi.source.ob_map[s];
    cone.legs = {psi.source.mor_map[m], psi.component[s],
                 c1.compose(psi.component[t], psi.source.mor_map[m])};
    if (!cone_commutes(c1, dia, cone) || !cone_is_terminal(c1, dia, cone)) return false;
  }
  return true;
}

}  // namespace corrcalc
