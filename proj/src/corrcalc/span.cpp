#include "corrcalc/span.hpp"

#include <algorithm>
#include <tuple>

namespace corrcalc {

bool Span::operator<(const Span& other) const {
  return std::tie(kernel, wrong_way, right_way) <
         std::tie(other.kernel, other.wrong_way, other.right_way);
}

void validate_span(const MarkedCat& m, const Span& s) {
  const FinCat& c = *m.cat;
  if (c.src(s.wrong_way) != s.kernel || c.tgt(s.wrong_way) != s.left_foot ||
      c.src(s.right_way) != s.kernel || c.tgt(s.right_way) != s.right_foot)
    throw Error(ErrorCode::BoundaryMismatch, "span legs have wrong endpoints");
  if (!m.marked(s.wrong_way))
    throw Error(ErrorCode::PreconditionFailed,
                "wrong-way leg " + c.morphism_name(s.wrong_way) + " is unmarked",
                c.morphism_name(s.wrong_way));
}

void validate_span_morphism(const MarkedCat& m, const SpanMorphism& sm) {
  const FinCat& c = *m.cat;
  validate_span(m, sm.source);
  validate_span(m, sm.target);
  if (sm.source.left_foot != sm.target.left_foot ||
      sm.source.right_foot != sm.target.right_foot)
    throw Error(ErrorCode::BoundaryMismatch, "span morphism between different feet");
  if (c.compose(sm.target.wrong_way, sm.h) != sm.source.wrong_way ||
      c.compose(sm.target.right_way, sm.h) != sm.source.right_way)
    throw Error(ErrorCode::PreconditionFailed,
                "kernel map " + c.morphism_name(sm.h) + " does not commute",
                c.morphism_name(sm.h));
}

MarkedCat walking_span() {
  FinCatData d;
  d.name = "WALKING_SPAN";
  d.objects = {"s0", "s01", "s1"};
  d.morphisms = {{"id_s0", "s0", "s0"},
                 {"id_s01", "s01", "s01"},
                 {"id_s1", "s1", "s1"},
                 {"p", "s01", "s0"},
                 {"q", "s01", "s1"}};
  d.identities = {{"s0", "id_s0"}, {"s01", "id_s01"}, {"s1", "id_s1"}};
  d.compose = {{"id_s0", "id_s0", "id_s0"}, {"id_s01", "id_s01", "id_s01"},
               {"id_s1", "id_s1", "id_s1"}, {"p", "id_s01", "p"},
               {"id_s0", "p", "p"},         {"q", "id_s01", "q"},
               {"id_s1", "q", "q"}};
  auto cat = validate_category(d);
  return validate_marking(cat, {"p"});
}

std::vector<Span> enumerate_spans(const MarkedCat& m, int x, int y) {
  std::vector<Span> out;
  const FinCat& c = *m.cat;
  for (int k = 0; k < static_cast<int>(c.num_objects()); ++k)
    for (int p : c.hom(k, x)) {
      if (!m.marked(p)) continue;
      for (int q : c.hom(k, y)) out.push_back({x, y, k, p, q});
    }
  std::sort(out.begin(), out.end());
  return out;
}

int SpanCategoryResult::object_of(const Span& s) const {
  for (std::size_t i = 0; i < spans.size(); ++i)
    if (spans[i] == s) return static_cast<int>(i);
  return -1;
}

int SpanCategoryResult::morphism_of(int src_obj, int tgt_obj, int h) const {
  for (std::size_t i = 0; i < morphisms.size(); ++i)
    if (morphisms[i].h == h && spans[src_obj] == morphisms[i].source &&
        spans[tgt_obj] == morphisms[i].target)
      return static_cast<int>(i);
  return -1;
}

SpanCategoryResult span_category(const MarkedCat& m, int x, int y, const Caps& caps) {
  SpanCategoryResult res;
  res.spans = enumerate_spans(m, x, y);
  if (res.spans.size() > caps.max_objects)
    throw Error(ErrorCode::SizeCap, "span category exceeds object cap");
  const FinCat& c = *m.cat;
  FinCatData d;
  d.name = "Corr(" + c.object_name(x) + "," + c.object_name(y) + ")";
  for (const auto& s : res.spans)
    d.objects.push_back("<" + c.morphism_name(s.wrong_way) + "|" +
                        c.morphism_name(s.right_way) + ">");
  std::map<std::tuple<int, int, int>, int> mor_index;
  for (int i = 0; i < static_cast<int>(res.spans.size()); ++i)
    for (int j = 0; j < static_cast<int>(res.spans.size()); ++j)
      for (int h : c.hom(res.spans[i].kernel, res.spans[j].kernel)) {
        if (c.compose(res.spans[j].wrong_way, h) != res.spans[i].wrong_way) continue;
        if (c.compose(res.spans[j].right_way, h) != res.spans[i].right_way) continue;
        int idx = static_cast<int>(res.morphisms.size());
        if (res.morphisms.size() > caps.max_morphisms)
          throw Error(ErrorCode::SizeCap, "span category exceeds morphism cap");
        mor_index[{i, j, h}] = idx;
        d.morphisms.push_back({c.morphism_name(h) + "@" + std::to_string(i) + ">" +
                                   std::to_string(j),
                               d.objects[i], d.objects[j]});
        res.morphisms.push_back({res.spans[i], res.spans[j], h});
      }
  for (int i = 0; i < static_cast<int>(res.spans.size()); ++i)
    d.identities[d.objects[i]] =
        d.morphisms[mor_index.at({i, i, c.identity(res.spans[i].kernel)})].name;
  for (const auto& [key2, k2] : mor_index)
    for (const auto& [key1, k1] : mor_index) {
      if (std::get<1>(key1) != std::get<0>(key2)) continue;
      int h = c.compose(std::get<2>(key2), std::get<2>(key1));
      d.compose.push_back(
          {d.morphisms[k2].name, d.morphisms[k1].name,
           d.morphisms[mor_index.at({std::get<0>(key1), std::get<1>(key2), h})].name});
    }
  res.cat = validate_category(d);
  return res;
}

Span compose_spans(const MarkedCat& m, const Span& s1, const Span& s2) {
  if (s1.right_foot != s2.left_foot)
    throw Error(ErrorCode::BoundaryMismatch, "spans do not compose");
  const FinCat& c = *m.cat;
  const Cone& cone = m.chosen_pullback(s2.wrong_way, s1.right_way);
  Span out;
  out.left_foot = s1.left_foot;
  out.right_foot = s2.right_foot;
  out.kernel = cone.apex;
  out.wrong_way = c.compose(s1.wrong_way, cone.legs[1]);
  out.right_way = c.compose(s2.right_way, cone.legs[0]);
  validate_span(m, out);
  return out;
}

Span identity_span(const MarkedCat& m, int x) {
  int id = m.cat->identity(x);
  return {x, x, x, id, id};
}

namespace {

// Unique mediating morphism between two kernels, constrained by composites
// out of the target kernel. Non-uniqueness signals a certificate bug.
int unique_mediator(const FinCat& c, int from_kernel, int to_kernel,
                    const std::vector<std::pair<int, int>>& constraints) {
  int found = -1;
  for (int u : c.hom(from_kernel, to_kernel)) {
    bool ok = true;
    for (const auto& [leg, want] : constraints)
      if (c.compose(leg, u) != want) {
        ok = false;
        break;
      }
    if (!ok) continue;
    if (found >= 0)
      throw Error(ErrorCode::NonUniqueMediator,
                  "two mediators between " + c.object_name(from_kernel) + " and " +
                      c.object_name(to_kernel));
    found = u;
  }
  if (found < 0)
    throw Error(ErrorCode::NonUniqueMediator,
                "no mediator between " + c.object_name(from_kernel) + " and " +
                    c.object_name(to_kernel));
  return found;
}

}  // namespace

CorrResult build_corr(const MarkedCat& m_in, const Caps& caps) {
  CorrResult res;
  res.base = m_in.certificate ? m_in : certify_base_change(m_in);
  const MarkedCat& m = res.base;
  const FinCat& c = *m.cat;
  const int n = static_cast<int>(c.num_objects());

  BicatBuilder bb;
  for (int o = 0; o < n; ++o) bb.objects.push_back(c.object_name(o));
  res.hom_tables.reserve(static_cast<std::size_t>(n) * n);
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) {
      res.hom_tables.push_back(span_category(m, x, y, caps));
      bb.homs.push_back(res.hom_tables.back().cat);
    }
  const auto* tables = &res.hom_tables;
  auto table = [tables, n](int x, int y) -> const SpanCategoryResult& {
    return (*tables)[x * n + y];
  };
  bb.unit.resize(n);
  for (int x = 0; x < n; ++x) bb.unit[x] = table(x, x).object_of(identity_span(m, x));

  auto pb = [&m](const Span& s1, const Span& s2) -> const Cone& {
    return m.chosen_pullback(s2.wrong_way, s1.right_way);
  };

  bb.ob_comp = [&m, table](int x, int y, int z, int g, int f) {
    Span comp = compose_spans(m, table(x, y).spans[f], table(y, z).spans[g]);
    int idx = table(x, z).object_of(comp);
    if (idx < 0) throw Error(ErrorCode::CoherenceFailure, "composite span not found");
    return idx;
  };
  bb.mor_comp = [&m, &c, table, pb](int x, int y, int z, int gc, int fc) {
    const SpanMorphism& t = table(y, z).morphisms[gc];
    const SpanMorphism& s = table(x, y).morphisms[fc];
    Span src = compose_spans(m, s.source, t.source);
    Span tgt = compose_spans(m, s.target, t.target);
    const Cone& src_cone = pb(s.source, t.source);
    const Cone& tgt_cone = pb(s.target, t.target);
    int u = unique_mediator(c, src.kernel, tgt.kernel,
                            {{tgt_cone.legs[1], c.compose(s.h, src_cone.legs[1])},
                             {tgt_cone.legs[0], c.compose(t.h, src_cone.legs[0])}});
    int idx = table(x, z).morphism_of(table(x, z).object_of(src),
                                      table(x, z).object_of(tgt), u);
    if (idx < 0)
      throw Error(ErrorCode::CoherenceFailure, "composite span morphism not found");
    return idx;
  };
  bb.assoc_cell = [&m, &c, table, pb](int x, int y, int z, int w, int hi, int gi,
                                      int fi) {
    const Span& f = table(x, y).spans[fi];
    const Span& g = table(y, z).spans[gi];
    const Span& h = table(z, w).spans[hi];
    // Left-parenthesised composite (h∘g)∘f.
    Span hg = compose_spans(m, g, h);
    const Cone& cone_hg = pb(g, h);
    Span lhs = compose_spans(m, f, hg);
    const Cone& cone_l = pb(f, hg);
    // Right-parenthesised composite h∘(g∘f).
    Span gf = compose_spans(m, f, g);
    const Cone& cone_gf = pb(f, g);
    Span rhs = compose_spans(m, gf, h);
    const Cone& cone_r = pb(gf, h);
    // Projections of either composite onto the three kernels pin the
    // mediator down uniquely.
    int l_to_f = cone_l.legs[1];
    int l_to_g = c.compose(cone_hg.legs[1], cone_l.legs[0]);
    int l_to_h = c.compose(cone_hg.legs[0], cone_l.legs[0]);
    int r_to_f = c.compose(cone_gf.legs[1], cone_r.legs[1]);
    int r_to_g = c.compose(cone_gf.legs[0], cone_r.legs[1]);
    int r_to_h = cone_r.legs[0];
    int u = unique_mediator(c, lhs.kernel, rhs.kernel,
                            {{r_to_f, l_to_f}, {r_to_g, l_to_g}, {r_to_h, l_to_h}});
    int idx = table(x, w).morphism_of(table(x, w).object_of(lhs),
                                      table(x, w).object_of(rhs), u);
    if (idx < 0 || !table(x, w).cat->is_iso(idx))
      throw Error(ErrorCode::NonUniqueMediator, "associator mediator is not an iso");
    return idx;
  };
  bb.lu_cell = [&m, table, pb](int x, int y, int fi) {
    const Span& f = table(x, y).spans[fi];
    Span comp = compose_spans(m, f, identity_span(m, y));
    const Cone& cone = pb(f, identity_span(m, y));
    int idx = table(x, y).morphism_of(table(x, y).object_of(comp), fi, cone.legs[1]);
    if (idx < 0 || !table(x, y).cat->is_iso(idx))
      throw Error(ErrorCode::NonUniqueMediator, "left unitor mediator is not an iso");
    return idx;
  };
  bb.ru_cell = [&m, table, pb](int x, int y, int fi) {
    const Span& f = table(x, y).spans[fi];
    Span comp = compose_spans(m, identity_span(m, x), f);
    const Cone& cone = pb(identity_span(m, x), f);
    int idx = table(x, y).morphism_of(table(x, y).object_of(comp), fi, cone.legs[0]);
    if (idx < 0 || !table(x, y).cat->is_iso(idx))
      throw Error(ErrorCode::NonUniqueMediator, "right unitor mediator is not an iso");
    return idx;
  };
  res.bicat = bb.build();
  validate_bicat(*res.bicat);
  return res;
}

Pseudofunctor corr_inclusion(const CorrResult& corr) {
  const MarkedCat& m = corr.base;
  const FinCat& c = *m.cat;
  const int n = static_cast<int>(c.num_objects());
  Pseudofunctor p;
  p.source = locally_discrete(m.cat);
  p.target = corr.bicat;
  p.ob_map.resize(n);
  for (int x = 0; x < n; ++x) p.ob_map[x] = x;

  auto one_cell = [&](int x, int y, int f) {
    Span s{x, y, x, c.identity(x), f};
    return corr.table(x, y).object_of(s);
  };
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) {
      FunctorData hf;
      hf.source = p.source->hom(x, y);
      hf.target = corr.bicat->hom(x, y);
      auto homset = c.hom(x, y);
      for (int f : homset) hf.ob_map.push_back(one_cell(x, y, f));
      for (std::size_t i = 0; i < homset.size(); ++i)
        hf.mor_map.push_back(corr.bicat->id2(x, y, hf.ob_map[i]));
      validate_functor(hf);
      p.hom_functor.push_back(hf);
    }
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      for (int z = 0; z < n; ++z) {
        auto homxy = c.hom(x, y);
        auto homyz = c.hom(y, z);
        auto& tab = p.compositor[{x, y, z}];
        tab.resize(homyz.size());
        for (std::size_t gi = 0; gi < homyz.size(); ++gi) {
          tab[gi].resize(homxy.size());
          for (std::size_t fi = 0; fi < homxy.size(); ++fi) {
            int f = homxy[fi], g = homyz[gi];
            Span sf{x, y, x, c.identity(x), f};
            Span sg{y, z, y, c.identity(y), g};
            Span comp = compose_spans(m, sf, sg);
            const Cone& cone = m.chosen_pullback(sg.wrong_way, sf.right_way);
            int tgt = one_cell(x, z, c.compose(g, f));
            int idx = corr.table(x, z).morphism_of(corr.table(x, z).object_of(comp),
                                                   tgt, cone.legs[1]);
            if (idx < 0)
              throw Error(ErrorCode::CoherenceFailure, "inclusion compositor missing");
            tab[gi][fi] = idx;
          }
        }
      }
  p.unitor.resize(n);
  for (int x = 0; x < n; ++x)
    p.unitor[x] = corr.bicat->id2(x, x, corr.bicat->unit[x]);
  validate_pseudofunctor(p);
  return p;
}

BicatPtr restrict_corr(const CorrResult& corr, const std::set<int>& splus) {
  const MarkedCat& m = corr.base;
  const FinCat& c = *m.cat;
  // splus must be a marking in its own right, stable under the certified
  // pullbacks of the wrong-way marking.
  MarkedCat plus = validate_marking_idx(m.cat, splus);
  for (const auto& [key, cone] : *m.certificate) {
    if (!plus.marked(key.second)) continue;
    if (!plus.marked(cone.legs[0]))
      throw Error(ErrorCode::NotClosed,
                  "right-way class not stable under the pullback of (" +
                      c.morphism_name(key.first) + ", " + c.morphism_name(key.second) +
                      ")",
                  c.morphism_name(key.second));
  }
  Specification2 s;
  const int n = corr.bicat->num_objects();
  for (int x = 0; x < n; ++x) s.s0.push_back(x);
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) {
      std::vector<int> ones, twos;
      const auto& tab = corr.table(x, y);
      for (std::size_t i = 0; i < tab.spans.size(); ++i)
        if (plus.marked(tab.spans[i].right_way)) ones.push_back(static_cast<int>(i));
      for (std::size_t i = 0; i < tab.morphisms.size(); ++i) {
        const auto& sm = tab.morphisms[i];
        if (plus.marked(sm.source.right_way) && plus.marked(sm.target.right_way))
          twos.push_back(static_cast<int>(i));
      }
      s.s1[{x, y}] = ones;
      s.s2[{x, y}] = twos;
    }
  return sub_bicat_by_spec(corr.bicat, s);
}

ProductSplitReport corr_product_split(const MarkedCat& m1, const MarkedCat& m2,
                                      const Caps& caps) {
  ProductSplitReport rep;
  auto prod = product_category(m1.cat, m2.cat, caps);
  std::set<int> marking;
  for (std::size_t i = 0; i < prod.mor_pairs.size(); ++i)
    if (m1.marked(prod.mor_pairs[i].first) && m2.marked(prod.mor_pairs[i].second))
      marking.insert(static_cast<int>(i));
  auto mp = certify_base_change(validate_marking_idx(prod.cat, marking));

  rep.objects_split =
      prod.cat->num_objects() == m1.cat->num_objects() * m2.cat->num_objects();
  rep.homs_split = true;
  for (int x1 = 0; x1 < static_cast<int>(m1.cat->num_objects()); ++x1)
    for (int x2 = 0; x2 < static_cast<int>(m2.cat->num_objects()); ++x2)
      for (int y1 = 0; y1 < static_cast<int>(m1.cat->num_objects()); ++y1)
        for (int y2 = 0; y2 < static_cast<int>(m2.cat->num_objects()); ++y2) {
          auto hom12 = span_category(mp, prod.ob_of(x1, x2), prod.ob_of(y1, y2), caps);
          auto hom1 = span_category(m1, x1, y1, caps);
          auto hom2 = span_category(m2, x2, y2, caps);
          auto split_span = [&](const Span& s) {
            Span p1{x1, y1, prod.ob_pairs[s.kernel].first,
                    prod.mor_pairs[s.wrong_way].first,
                    prod.mor_pairs[s.right_way].first};
            Span p2{x2, y2, prod.ob_pairs[s.kernel].second,
                    prod.mor_pairs[s.wrong_way].second,
                    prod.mor_pairs[s.right_way].second};
            return std::make_pair(hom1.object_of(p1), hom2.object_of(p2));
          };
          std::set<std::pair<int, int>> ob_images;
          for (const auto& s : hom12.spans) {
            auto img = split_span(s);
            if (img.first < 0 || img.second < 0 || !ob_images.insert(img).second) {
              rep.homs_split = false;
              rep.witness = "objects of hom((" + m1.cat->object_name(x1) + "," +
                            m2.cat->object_name(x2) + "),...) do not split";
            }
          }
          if (ob_images.size() != hom1.spans.size() * hom2.spans.size()) {
            rep.homs_split = false;
            if (rep.witness.empty()) rep.witness = "object counts do not split";
          }
          std::set<std::tuple<int, int, int, int>> mor_images;
          for (const auto& sm : hom12.morphisms) {
            auto src = split_span(sm.source);
            auto tgt = split_span(sm.target);
            int mi1 = hom1.morphism_of(src.first, tgt.first,
                                       prod.mor_pairs[sm.h].first);
            int mi2 = hom2.morphism_of(src.second, tgt.second,
                                       prod.mor_pairs[sm.h].second);
            if (mi1 < 0 || mi2 < 0 ||
                !mor_images.insert({src.first, src.second, mi1, mi2}).second) {
              rep.homs_split = false;
              if (rep.witness.empty()) rep.witness = "2-cells do not split";
            }
          }
          if (mor_images.size() != hom1.morphisms.size() * hom2.morphisms.size()) {
            rep.homs_split = false;
            if (rep.witness.empty()) rep.witness = "2-cell counts do not split";
          }
        }
  return rep;
}

}  // namespace corrcalc
