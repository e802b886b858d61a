#include "corrcalc/bicat.hpp"

#include <algorithm>

namespace corrcalc {

int Bicat::vc(int x, int y, int later, int earlier) const {
  int c = hom(x, y)->compose(later, earlier);
  if (c < 0)
    throw Error(ErrorCode::BoundaryMismatch,
                "vertical composite undefined in hom(" + objects[x] + "," + objects[y] +
                    ")");
  return c;
}

int Bicat::inv2_or_throw(int x, int y, int s) const {
  auto i = inv2(x, y, s);
  if (!i)
    throw Error(ErrorCode::NonInvertibleCoherence,
                "2-cell " + hom(x, y)->morphism_name(s) + " in hom(" + objects[x] + "," +
                    objects[y] + ") is not invertible",
                hom(x, y)->morphism_name(s));
  return *i;
}

bool Bicat::strictly_associative() const {
  const int n = num_objects();
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) {
      for (int f = 0; f < static_cast<int>(hom(x, y)->num_objects()); ++f) {
        if (comp1(x, y, y, unit[y], f) != f) return false;
        if (comp1(x, x, y, f, unit[x]) != f) return false;
      }
      for (int z = 0; z < n; ++z)
        for (int w = 0; w < n; ++w)
          for (int h = 0; h < static_cast<int>(hom(z, w)->num_objects()); ++h)
            for (int g = 0; g < static_cast<int>(hom(y, z)->num_objects()); ++g)
              for (int f = 0; f < static_cast<int>(hom(x, y)->num_objects()); ++f)
                if (comp1(x, y, w, comp1(y, z, w, h, g), f) !=
                    comp1(x, z, w, h, comp1(x, y, z, g, f)))
                  return false;
    }
  return true;
}

BicatPtr BicatBuilder::build() const {
  auto b = std::make_shared<Bicat>();
  b->objects = objects;
  b->homs = homs;
  b->unit = unit;
  const int n = b->num_objects();
  b->hcomps.resize(static_cast<std::size_t>(n) * n * n);
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      for (int z = 0; z < n; ++z) {
        HComp& t = b->hcomps[(x * n + y) * n + z];
        const auto& inner = b->hom(x, y);
        const auto& outer = b->hom(y, z);
        t.ob.assign(outer->num_objects(), std::vector<int>(inner->num_objects(), -1));
        t.mor.assign(outer->num_morphisms(),
                     std::vector<int>(inner->num_morphisms(), -1));
        for (int g = 0; g < static_cast<int>(outer->num_objects()); ++g)
          for (int f = 0; f < static_cast<int>(inner->num_objects()); ++f)
            t.ob[g][f] = ob_comp(x, y, z, g, f);
        for (int gc = 0; gc < static_cast<int>(outer->num_morphisms()); ++gc)
          for (int fc = 0; fc < static_cast<int>(inner->num_morphisms()); ++fc)
            t.mor[gc][fc] = mor_comp(x, y, z, gc, fc);
      }
  b->lunitor.resize(static_cast<std::size_t>(n) * n);
  b->runitor.resize(static_cast<std::size_t>(n) * n);
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) {
      auto& lu = b->lunitor[x * n + y];
      auto& ru = b->runitor[x * n + y];
      lu.resize(b->hom(x, y)->num_objects());
      ru.resize(b->hom(x, y)->num_objects());
      for (int f = 0; f < static_cast<int>(b->hom(x, y)->num_objects()); ++f) {
        lu[f] = lu_cell(x, y, f);
        ru[f] = ru_cell(x, y, f);
      }
    }
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      for (int z = 0; z < n; ++z)
        for (int w = 0; w < n; ++w) {
          auto& a = b->associator[{x, y, z, w}];
          a.resize(b->hom(z, w)->num_objects());
          for (int h = 0; h < static_cast<int>(b->hom(z, w)->num_objects()); ++h) {
            a[h].resize(b->hom(y, z)->num_objects());
            for (int g = 0; g < static_cast<int>(b->hom(y, z)->num_objects()); ++g) {
              a[h][g].resize(b->hom(x, y)->num_objects());
              for (int f = 0; f < static_cast<int>(b->hom(x, y)->num_objects()); ++f)
                a[h][g][f] = assoc_cell(x, y, z, w, h, g, f);
            }
          }
        }
  return b;
}

namespace {

std::string cellname(const Bicat& b, int x, int y, int s) {
  return b.hom(x, y)->morphism_name(s) + " in hom(" + b.objects[x] + "," + b.objects[y] +
         ")";
}

void check_hcomp_functorial(const Bicat& b) {
  const int n = b.num_objects();
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      for (int z = 0; z < n; ++z) {
        const auto& inner = *b.hom(x, y);
        const auto& outer = *b.hom(y, z);
        const auto& out = *b.hom(x, z);
        const HComp& t = b.hcomp(x, y, z);
        // Boundaries and identity preservation.
        for (int gc = 0; gc < static_cast<int>(outer.num_morphisms()); ++gc)
          for (int fc = 0; fc < static_cast<int>(inner.num_morphisms()); ++fc) {
            int cell = t.mor[gc][fc];
            if (out.src(cell) != t.ob[outer.src(gc)][inner.src(fc)] ||
                out.tgt(cell) != t.ob[outer.tgt(gc)][inner.tgt(fc)])
              throw Error(ErrorCode::BoundaryMismatch,
                          "horizontal composite has wrong boundary at (" +
                              outer.morphism_name(gc) + ", " + inner.morphism_name(fc) +
                              ")");
          }
        for (int g = 0; g < static_cast<int>(outer.num_objects()); ++g)
          for (int f = 0; f < static_cast<int>(inner.num_objects()); ++f)
            if (t.mor[outer.identity(g)][inner.identity(f)] != out.identity(t.ob[g][f]))
              throw Error(ErrorCode::CoherenceFailure,
                          "horizontal composition breaks identities");
        // Interchange: composition of composable pairs.
        for (int g2 = 0; g2 < static_cast<int>(outer.num_morphisms()); ++g2)
          for (int g1 = 0; g1 < static_cast<int>(outer.num_morphisms()); ++g1) {
            int gc = outer.compose(g2, g1);
            if (gc < 0) continue;
            for (int f2 = 0; f2 < static_cast<int>(inner.num_morphisms()); ++f2)
              for (int f1 = 0; f1 < static_cast<int>(inner.num_morphisms()); ++f1) {
                int fc = inner.compose(f2, f1);
                if (fc < 0) continue;
                if (t.mor[gc][fc] != out.compose(t.mor[g2][f2], t.mor[g1][f1]))
                  throw Error(ErrorCode::CoherenceFailure,
                              "horizontal composition breaks interchange at (" +
                                  outer.morphism_name(g2) + "*" + outer.morphism_name(g1) +
                                  ", " + inner.morphism_name(f2) + "*" +
                                  inner.morphism_name(f1) + ")");
              }
          }
      }
}

void check_coherence_cells(const Bicat& b) {
  const int n = b.num_objects();
  // Unitors: boundary, invertibility, naturality.
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) {
      const auto& h = *b.hom(x, y);
      for (int f = 0; f < static_cast<int>(h.num_objects()); ++f) {
        int l = b.lu(x, y, f);
        if (h.src(l) != b.comp1(x, y, y, b.unit[y], f) || h.tgt(l) != f)
          throw Error(ErrorCode::BoundaryMismatch, "left unitor boundary at " +
                          h.object_name(f));
        if (!h.is_iso(l))
          throw Error(ErrorCode::NonInvertibleCoherence,
                      "left unitor at " + h.object_name(f), h.object_name(f));
        int r = b.ru(x, y, f);
        if (h.src(r) != b.comp1(x, x, y, f, b.unit[x]) || h.tgt(r) != f)
          throw Error(ErrorCode::BoundaryMismatch, "right unitor boundary at " +
                          h.object_name(f));
        if (!h.is_iso(r))
          throw Error(ErrorCode::NonInvertibleCoherence,
                      "right unitor at " + h.object_name(f), h.object_name(f));
      }
      for (int s = 0; s < static_cast<int>(h.num_morphisms()); ++s) {
        int f = h.src(s), f2 = h.tgt(s);
        if (b.vc(x, y, b.lu(x, y, f2), b.wl(x, y, y, b.unit[y], s)) !=
            b.vc(x, y, s, b.lu(x, y, f)))
          throw Error(ErrorCode::CoherenceFailure,
                      "left unitor not natural at " + cellname(b, x, y, s));
        if (b.vc(x, y, b.ru(x, y, f2), b.wr(x, x, y, s, b.unit[x])) !=
            b.vc(x, y, s, b.ru(x, y, f)))
          throw Error(ErrorCode::CoherenceFailure,
                      "right unitor not natural at " + cellname(b, x, y, s));
      }
    }
  // Associators: boundary, invertibility, naturality in each slot.
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      for (int z = 0; z < n; ++z)
        for (int w = 0; w < n; ++w) {
          const auto& hxw = *b.hom(x, w);
          const int nh = static_cast<int>(b.hom(z, w)->num_objects());
          const int ng = static_cast<int>(b.hom(y, z)->num_objects());
          const int nf = static_cast<int>(b.hom(x, y)->num_objects());
          for (int h = 0; h < nh; ++h)
            for (int g = 0; g < ng; ++g)
              for (int f = 0; f < nf; ++f) {
                int a = b.assoc(x, y, z, w, h, g, f);
                int srcwant = b.comp1(x, y, w, b.comp1(y, z, w, h, g), f);
                int tgtwant = b.comp1(x, z, w, h, b.comp1(x, y, z, g, f));
                if (hxw.src(a) != srcwant || hxw.tgt(a) != tgtwant)
                  throw Error(ErrorCode::BoundaryMismatch, "associator boundary");
                if (!hxw.is_iso(a))
                  throw Error(ErrorCode::NonInvertibleCoherence,
                              "associator at (" + b.hom(z, w)->object_name(h) + ", " +
                                  b.hom(y, z)->object_name(g) + ", " +
                                  b.hom(x, y)->object_name(f) + ")");
              }
          // Naturality, one slot at a time.
          for (int s = 0; s < static_cast<int>(b.hom(x, y)->num_morphisms()); ++s)
            for (int g = 0; g < ng; ++g)
              for (int h = 0; h < nh; ++h) {
                int f1 = b.hom(x, y)->src(s), f2 = b.hom(x, y)->tgt(s);
                int hg = b.comp1(y, z, w, h, g);
                int lhs = b.vc(x, w, b.assoc(x, y, z, w, h, g, f2),
                               b.wl(x, y, w, hg, s));
                int rhs = b.vc(x, w, b.wl(x, z, w, h, b.wl(x, y, z, g, s)),
                               b.assoc(x, y, z, w, h, g, f1));
                if (lhs != rhs)
                  throw Error(ErrorCode::CoherenceFailure,
                              "associator not natural in the inner slot");
              }
          for (int s = 0; s < static_cast<int>(b.hom(y, z)->num_morphisms()); ++s)
            for (int f = 0; f < nf; ++f)
              for (int h = 0; h < nh; ++h) {
                int g1 = b.hom(y, z)->src(s), g2 = b.hom(y, z)->tgt(s);
                int lhs = b.vc(x, w, b.assoc(x, y, z, w, h, g2, f),
                               b.wr(x, y, w, b.wl(y, z, w, h, s), f));
                int rhs = b.vc(x, w, b.wl(x, z, w, h, b.wr(x, y, z, s, f)),
                               b.assoc(x, y, z, w, h, g1, f));
                if (lhs != rhs)
                  throw Error(ErrorCode::CoherenceFailure,
                              "associator not natural in the middle slot");
              }
          for (int s = 0; s < static_cast<int>(b.hom(z, w)->num_morphisms()); ++s)
            for (int f = 0; f < nf; ++f)
              for (int g = 0; g < ng; ++g) {
                int h1 = b.hom(z, w)->src(s), h2 = b.hom(z, w)->tgt(s);
                int gf = b.comp1(x, y, z, g, f);
                int lhs = b.vc(x, w, b.assoc(x, y, z, w, h2, g, f),
                               b.wr(x, y, w, b.wr(y, z, w, s, g), f));
                int rhs = b.vc(x, w, b.wr(x, z, w, s, gf),
                               b.assoc(x, y, z, w, h1, g, f));
                if (lhs != rhs)
                  throw Error(ErrorCode::CoherenceFailure,
                              "associator not natural in the outer slot");
              }
        }
}

void check_pentagon_triangle(const Bicat& b) {
  const int n = b.num_objects();
  // Triangle for every composable pair.
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      for (int z = 0; z < n; ++z)
        for (int g = 0; g < static_cast<int>(b.hom(y, z)->num_objects()); ++g)
          for (int f = 0; f < static_cast<int>(b.hom(x, y)->num_objects()); ++f) {
            int lhs = b.vc(x, z, b.wl(x, y, z, g, b.lu(x, y, f)),
                           b.assoc(x, y, y, z, g, b.unit[y], f));
            int rhs = b.wr(x, y, z, b.ru(y, z, g), f);
            if (lhs != rhs)
              throw Error(ErrorCode::TriangleFailure,
                          "triangle fails at (" + b.hom(y, z)->object_name(g) + ", " +
                              b.hom(x, y)->object_name(f) + ")",
                          b.hom(y, z)->object_name(g) + "," + b.hom(x, y)->object_name(f));
          }
  // Pentagon for every composable quadruple, scanned in parallel chunks and
  // reported in canonical order.
  struct Quad {
    int x, y, z, w, v;
  };
  std::vector<Quad> stations;
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      for (int z = 0; z < n; ++z)
        for (int w = 0; w < n; ++w)
          for (int v = 0; v < n; ++v) stations.push_back({x, y, z, w, v});
  std::vector<std::string> failures(stations.size());
  auto check_station = [&](std::size_t si) -> bool {
    const Quad& q = stations[si];
    const int nf = static_cast<int>(b.hom(q.x, q.y)->num_objects());
    const int ng = static_cast<int>(b.hom(q.y, q.z)->num_objects());
    const int nh = static_cast<int>(b.hom(q.z, q.w)->num_objects());
    const int nk = static_cast<int>(b.hom(q.w, q.v)->num_objects());
    for (int k = 0; k < nk; ++k)
      for (int h = 0; h < nh; ++h)
        for (int g = 0; g < ng; ++g)
          for (int f = 0; f < nf; ++f) {
            int gf = b.comp1(q.x, q.y, q.z, g, f);
            int hg = b.comp1(q.y, q.z, q.w, h, g);
            int kh = b.comp1(q.z, q.w, q.v, k, h);
            int route1 = b.vc(q.x, q.v, b.assoc(q.x, q.z, q.w, q.v, k, h, gf),
                              b.assoc(q.x, q.y, q.z, q.v, kh, g, f));
            int route2 =
                b.vc(q.x, q.v,
                     b.vc(q.x, q.v,
                          b.wl(q.x, q.w, q.v, k, b.assoc(q.x, q.y, q.z, q.w, h, g, f)),
                          b.assoc(q.x, q.y, q.w, q.v, k, hg, f)),
                     b.wr(q.x, q.y, q.v, b.assoc(q.y, q.z, q.w, q.v, k, h, g), f));
            if (route1 != route2) {
              failures[si] = b.hom(q.w, q.v)->object_name(k) + "," +
                             b.hom(q.z, q.w)->object_name(h) + "," +
                             b.hom(q.y, q.z)->object_name(g) + "," +
                             b.hom(q.x, q.y)->object_name(f);
              return false;
            }
          }
    return true;
  };
  std::size_t bad = parallel_find_first_failure(stations.size(), check_station);
  if (bad < stations.size())
    throw Error(ErrorCode::PentagonFailure, "pentagon fails at (" + failures[bad] + ")",
                failures[bad]);
}

}  // namespace

void validate_bicat(const Bicat& b) {
  const int n = b.num_objects();
  if (static_cast<int>(b.homs.size()) != n * n)
    throw Error(ErrorCode::BadInput, "hom table has wrong shape");
  for (int x = 0; x < n; ++x) {
    if (b.unit[x] < 0 || b.unit[x] >= static_cast<int>(b.hom(x, x)->num_objects()))
      throw Error(ErrorCode::BadInput, "unit out of range at " + b.objects[x]);
  }
  check_hcomp_functorial(b);
  check_coherence_cells(b);
  check_pentagon_triangle(b);
}

BicatPtr locally_discrete(const CatPtr& c) {
  BicatBuilder bb;
  const int n = static_cast<int>(c->num_objects());
  for (int o = 0; o < n; ++o) bb.objects.push_back(c->object_name(o));
  // hom(x,y): discrete category on the hom set; object i of hom(x,y) is the
  // i-th morphism x -> y of c.
  std::vector<std::vector<std::vector<int>>> homsets(n, std::vector<std::vector<int>>(n));
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) {
      homsets[x][y] = c->hom(x, y);
      FinCatData d;
      d.name = "disc(" + c->object_name(x) + "," + c->object_name(y) + ")";
      for (int m : homsets[x][y]) {
        d.objects.push_back(c->morphism_name(m));
        d.morphisms.push_back({"id_" + c->morphism_name(m), c->morphism_name(m),
                               c->morphism_name(m)});
        d.identities[c->morphism_name(m)] = "id_" + c->morphism_name(m);
        d.compose.push_back({"id_" + c->morphism_name(m), "id_" + c->morphism_name(m),
                             "id_" + c->morphism_name(m)});
      }
      bb.homs.push_back(validate_category(d));
    }
  bb.unit.resize(n);
  for (int x = 0; x < n; ++x) {
    const auto& hs = homsets[x][x];
    bb.unit[x] =
        static_cast<int>(std::find(hs.begin(), hs.end(), c->identity(x)) - hs.begin());
  }
  auto find_in = [homsets](int x, int y, int m) {
    const auto& hs = homsets[x][y];
    return static_cast<int>(std::find(hs.begin(), hs.end(), m) - hs.begin());
  };
  bb.ob_comp = [c, homsets, find_in](int x, int y, int z, int g, int f) {
    return find_in(x, z, c->compose(homsets[y][z][g], homsets[x][y][f]));
  };
  bb.mor_comp = [bb_obj = bb.ob_comp](int x, int y, int z, int gc, int fc) {
    // discrete homs: cells are identities indexed like objects
    return bb_obj(x, y, z, gc, fc);
  };
  bb.assoc_cell = [ob = bb.ob_comp](int x, int y, int z, int w, int h, int g, int f) {
    return ob(x, y, w, ob(y, z, w, h, g), f);  // identity cell on the composite
  };
  bb.lu_cell = [&bb, ob = bb.ob_comp](int x, int y, int f) {
    return ob(x, y, y, bb.unit[y], f);
  };
  bb.ru_cell = [&bb, ob = bb.ob_comp](int x, int y, int f) {
    return ob(x, x, y, f, bb.unit[x]);
  };
  return bb.build();
}

int CatUniverseResult::object_of(const CatPtr& c) const {
  for (std::size_t i = 0; i < cats.size(); ++i)
    if (cats[i] == c || *cats[i] == *c) return static_cast<int>(i);
  return -1;
}

CatUniverseResult cat_universe(const std::vector<CatPtr>& cats, const Caps& caps) {
  if (cats.empty()) throw Error(ErrorCode::BadInput, "cat_universe needs a category");
  CatUniverseResult res;
  res.cats = cats;
  const int n = static_cast<int>(cats.size());
  res.hom_tables.reserve(n * n);
  BicatBuilder bb;
  for (int i = 0; i < n; ++i) bb.objects.push_back(cats[i]->name());
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) {
      res.hom_tables.push_back(functor_category(cats[x], cats[y], caps));
      bb.homs.push_back(res.hom_tables.back().cat);
    }
  bb.unit.resize(n);
  for (int x = 0; x < n; ++x)
    bb.unit[x] = res.table(x, x).object_of(identity_functor(cats[x]));
  auto* tables = &res.hom_tables;
  auto table = [tables, n](int x, int y) -> const FunctorCategoryResult& {
    return (*tables)[x * n + y];
  };
  bb.ob_comp = [table](int x, int y, int z, int g, int f) {
    int r = table(x, z).object_of(
        compose_functors(table(y, z).functors[g], table(x, y).functors[f]));
    if (r < 0) throw Error(ErrorCode::CoherenceFailure, "composite functor not found");
    return r;
  };
  bb.mor_comp = [table](int x, int y, int z, int gc, int fc) {
    int r = table(x, z).morphism_of(
        hcompose_nats(table(y, z).nats[gc], table(x, y).nats[fc]));
    if (r < 0)
      throw Error(ErrorCode::CoherenceFailure, "composite transformation not found");
    return r;
  };
  // Strict: identity coherence cells.
  bb.assoc_cell = [&bb, table](int x, int y, int z, int w, int h, int g, int f) {
    int obc = bb.ob_comp(x, y, w, bb.ob_comp(y, z, w, h, g), f);
    return table(x, w).cat->identity(obc);
  };
  bb.lu_cell = [&bb, table](int x, int y, int f) {
    return table(x, y).cat->identity(bb.ob_comp(x, y, y, bb.unit[y], f));
  };
  bb.ru_cell = [&bb, table](int x, int y, int f) {
    return table(x, y).cat->identity(bb.ob_comp(x, x, y, f, bb.unit[x]));
  };
  res.bicat = bb.build();
  return res;
}

namespace {

int position(const std::vector<int>& v, int value) {
  auto it = std::find(v.begin(), v.end(), value);
  return it == v.end() ? -1 : static_cast<int>(it - v.begin());
}

}  // namespace

BicatPtr sub_bicat_by_spec(const BicatPtr& b, const Specification2& s) {
  const int n = b->num_objects();
  auto in_s0 = [&](int x) { return position(s.s0, x) >= 0; };
  auto ones = [&](int x, int y) -> const std::vector<int>& {
    static const std::vector<int> empty;
    auto it = s.s1.find({x, y});
    return it == s.s1.end() ? empty : it->second;
  };
  auto twos = [&](int x, int y) -> const std::vector<int>& {
    static const std::vector<int> empty;
    auto it = s.s2.find({x, y});
    return it == s.s2.end() ? empty : it->second;
  };
  // Closure checks.
  for (int x : s.s0) {
    if (position(ones(x, x), b->unit[x]) < 0)
      throw Error(ErrorCode::NotClosed, "unit 1-cell of " + b->objects[x] + " missing",
                  b->objects[x]);
  }
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) {
      if (ones(x, y).empty() && twos(x, y).empty()) continue;
      if (!in_s0(x) || !in_s0(y))
        throw Error(ErrorCode::NotClosed, "cells over objects outside the specification");
      for (int z = 0; z < n; ++z) {
        if (!in_s0(z)) continue;
        for (int g : ones(y, z))
          for (int f : ones(x, y))
            if (position(ones(x, z), b->comp1(x, y, z, g, f)) < 0)
              throw Error(ErrorCode::NotClosed,
                          "1-cells not closed under composition at " +
                              b->hom(y, z)->object_name(g) + " ∘ " +
                              b->hom(x, y)->object_name(f),
                          b->hom(y, z)->object_name(g));
      }
      const auto& h = *b->hom(x, y);
      for (int f : ones(x, y))
        if (position(twos(x, y), h.identity(f)) < 0)
          throw Error(ErrorCode::NotClosed,
                      "identity 2-cell of " + h.object_name(f) + " missing",
                      h.object_name(f));
      for (int c : twos(x, y)) {
        if (position(ones(x, y), h.src(c)) < 0 || position(ones(x, y), h.tgt(c)) < 0)
          throw Error(ErrorCode::NotClosed,
                      "2-cell " + h.morphism_name(c) + " has boundary outside S1",
                      h.morphism_name(c));
        for (int c2 : twos(x, y)) {
          int v = h.compose(c2, c);
          if (v >= 0 && position(twos(x, y), v) < 0)
            throw Error(ErrorCode::NotClosed,
                        "2-cells not closed under vertical composition at " +
                            h.morphism_name(c2) + " ∘ " + h.morphism_name(c),
                        h.morphism_name(c2));
        }
      }
      for (int z = 0; z < n; ++z) {
        if (!in_s0(z)) continue;
        for (int c2 : twos(y, z))
          for (int c1 : twos(x, y))
            if (position(twos(x, z), b->comp2(x, y, z, c2, c1)) < 0)
              throw Error(ErrorCode::NotClosed,
                          "2-cells not closed under horizontal composition");
      }
    }
  // Coherence cells must restrict.
  for (int x : s.s0)
    for (int y : s.s0) {
      for (int f : ones(x, y)) {
        if (position(twos(x, y), b->lu(x, y, f)) < 0 ||
            position(twos(x, y), b->ru(x, y, f)) < 0)
          throw Error(ErrorCode::NotClosed,
                      "unitor of " + b->hom(x, y)->object_name(f) + " not in S2",
                      b->hom(x, y)->object_name(f));
      }
      for (int z : s.s0)
        for (int w : s.s0)
          for (int h : ones(z, w))
            for (int g : ones(y, z))
              for (int f : ones(x, y))
                if (position(twos(x, w), b->assoc(x, y, z, w, h, g, f)) < 0)
                  throw Error(ErrorCode::NotClosed, "associator component not in S2");
    }

  // Build the restricted bicategory with reindexed cells.
  BicatBuilder bb;
  std::vector<int> obj_of;  // new -> old
  for (int x : s.s0) {
    bb.objects.push_back(b->objects[x]);
    obj_of.push_back(x);
  }
  const int m = static_cast<int>(obj_of.size());
  std::vector<std::vector<std::vector<int>>> one_of(m, std::vector<std::vector<int>>(m));
  std::vector<std::vector<std::vector<int>>> two_of(m, std::vector<std::vector<int>>(m));
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      int x = obj_of[i], y = obj_of[j];
      one_of[i][j] = ones(x, y);
      two_of[i][j] = twos(x, y);
      const auto& h = *b->hom(x, y);
      FinCatData d;
      d.name = h.name() + "|spec";
      for (int f : one_of[i][j]) d.objects.push_back(h.object_name(f));
      for (int c : two_of[i][j])
        d.morphisms.push_back({h.morphism_name(c), h.object_name(h.src(c)),
                               h.object_name(h.tgt(c))});
      for (int f : one_of[i][j]) d.identities[h.object_name(f)] = h.morphism_name(h.identity(f));
      for (int c2 : two_of[i][j])
        for (int c1 : two_of[i][j]) {
          int v = h.compose(c2, c1);
          if (v >= 0)
            d.compose.push_back({h.morphism_name(c2), h.morphism_name(c1),
                                 h.morphism_name(v)});
        }
      bb.homs.push_back(validate_category(d));
    }
  bb.unit.resize(m);
  for (int i = 0; i < m; ++i) bb.unit[i] = position(one_of[i][i], b->unit[obj_of[i]]);
  bb.ob_comp = [b, obj_of, one_of](int x, int y, int z, int g, int f) {
    return position(one_of[x][z], b->comp1(obj_of[x], obj_of[y], obj_of[z],
                                           one_of[y][z][g], one_of[x][y][f]));
  };
  bb.mor_comp = [b, obj_of, two_of](int x, int y, int z, int gc, int fc) {
    return position(two_of[x][z], b->comp2(obj_of[x], obj_of[y], obj_of[z],
                                           two_of[y][z][gc], two_of[x][y][fc]));
  };
  bb.assoc_cell = [b, obj_of, one_of, two_of](int x, int y, int z, int w, int h, int g,
                                              int f) {
    return position(two_of[x][w],
                    b->assoc(obj_of[x], obj_of[y], obj_of[z], obj_of[w], one_of[z][w][h],
                             one_of[y][z][g], one_of[x][y][f]));
  };
  bb.lu_cell = [b, obj_of, one_of, two_of](int x, int y, int f) {
    return position(two_of[x][y], b->lu(obj_of[x], obj_of[y], one_of[x][y][f]));
  };
  bb.ru_cell = [b, obj_of, one_of, two_of](int x, int y, int f) {
    return position(two_of[x][y], b->ru(obj_of[x], obj_of[y], one_of[x][y][f]));
  };
  return bb.build();
}

Specification2 two_one_core_spec(const Bicat& b) {
  Specification2 s;
  for (int x = 0; x < b.num_objects(); ++x) s.s0.push_back(x);
  for (int x = 0; x < b.num_objects(); ++x)
    for (int y = 0; y < b.num_objects(); ++y) {
      const auto& h = *b.hom(x, y);
      std::vector<int> all1(h.num_objects());
      for (std::size_t i = 0; i < all1.size(); ++i) all1[i] = static_cast<int>(i);
      s.s1[{x, y}] = all1;
      std::vector<int> inv;
      for (int c = 0; c < static_cast<int>(h.num_morphisms()); ++c)
        if (h.is_iso(c)) inv.push_back(c);
      s.s2[{x, y}] = inv;
    }
  return s;
}

Core1Result core1(const BicatPtr& b) {
  Core1Result res;
  const int n = b->num_objects();
  res.strict = b->strictly_associative();
  FinCatData d;
  d.name = "core1";
  for (int x = 0; x < n; ++x) d.objects.push_back(b->objects[x]);

  // Representatives: identity map when strict, least 2-isomorphism class
  // representatives otherwise.
  std::vector<std::vector<std::vector<int>>> rep(n, std::vector<std::vector<int>>(n));
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) {
      const auto& h = *b->hom(x, y);
      std::vector<int> r(h.num_objects());
      for (int f = 0; f < static_cast<int>(h.num_objects()); ++f) {
        if (res.strict) {
          r[f] = f;
          continue;
        }
        int least = f;
        for (int g = 0; g < static_cast<int>(h.num_objects()); ++g) {
          if (g >= least) break;
          for (int c : h.hom(f, g))
            if (h.is_iso(c)) {
              least = g;
              break;
            }
        }
        r[f] = least;
      }
      rep[x][y] = r;
    }
  auto moridx = [&](int x, int y, int f) {
    int count = 0;
    for (int xx = 0; xx < n; ++xx)
      for (int yy = 0; yy < n; ++yy) {
        const auto& h = *b->hom(xx, yy);
        for (int g = 0; g < static_cast<int>(h.num_objects()); ++g) {
          if (rep[xx][yy][g] != g) continue;
          if (xx == x && yy == y && g == rep[x][y][f]) return count;
          ++count;
        }
      }
    return -1;
  };
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) {
      const auto& h = *b->hom(x, y);
      for (int f = 0; f < static_cast<int>(h.num_objects()); ++f) {
        if (rep[x][y][f] != f) continue;
        res.cells.push_back({x, y, f});
        d.morphisms.push_back({b->objects[x] + ">" + b->objects[y] + ":" +
                                   h.object_name(f),
                               d.objects[x], d.objects[y]});
      }
    }
  for (int x = 0; x < n; ++x)
    d.identities[d.objects[x]] = d.morphisms[moridx(x, x, b->unit[x])].name;
  for (std::size_t j = 0; j < res.cells.size(); ++j)
    for (std::size_t i = 0; i < res.cells.size(); ++i) {
      auto [x1, y1, f] = res.cells[i];
      auto [x2, y2, g] = res.cells[j];
      if (y1 != x2) continue;
      int comp = b->comp1(x1, y1, y2, g, f);
      d.compose.push_back({d.morphisms[j].name, d.morphisms[i].name,
                           d.morphisms[moridx(x1, y2, comp)].name});
    }
  res.cat = validate_category(d);
  return res;
}

BicatPtr op1(const BicatPtr& b) {
  BicatBuilder bb;
  const int n = b->num_objects();
  bb.objects = b->objects;
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) bb.homs.push_back(b->hom(y, x));
  bb.unit = b->unit;
  bb.ob_comp = [b](int x, int y, int z, int g, int f) {
    // g: hom_b(z,y), f: hom_b(y,x); composite in op is f ∘_b g in hom_b(z,x).
    return b->comp1(z, y, x, f, g);
  };
  bb.mor_comp = [b](int x, int y, int z, int gc, int fc) {
    return b->comp2(z, y, x, fc, gc);
  };
  bb.assoc_cell = [b](int x, int y, int z, int w, int h, int g, int f) {
    // (h∘g)∘f in op is f∘_b(g∘_b h); the op associator is the inverse of the
    // base associator at (f, g, h).
    return b->assoc_inv(w, z, y, x, f, g, h);
  };
  bb.lu_cell = [b](int x, int y, int f) { return b->ru(y, x, f); };
  bb.ru_cell = [b](int x, int y, int f) { return b->lu(y, x, f); };
  return bb.build();
}

BicatPtr op2(const BicatPtr& b) {
  BicatBuilder bb;
  const int n = b->num_objects();
  bb.objects = b->objects;
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) bb.homs.push_back(opposite(b->hom(x, y)));
  bb.unit = b->unit;
  bb.ob_comp = [b](int x, int y, int z, int g, int f) { return b->comp1(x, y, z, g, f); };
  bb.mor_comp = [b](int x, int y, int z, int gc, int fc) {
    return b->comp2(x, y, z, gc, fc);
  };
  bb.assoc_cell = [b](int x, int y, int z, int w, int h, int g, int f) {
    return b->assoc_inv(x, y, z, w, h, g, f);
  };
  bb.lu_cell = [b](int x, int y, int f) { return b->lu_inv(x, y, f); };
  bb.ru_cell = [b](int x, int y, int f) { return b->ru_inv(x, y, f); };
  return bb.build();
}

bool bicats_equal(const Bicat& a, const Bicat& b) {
  if (a.objects != b.objects || a.unit != b.unit) return false;
  const int n = a.num_objects();
  for (int i = 0; i < n * n; ++i)
    if (!(*a.homs[i] == *b.homs[i])) return false;
  for (std::size_t i = 0; i < a.hcomps.size(); ++i)
    if (a.hcomps[i].ob != b.hcomps[i].ob || a.hcomps[i].mor != b.hcomps[i].mor)
      return false;
  return a.associator == b.associator && a.lunitor == b.lunitor &&
         a.runitor == b.runitor;
}

void validate_pseudofunctor(const Pseudofunctor& p) {
  const Bicat& s = *p.source;
  const Bicat& t = *p.target;
  const int n = s.num_objects();
  if (static_cast<int>(p.ob_map.size()) != n ||
      static_cast<int>(p.hom_functor.size()) != n * n ||
      static_cast<int>(p.unitor.size()) != n)
    throw Error(ErrorCode::BadInput, "pseudofunctor data has wrong shape");
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) validate_functor(p.hf(x, y));

  // Unitors: boundary and invertibility.
  for (int x = 0; x < n; ++x) {
    int fx = p.fob(x);
    const auto& h = *t.hom(fx, fx);
    int u = p.unitor[x];
    if (h.src(u) != t.unit[fx] || h.tgt(u) != p.f1(x, x, s.unit[x]))
      throw Error(ErrorCode::CoherenceFailure,
                  "unitor boundary at " + s.objects[x], s.objects[x]);
    if (!h.is_iso(u))
      throw Error(ErrorCode::NonInvertibleCoherence, "unitor at " + s.objects[x],
                  s.objects[x]);
  }

  // Compositors: boundary, invertibility, naturality in both slots.
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      for (int z = 0; z < n; ++z) {
        int fx = p.fob(x), fy = p.fob(y), fz = p.fob(z);
        const auto& hout = *t.hom(fx, fz);
        const int ng = static_cast<int>(s.hom(y, z)->num_objects());
        const int nf = static_cast<int>(s.hom(x, y)->num_objects());
        for (int g = 0; g < ng; ++g)
          for (int f = 0; f < nf; ++f) {
            int cc = p.comp_cell(x, y, z, g, f);
            int srcwant = t.comp1(fx, fy, fz, p.f1(y, z, g), p.f1(x, y, f));
            int tgtwant = p.f1(x, z, s.comp1(x, y, z, g, f));
            if (hout.src(cc) != srcwant || hout.tgt(cc) != tgtwant)
              throw Error(ErrorCode::CoherenceFailure, "compositor boundary at (" +
                              s.hom(y, z)->object_name(g) + ", " +
                              s.hom(x, y)->object_name(f) + ")");
            if (!hout.is_iso(cc))
              throw Error(ErrorCode::NonInvertibleCoherence, "compositor at (" +
                              s.hom(y, z)->object_name(g) + ", " +
                              s.hom(x, y)->object_name(f) + ")");
          }
        for (int sc = 0; sc < static_cast<int>(s.hom(y, z)->num_morphisms()); ++sc)
          for (int f = 0; f < nf; ++f) {
            int g1 = s.hom(y, z)->src(sc), g2 = s.hom(y, z)->tgt(sc);
            int lhs = t.vc(fx, fz, p.comp_cell(x, y, z, g2, f),
                           t.wr(fx, fy, fz, p.f2(y, z, sc), p.f1(x, y, f)));
            int rhs = t.vc(fx, fz, p.f2(x, z, s.wr(x, y, z, sc, f)),
                           p.comp_cell(x, y, z, g1, f));
            if (lhs != rhs)
              throw Error(ErrorCode::CoherenceFailure,
                          "compositor not natural in the outer slot");
          }
        for (int sc = 0; sc < static_cast<int>(s.hom(x, y)->num_morphisms()); ++sc)
          for (int g = 0; g < ng; ++g) {
            int f1 = s.hom(x, y)->src(sc), f2 = s.hom(x, y)->tgt(sc);
            int lhs = t.vc(fx, fz, p.comp_cell(x, y, z, g, f2),
                           t.wl(fx, fy, fz, p.f1(y, z, g), p.f2(x, y, sc)));
            int rhs = t.vc(fx, fz, p.f2(x, z, s.wl(x, y, z, g, sc)),
                           p.comp_cell(x, y, z, g, f1));
            if (lhs != rhs)
              throw Error(ErrorCode::CoherenceFailure,
                          "compositor not natural in the inner slot");
          }
      }

  // Associativity hexagon.
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      for (int z = 0; z < n; ++z)
        for (int w = 0; w < n; ++w) {
          int fx = p.fob(x), fy = p.fob(y), fz = p.fob(z), fw = p.fob(w);
          for (int h = 0; h < static_cast<int>(s.hom(z, w)->num_objects()); ++h)
            for (int g = 0; g < static_cast<int>(s.hom(y, z)->num_objects()); ++g)
              for (int f = 0; f < static_cast<int>(s.hom(x, y)->num_objects()); ++f) {
                int gf = s.comp1(x, y, z, g, f);
                int hg = s.comp1(y, z, w, h, g);
                int lhs = t.vc(
                    fx, fw, p.f2(x, w, s.assoc(x, y, z, w, h, g, f)),
                    t.vc(fx, fw, p.comp_cell(x, y, w, hg, f),
                         t.wr(fx, fy, fw, p.comp_cell(y, z, w, h, g), p.f1(x, y, f))));
                int rhs = t.vc(
                    fx, fw, p.comp_cell(x, z, w, h, gf),
                    t.vc(fx, fw,
                         t.wl(fx, fz, fw, p.f1(z, w, h), p.comp_cell(x, y, z, g, f)),
                         t.assoc(fx, fy, fz, fw, p.f1(z, w, h), p.f1(y, z, g),
                                 p.f1(x, y, f))));
                if (lhs != rhs)
                  throw Error(ErrorCode::CoherenceFailure,
                              "compositor hexagon fails at (" +
                                  s.hom(z, w)->object_name(h) + ", " +
                                  s.hom(y, z)->object_name(g) + ", " +
                                  s.hom(x, y)->object_name(f) + ")");
              }
        }

  // Unit squares.
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) {
      int fx = p.fob(x), fy = p.fob(y);
      for (int f = 0; f < static_cast<int>(s.hom(x, y)->num_objects()); ++f) {
        int ff = p.f1(x, y, f);
        int lhs = t.vc(fx, fy, p.f2(x, y, s.lu(x, y, f)),
                       t.vc(fx, fy, p.comp_cell(x, y, y, s.unit[y], f),
                            t.wr(fx, fy, fy, p.unitor[y], ff)));
        if (lhs != t.lu(fx, fy, ff))
          throw Error(ErrorCode::CoherenceFailure,
                      "left unit square fails at " + s.hom(x, y)->object_name(f));
        int rhs = t.vc(fx, fy, p.f2(x, y, s.ru(x, y, f)),
                       t.vc(fx, fy, p.comp_cell(x, x, y, f, s.unit[x]),
                            t.wl(fx, fx, fy, ff, p.unitor[x])));
        if (rhs != t.ru(fx, fy, ff))
          throw Error(ErrorCode::CoherenceFailure,
                      "right unit square fails at " + s.hom(x, y)->object_name(f));
      }
    }
}

Pseudofunctor identity_pseudofunctor(const BicatPtr& b) {
  Pseudofunctor p;
  p.source = b;
  p.target = b;
  const int n = b->num_objects();
  p.ob_map.resize(n);
  for (int x = 0; x < n; ++x) p.ob_map[x] = x;
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) p.hom_functor.push_back(identity_functor(b->hom(x, y)));
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      for (int z = 0; z < n; ++z) {
        auto& table = p.compositor[{x, y, z}];
        table.resize(b->hom(y, z)->num_objects());
        for (int g = 0; g < static_cast<int>(b->hom(y, z)->num_objects()); ++g) {
          table[g].resize(b->hom(x, y)->num_objects());
          for (int f = 0; f < static_cast<int>(b->hom(x, y)->num_objects()); ++f)
            table[g][f] = b->id2(x, z, b->comp1(x, y, z, g, f));
        }
      }
  p.unitor.resize(n);
  for (int x = 0; x < n; ++x) p.unitor[x] = b->id2(x, x, b->unit[x]);
  return p;
}

Pseudofunctor compose_pseudofunctors(const Pseudofunctor& g, const Pseudofunctor& f) {
  Pseudofunctor p;
  p.source = f.source;
  p.target = g.target;
  const int n = static_cast<int>(f.ob_map.size());
  p.ob_map.resize(n);
  for (int x = 0; x < n; ++x) p.ob_map[x] = g.ob_map[f.ob_map[x]];
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      p.hom_functor.push_back(
          compose_functors(g.hf(f.ob_map[x], f.ob_map[y]), f.hf(x, y)));
  const Bicat& t = *g.target;
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      for (int z = 0; z < n; ++z) {
        int gx = p.ob_map[x], gz = p.ob_map[z];
        int fx = f.ob_map[x], fy = f.ob_map[y], fz = f.ob_map[z];
        auto& table = p.compositor[{x, y, z}];
        const int ng = static_cast<int>(f.source->hom(y, z)->num_objects());
        const int nf = static_cast<int>(f.source->hom(x, y)->num_objects());
        table.resize(ng);
        for (int a = 0; a < ng; ++a) {
          table[a].resize(nf);
          for (int c = 0; c < nf; ++c) {
            int gamma_f = f.comp_cell(x, y, z, a, c);
            int gamma_g = g.comp_cell(fx, fy, fz, f.f1(y, z, a), f.f1(x, y, c));
            table[a][c] =
                t.vc(gx, gz, g.f2(fx, fz, gamma_f), gamma_g);
          }
        }
      }
  p.unitor.resize(n);
  for (int x = 0; x < n; ++x) {
    int gx = p.ob_map[x];
    int fx = f.ob_map[x];
    p.unitor[x] = t.vc(gx, gx, g.f2(fx, fx, f.unitor[x]), g.unitor[fx]);
  }
  return p;
}

void validate_pseudotransformation(const Pseudofunctor& f, const Pseudofunctor& g,
                                   const PseudoTransformation& tr) {
  const Bicat& s = *f.source;
  const Bicat& t = *f.target;
  const int n = s.num_objects();
  if (static_cast<int>(tr.component.size()) != n)
    throw Error(ErrorCode::BadInput, "transformation has wrong component count");
  for (int x = 0; x < n; ++x) {
    int c = tr.component[x];
    if (c < 0 || c >= static_cast<int>(t.hom(f.fob(x), g.fob(x))->num_objects()))
      throw Error(ErrorCode::BoundaryMismatch, "component out of range");
  }
  // Cells: boundary G(f)∘comp_x => comp_y∘F(f), invertible, natural in f.
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) {
      const auto& h = *s.hom(x, y);
      int fx = f.fob(x), fy = f.fob(y), gx = g.fob(x), gy = g.fob(y);
      for (int e = 0; e < static_cast<int>(h.num_objects()); ++e) {
        int cel = tr.cell_at(x, y, e);
        const auto& homcat = *t.hom(fx, gy);
        int srcwant = t.comp1(fx, gx, gy, g.f1(x, y, e), tr.comp(x));
        int tgtwant = t.comp1(fx, fy, gy, tr.comp(y), f.f1(x, y, e));
        if (homcat.src(cel) != srcwant || homcat.tgt(cel) != tgtwant)
          throw Error(ErrorCode::BoundaryMismatch,
                      "transformation cell boundary at " + h.object_name(e));
        if (!homcat.is_iso(cel))
          throw Error(ErrorCode::NonInvertibleCoherence,
                      "transformation cell at " + h.object_name(e));
      }
      for (int sc = 0; sc < static_cast<int>(h.num_morphisms()); ++sc) {
        int e1 = h.src(sc), e2 = h.tgt(sc);
        int lhs = t.vc(fx, gy, tr.cell_at(x, y, e2),
                       t.wr(fx, gx, gy, g.f2(x, y, sc), tr.comp(x)));
        int rhs = t.vc(fx, gy, t.wl(fx, fy, gy, tr.comp(y), f.f2(x, y, sc)),
                       tr.cell_at(x, y, e1));
        if (lhs != rhs)
          throw Error(ErrorCode::CoherenceFailure,
                      "transformation cell not natural at " + h.morphism_name(sc));
      }
    }
  // Unit axiom.
  for (int x = 0; x < n; ++x) {
    int fx = f.fob(x), gx = g.fob(x);
    int c = tr.comp(x);
    int lhs = t.vc(fx, gx, tr.cell_at(x, x, s.unit[x]),
                   t.vc(fx, gx, t.wr(fx, gx, gx, g.unitor[x], c),
                        t.lu_inv(fx, gx, c)));
    int rhs = t.vc(fx, gx, t.wl(fx, fx, gx, c, f.unitor[x]), t.ru_inv(fx, gx, c));
    if (lhs != rhs)
      throw Error(ErrorCode::CoherenceFailure,
                  "transformation unit axiom fails at " + s.objects[x], s.objects[x]);
  }
  // Composition axiom.
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      for (int z = 0; z < n; ++z) {
        int fx = f.fob(x), fy = f.fob(y), fz = f.fob(z);
        int gx = g.fob(x), gy = g.fob(y), gz = g.fob(z);
        for (int b2 = 0; b2 < static_cast<int>(s.hom(y, z)->num_objects()); ++b2)
          for (int b1 = 0; b1 < static_cast<int>(s.hom(x, y)->num_objects()); ++b1) {
            int comp = s.comp1(x, y, z, b2, b1);
            int lhs = t.vc(fx, gz, tr.cell_at(x, z, comp),
                           t.wr(fx, gx, gz, g.comp_cell(x, y, z, b2, b1), tr.comp(x)));
            int rhs = t.vc(
                fx, gz,
                t.wl(fx, fz, gz, tr.comp(z), f.comp_cell(x, y, z, b2, b1)),
                t.vc(fx, gz,
                     t.assoc(fx, fy, fz, gz, tr.comp(z), f.f1(y, z, b2), f.f1(x, y, b1)),
                     t.vc(fx, gz,
                          t.wr(fx, fy, gz,
                               tr.cell_at(y, z, b2), f.f1(x, y, b1)),
                          t.vc(fx, gz,
                               t.assoc_inv(fx, fy, gy, gz, g.f1(y, z, b2), tr.comp(y),
                                           f.f1(x, y, b1)),
                               t.vc(fx, gz,
                                    t.wl(fx, gy, gz, g.f1(y, z, b2),
                                         tr.cell_at(x, y, b1)),
                                    t.assoc(fx, gx, gy, gz, g.f1(y, z, b2),
                                            g.f1(x, y, b1), tr.comp(x)))))));
            if (lhs != rhs)
              throw Error(ErrorCode::CoherenceFailure,
                          "transformation composition axiom fails at (" +
                              s.hom(y, z)->object_name(b2) + ", " +
                              s.hom(x, y)->object_name(b1) + ")");
          }
      }
}

std::vector<PseudoTransformation> enumerate_pseudotransformations(
    const Pseudofunctor& f, const Pseudofunctor& g, bool invertible_components_only,
    std::size_t max_results) {
  std::vector<PseudoTransformation> out;
  const Bicat& s = *f.source;
  const Bicat& t = *f.target;
  const int n = s.num_objects();

  // All (x, y, f) cell stations in canonical order.
  std::vector<std::array<int, 3>> stations;
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      for (int e = 0; e < static_cast<int>(s.hom(x, y)->num_objects()); ++e)
        stations.push_back({x, y, e});

  PseudoTransformation cur;
  cur.component.assign(n, -1);

  // Returns false to stop the whole search.
  std::function<bool(std::size_t)> assign_cell = [&](std::size_t si) -> bool {
    if (si == stations.size()) {
      try {
        validate_pseudotransformation(f, g, cur);
      } catch (const Error&) {
        return true;
      }
      out.push_back(cur);
      return out.size() < max_results;
    }
    auto [x, y, e] = stations[si];
    int fx = f.fob(x), fy = f.fob(y), gx = g.fob(x), gy = g.fob(y);
    const auto& homcat = *t.hom(fx, gy);
    int srcwant = t.comp1(fx, gx, gy, g.f1(x, y, e), cur.comp(x));
    int tgtwant = t.comp1(fx, fy, gy, cur.comp(y), f.f1(x, y, e));
    for (int cel : homcat.hom(srcwant, tgtwant)) {
      if (!homcat.is_iso(cel)) continue;
      cur.cell[{x, y, e}] = cel;
      if (!assign_cell(si + 1)) return false;
    }
    cur.cell.erase({x, y, e});
    return true;
  };

  std::function<bool(int)> assign_comp = [&](int x) -> bool {
    if (x == n) return assign_cell(0);
    const auto& homcat = *t.hom(f.fob(x), g.fob(x));
    for (int c = 0; c < static_cast<int>(homcat.num_objects()); ++c) {
      if (invertible_components_only) {
        // Internal equivalence: some 1-cell d with both composites
        // 2-isomorphic to identities.
        bool inv = false;
        const auto& back = *t.hom(g.fob(x), f.fob(x));
        for (int d = 0; d < static_cast<int>(back.num_objects()) && !inv; ++d) {
          int dc = t.comp1(f.fob(x), g.fob(x), f.fob(x), d, c);
          int cd = t.comp1(g.fob(x), f.fob(x), g.fob(x), c, d);
          bool left_ok = false, right_ok = false;
          for (int m : t.hom(f.fob(x), f.fob(x))->hom(dc, t.unit[f.fob(x)]))
            if (t.hom(f.fob(x), f.fob(x))->is_iso(m)) left_ok = true;
          for (int m : t.hom(g.fob(x), g.fob(x))->hom(cd, t.unit[g.fob(x)]))
            if (t.hom(g.fob(x), g.fob(x))->is_iso(m)) right_ok = true;
          inv = left_ok && right_ok;
        }
        if (!inv) continue;
      }
      cur.component[x] = c;
      if (!assign_comp(x + 1)) return false;
    }
    cur.component[x] = -1;
    return true;
  };
  assign_comp(0);
  return out;
}

bool pseudofunctors_isomorphic(const Pseudofunctor& f, const Pseudofunctor& g) {
  if (f.ob_map.size() != g.ob_map.size()) return false;
  return !enumerate_pseudotransformations(f, g, true, 1).empty();
}

bool bicat_triangle_identities(const Bicat& b, const BicatAdjunction& adj) {
  const int x = adj.x, y = adj.y;
  const int f = adj.left, u = adj.right;
  // f => f∘id_x => f∘(u∘f) => (f∘u)∘f => id_y∘f => f
  int t1 = b.vc(x, y, b.lu(x, y, f),
                b.vc(x, y, b.wr(x, y, y, adj.counit, f),
                     b.vc(x, y, b.assoc_inv(x, y, x, y, f, u, f),
                          b.vc(x, y, b.wl(x, x, y, f, adj.unit), b.ru_inv(x, y, f)))));
  if (t1 != b.id2(x, y, f)) return false;
  // u => id_x∘u => (u∘f)∘u => u∘(f∘u) => u∘id_y => u
  int t2 = b.vc(y, x, b.ru(y, x, u),
                b.vc(y, x, b.wl(y, y, x, u, adj.counit),
                     b.vc(y, x, b.assoc(y, x, y, x, u, f, u),
                          b.vc(y, x, b.wr(y, x, x, adj.unit, u), b.lu_inv(y, x, u)))));
  return t2 == b.id2(y, x, u);
}

std::optional<BicatAdjunction> find_right_adjoint_1cell(const Bicat& b, int x, int y,
                                                        int left) {
  const auto& homxx = *b.hom(x, x);
  const auto& homyy = *b.hom(y, y);
  for (int u = 0; u < static_cast<int>(b.hom(y, x)->num_objects()); ++u) {
    int uf = b.comp1(x, y, x, u, left);
    int fu = b.comp1(y, x, y, left, u);
    for (int e : homxx.hom(b.unit[x], uf))
      for (int eps : homyy.hom(fu, b.unit[y])) {
        BicatAdjunction adj;
        adj.x = x;
        adj.y = y;
        adj.left = left;
        adj.right = u;
        adj.unit = e;
        adj.counit = eps;
        if (bicat_triangle_identities(b, adj)) return adj;
      }
  }
  return std::nullopt;
}

int right_adjoint_comparison_cell(const Bicat& b, const BicatAdjunction& a,
                                  const BicatAdjunction& c) {
  const int x = a.x, y = a.y;
  // a.right => id_x∘a.right => (c.right∘f)∘a.right => c.right∘(f∘a.right)
  //         => c.right∘id_y => c.right
  return b.vc(y, x, b.ru(y, x, c.right),
              b.vc(y, x, b.wl(y, y, x, c.right, a.counit),
                   b.vc(y, x, b.assoc(y, x, y, x, c.right, a.left, a.right),
                        b.vc(y, x, b.wr(y, x, x, c.unit, a.right),
                             b.lu_inv(y, x, a.right)))));
}

void validate_lax_square(const Bicat& b, const BicatLaxSquare& sq) {
  const auto& hom_filler = *b.hom(sq.x00, sq.x11);
  int srcwant = b.comp1(sq.x00, sq.x01, sq.x11, sq.right_adj.left, sq.top);
  int tgtwant = b.comp1(sq.x00, sq.x10, sq.x11, sq.bot, sq.left_adj.left);
  if (hom_filler.src(sq.filler) != srcwant || hom_filler.tgt(sq.filler) != tgtwant)
    throw Error(ErrorCode::BoundaryMismatch, "lax square filler has wrong boundary");
  if (!bicat_triangle_identities(b, sq.left_adj) ||
      !bicat_triangle_identities(b, sq.right_adj))
    throw Error(ErrorCode::PreconditionFailed, "lax square adjunction invalid");
}

int bicat_mate(const Bicat& b, const BicatLaxSquare& sq) {
  const int x00 = sq.x00, x01 = sq.x01, x10 = sq.x10, x11 = sq.x11;
  const int top = sq.top, bot = sq.bot;
  const int l = sq.left_adj.left, lr = sq.left_adj.right;
  const int r = sq.right_adj.left, rr = sq.right_adj.right;

  int a = b.comp1(x10, x00, x01, top, lr);  // top∘leftR
  // chain: r∘(top∘lr) => bot, inside hom(x10, x11)
  int s1 = b.assoc_inv(x10, x00, x01, x11, r, top, lr);        // r∘(top∘lr) => (r∘top)∘lr
  int s2 = b.wr(x10, x00, x11, sq.filler, lr);                 // => (bot∘l)∘lr
  int s3 = b.assoc(x10, x00, x10, x11, bot, l, lr);            // => bot∘(l∘lr)
  int s4 = b.wl(x10, x10, x11, bot, sq.left_adj.counit);       // => bot∘id
  int s5 = b.ru(x10, x11, bot);                                // => bot
  int chain = b.vc(x10, x11, s5,
                   b.vc(x10, x11, s4, b.vc(x10, x11, s3, b.vc(x10, x11, s2, s1))));
  // A => id∘A => (rr∘r)∘A => rr∘(r∘A) => rr∘bot
  return b.vc(x10, x01, b.wl(x10, x11, x01, rr, chain),
              b.vc(x10, x01, b.assoc(x10, x01, x11, x01, rr, r, a),
                   b.vc(x10, x01, b.wr(x10, x01, x01, sq.right_adj.unit, a),
                        b.lu_inv(x10, x01, a))));
}

int bicat_mate_route2(const Bicat& b, const BicatLaxSquare& sq) {
  const int x00 = sq.x00, x01 = sq.x01, x10 = sq.x10, x11 = sq.x11;
  const int top = sq.top, bot = sq.bot;
  const int l = sq.left_adj.left, lr = sq.left_adj.right;
  const int r = sq.right_adj.left, rr = sq.right_adj.right;

  // phi': top => rr∘(bot∘l) in hom(x00, x01)
  int botl = b.comp1(x00, x10, x11, bot, l);
  int phi2 = b.vc(
      x00, x01, b.wl(x00, x11, x01, rr, sq.filler),
      b.vc(x00, x01, b.assoc(x00, x01, x11, x01, rr, r, top),
           b.vc(x00, x01, b.wr(x00, x01, x01, sq.right_adj.unit, top),
                b.lu_inv(x00, x01, top))));
  // top∘lr => (rr∘(bot∘l))∘lr => rr∘((bot∘l)∘lr) => rr∘(bot∘(l∘lr))
  //        => rr∘(bot∘id) => rr∘bot
  int step1 = b.wr(x10, x00, x01, phi2, lr);
  int step2 = b.assoc(x10, x00, x11, x01, rr, botl, lr);
  int step3 = b.wl(x10, x11, x01, rr, b.assoc(x10, x00, x10, x11, bot, l, lr));
  int step4 =
      b.wl(x10, x11, x01, rr, b.wl(x10, x10, x11, bot, sq.left_adj.counit));
  int step5 = b.wl(x10, x11, x01, rr, b.ru(x10, x11, bot));
  return b.vc(x10, x01, step5,
              b.vc(x10, x01, step4,
                   b.vc(x10, x01, step3, b.vc(x10, x01, step2, step1))));
}

bool bicat_is_beck_chevalley(const Bicat& b, const BicatLaxSquare& sq) {
  return b.hom(sq.x10, sq.x01)->is_iso(bicat_mate(b, sq));
}

}  // namespace corrcalc
