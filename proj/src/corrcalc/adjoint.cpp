#include "corrcalc/adjoint.hpp"

namespace corrcalc {

bool check_triangle_identities(const Adjunction& adj, std::string* witness) {
  const FinCat& c = *adj.left.source;
  const FinCat& d = *adj.left.target;
  for (int x = 0; x < static_cast<int>(c.num_objects()); ++x) {
    int lhs = d.compose(adj.counit.component[adj.left.ob_map[x]],
                        adj.left.mor_map[adj.unit.component[x]]);
    if (lhs != d.identity(adj.left.ob_map[x])) {
      if (witness) *witness = "left triangle at " + c.object_name(x);
      return false;
    }
  }
  for (int y = 0; y < static_cast<int>(d.num_objects()); ++y) {
    int lhs = c.compose(adj.right.mor_map[adj.counit.component[y]],
                        adj.unit.component[adj.right.ob_map[y]]);
    if (lhs != c.identity(adj.right.ob_map[y])) {
      if (witness) *witness = "right triangle at " + d.object_name(y);
      return false;
    }
  }
  return true;
}

AdjointSearchResult find_right_adjoint(const FunctorData& f, const Caps& caps) {
  AdjointSearchResult res;
  const FinCat& c = *f.source;
  const FinCat& d = *f.target;

  // Terminal object of F ↓ d, scanned in canonical (object, arrow) order.
  auto terminal_comma = [&](int dob) -> std::optional<std::pair<int, int>> {
    std::vector<std::pair<int, int>> obs;  // (c, alpha: Fc -> d)
    for (int a = 0; a < static_cast<int>(c.num_objects()); ++a)
      for (int al : d.hom(f.ob_map[a], dob)) obs.push_back({a, al});
    for (const auto& [ct, alt] : obs) {
      bool terminal = true;
      for (const auto& [a, al] : obs) {
        int count = 0;
        for (int u : c.hom(a, ct))
          if (d.compose(alt, f.mor_map[u]) == al) ++count;
        if (count != 1) {
          terminal = false;
          break;
        }
      }
      if (terminal) return std::make_pair(ct, alt);
    }
    return std::nullopt;
  };

  FunctorData r;
  r.source = f.target;
  r.target = f.source;
  r.ob_map.resize(d.num_objects());
  std::vector<int> counit_comp(d.num_objects());
  for (int dob = 0; dob < static_cast<int>(d.num_objects()); ++dob) {
    auto t = terminal_comma(dob);
    if (!t) {
      res.missing_at = d.object_name(dob);
      return res;
    }
    r.ob_map[dob] = t->first;
    counit_comp[dob] = t->second;
  }
  r.mor_map.resize(d.num_morphisms());
  for (int g = 0; g < static_cast<int>(d.num_morphisms()); ++g) {
    int s = d.src(g), t = d.tgt(g);
    int needed = d.compose(g, counit_comp[s]);
    int found = -1;
    for (int u : c.hom(r.ob_map[s], r.ob_map[t]))
      if (d.compose(counit_comp[t], f.mor_map[u]) == needed) {
        found = u;
        break;
      }
    r.mor_map[g] = found;
  }
  validate_functor(r);

  Adjunction adj;
  adj.left = f;
  adj.right = r;
  adj.counit.source = compose_functors(f, r);
  adj.counit.target = identity_functor(f.target);
  adj.counit.component = counit_comp;
  validate_nat(adj.counit);

  adj.unit.source = identity_functor(f.source);
  adj.unit.target = compose_functors(r, f);
  adj.unit.component.resize(c.num_objects());
  for (int a = 0; a < static_cast<int>(c.num_objects()); ++a) {
    int found = -1;
    for (int u : c.hom(a, r.ob_map[f.ob_map[a]]))
      if (d.compose(counit_comp[f.ob_map[a]], f.mor_map[u]) ==
          d.identity(f.ob_map[a])) {
        found = u;
        break;
      }
    adj.unit.component[a] = found;
  }
  validate_nat(adj.unit);

  std::string witness;
  if (!check_triangle_identities(adj, &witness))
    throw Error(ErrorCode::CoherenceFailure,
                "assembled adjunction fails a triangle identity: " + witness, witness);
  (void)caps;
  res.adjunction = std::move(adj);
  return res;
}

AdjointSearchResult find_left_adjoint(const FunctorData& f, const Caps& caps) {
  auto op = find_right_adjoint(opposite_functor(f), caps);
  AdjointSearchResult res;
  if (!op.adjunction) {
    res.missing_at = op.missing_at;
    return res;
  }
  const Adjunction& a = *op.adjunction;
  Adjunction out;
  out.left = opposite_functor(a.right);  // L: D -> C
  out.right = f;                         // R = F
  out.left.source = f.target;
  out.left.target = f.source;
  // unit id_D => F L has the counit components of the opposite adjunction.
  out.unit.source = identity_functor(f.target);
  out.unit.target = compose_functors(f, out.left);
  out.unit.component = a.counit.component;
  // counit L F => id_C has the unit components.
  out.counit.source = compose_functors(out.left, f);
  out.counit.target = identity_functor(f.source);
  out.counit.component = a.unit.component;
  validate_nat(out.unit);
  validate_nat(out.counit);
  std::string witness;
  if (!check_triangle_identities(out, &witness))
    throw Error(ErrorCode::CoherenceFailure,
                "transported adjunction fails a triangle identity: " + witness, witness);
  res.adjunction = std::move(out);
  return res;
}

NatTransData mate(const CatLaxSquare& sq) {
  const FunctorData& top = sq.top;
  const FunctorData& bot = sq.bot;
  const FunctorData& gl_right = sq.left_adj.right;   // ḡ^!: c10 -> c00
  const FunctorData& g_right = sq.right_adj.right;   // g^!: c11 -> c01

  // top∘ḡ^! => g^! g_! top ḡ^! => g^! bot ḡ_! ḡ^! => g^! bot
  NatTransData step1 = whisker_nat_functor(sq.right_adj.unit,
                                           compose_functors(top, gl_right));
  NatTransData step2 =
      whisker_functor_nat(g_right, whisker_nat_functor(sq.filler, gl_right));
  NatTransData step3 =
      whisker_functor_nat(compose_functors(g_right, bot), sq.left_adj.counit);
  NatTransData out = vcompose_nats(step3, vcompose_nats(step2, step1));
  out.source = compose_functors(top, gl_right);
  out.target = compose_functors(g_right, bot);
  validate_nat(out);
  return out;
}

bool is_beck_chevalley(const CatLaxSquare& sq) { return nat_is_iso(mate(sq)); }

NatTransData right_adjoint_comparison(const Adjunction& a, const Adjunction& b) {
  // R_a => R_b: at d, R_b(ε^a_d) ∘ e^b_{R_a d}.
  const FinCat& c = *a.right.target;
  NatTransData out;
  out.source = a.right;
  out.target = b.right;
  out.component.resize(a.right.ob_map.size());
  for (std::size_t d = 0; d < out.component.size(); ++d)
    out.component[d] = c.compose(b.right.mor_map[a.counit.component[d]],
                                 b.unit.component[a.right.ob_map[d]]);
  validate_nat(out);
  return out;
}

}  // namespace corrcalc
