#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "corrcalc/adjoint.hpp"
#include "corrcalc/fixtures.hpp"

using namespace corrcalc;

namespace {

Adjunction identity_adjunction(const CatPtr& c) {
  Adjunction adj;
  adj.left = identity_functor(c);
  adj.right = identity_functor(c);
  adj.unit = identity_nat(adj.left);
  adj.counit = identity_nat(adj.left);
  return adj;
}

}  // namespace

TEST_CASE("identity adjunction passes the triangle identities") {
  for (auto c : {fixtures::one(), fixtures::arrow(), fixtures::p2()}) {
    auto adj = identity_adjunction(c);
    CHECK(check_triangle_identities(adj));
  }
}

TEST_CASE("find_right_adjoint of ! : ARROW -> ONE picks the terminal object") {
  auto arrow = fixtures::arrow();
  auto one = fixtures::one();
  auto bang = constant_functor(arrow, one, 0);
  auto res = find_right_adjoint(bang);
  REQUIRE(res.adjunction.has_value());
  const auto& adj = *res.adjunction;
  CHECK(adj.right.ob_map[0] == arrow->object_index("1"));
  CHECK(adj.unit.component[arrow->object_index("0")] == arrow->morphism_index("a"));
  CHECK(adj.unit.component[arrow->object_index("1")] == arrow->morphism_index("id1"));
  CHECK(check_triangle_identities(adj));
}

TEST_CASE("find_right_adjoint of the identity is the identity adjunction") {
  auto p2 = fixtures::p2();
  auto res = find_right_adjoint(identity_functor(p2));
  REQUIRE(res.adjunction.has_value());
  CHECK(res.adjunction->right.ob_map == identity_functor(p2).ob_map);
}

TEST_CASE("const_0 : ONE -> ARROW is left adjoint to !") {
  auto arrow = fixtures::arrow();
  auto one = fixtures::one();
  auto c0 = constant_functor(one, arrow, arrow->object_index("0"));
  auto res = find_right_adjoint(c0);
  REQUIRE(res.adjunction.has_value());
  // Right adjoint is the unique functor ARROW -> ONE; counit at 1 is a.
  CHECK(res.adjunction->right.ob_map == std::vector<int>{0, 0});
  CHECK(res.adjunction->counit.component[arrow->object_index("1")] ==
        arrow->morphism_index("a"));
  CHECK(check_triangle_identities(*res.adjunction));
}

TEST_CASE("find_right_adjoint fails when some comma has no terminal object") {
  auto arrow = fixtures::arrow();
  auto one = fixtures::one();
  // const_1 : ONE -> ARROW has no right adjoint: the comma over 0 is empty.
  auto c1 = constant_functor(one, arrow, arrow->object_index("1"));
  auto res = find_right_adjoint(c1);
  CHECK(!res.adjunction.has_value());
  CHECK(res.missing_at == "0");
}

TEST_CASE("a corrupted unit component fails the triangle check with a witness") {
  auto arrow = fixtures::arrow();
  auto one = fixtures::one();
  auto bang = constant_functor(arrow, one, 0);
  auto adj = *find_right_adjoint(bang).adjunction;
  // A boundary-wrong corruption is caught by validation.
  Adjunction bad = adj;
  bad.unit.component[arrow->object_index("0")] = arrow->morphism_index("id0");
  CHECK_THROWS_AS(validate_nat(bad.unit), Error);
  // A boundary-correct corruption: swap the FS2 identity adjunction unit at 2.
  // The checker works on raw components and names the offending object.
  auto fs2 = fixtures::fin_le(2);
  auto idfs = identity_adjunction(fs2);
  int swap = fs2->morphism_index(fixtures::fin_map_name(2, 2, {1, 0}));
  REQUIRE(swap >= 0);
  Adjunction bad3 = idfs;
  bad3.unit.component[fs2->object_index("2")] = swap;
  std::string witness;
  CHECK(!check_triangle_identities(bad3, &witness));
  CHECK(witness.find("2") != std::string::npos);
  (void)one;
}

TEST_CASE("adjunctions exchange under opposite") {
  auto arrow = fixtures::arrow();
  auto one = fixtures::one();
  for (const auto& f : {constant_functor(arrow, one, 0),
                        constant_functor(one, arrow, arrow->object_index("0")),
                        identity_functor(arrow)}) {
    auto direct = find_right_adjoint(f);
    auto viaop = find_left_adjoint(opposite_functor(f));
    CHECK(direct.adjunction.has_value() == viaop.adjunction.has_value());
    if (direct.adjunction) {
      // The transported left adjoint has the same object map.
      CHECK(viaop.adjunction->left.ob_map == direct.adjunction->right.ob_map);
    }
  }
}

TEST_CASE("right adjoints are unique up to canonical natural isomorphism") {
  auto arrow = fixtures::arrow();
  auto one = fixtures::one();
  auto bang = constant_functor(arrow, one, 0);
  auto a1 = *find_right_adjoint(bang).adjunction;
  auto a2 = *find_right_adjoint(bang).adjunction;
  auto cmp = right_adjoint_comparison(a1, a2);
  CHECK(nat_is_iso(cmp));
}

TEST_CASE("mate of an identity square is the identity") {
  auto p2 = fixtures::p2();
  CatLaxSquare sq;
  sq.top = identity_functor(p2);
  sq.bot = identity_functor(p2);
  sq.left_adj = identity_adjunction(p2);
  sq.right_adj = identity_adjunction(p2);
  sq.filler = identity_nat(identity_functor(p2));
  auto m = mate(sq);
  CHECK(m.component == identity_nat(identity_functor(p2)).component);
  CHECK(is_beck_chevalley(sq));
}

TEST_CASE("mate with identity horizontals returns the filler") {
  // Square with g = gbar = identity adjunction: the mate is the filler
  // transported by unit/counit, which the triangle identities collapse.
  auto arrow = fixtures::arrow();
  auto funcat = functor_category(arrow, arrow);
  // Take top = bot = id, verticals = identity adjunctions, filler any
  // natural endo-transformation of id; the only one is the identity.
  CatLaxSquare sq;
  sq.top = identity_functor(arrow);
  sq.bot = identity_functor(arrow);
  sq.left_adj = identity_adjunction(arrow);
  sq.right_adj = identity_adjunction(arrow);
  sq.filler = identity_nat(identity_functor(arrow));
  CHECK(mate(sq).component == sq.filler.component);
  (void)funcat;
}

TEST_CASE("Beck-Chevalley holds for the P2 self-indexing pullback square") {
  // Slice functors of P2 along the square {} <= {1} <= {12}, {} <= {2} <= {12}
  // are modelled by the meet maps of the poset: for a poset, the slice
  // pseudofunctor sends x to the downset of x, and pullback along u <= v is
  // the meet. Downsets of P2 are chains; encode them as chain categories.
  auto p2 = fixtures::p2();
  // Downset categories: down({1}) = chain(1), down({2}) = chain(1),
  // down({}) = chain(0) = ONE, down({12}) = P2 itself.
  auto d_top = p2;
  auto d1 = fixtures::chain(1);   // objects 0 = {}, 1 = {1}
  auto d2 = fixtures::chain(1);   // objects 0 = {}, 1 = {2}
  auto dbot = fixtures::one();

  // Pullback (meet) functors between downsets for the cospan
  // {1} <= {12} >= {2}:
  // f* : down({12}) -> down({1}) sends s to s∧{1}.
  FunctorData meet1{d_top, d1, {}, {}};
  meet1.ob_map = {0, 1, 0, 1};  // {}->{}, {1}->{1}, {2}->{}, {12}->{1}
  meet1.mor_map.resize(p2->num_morphisms());
  for (int m = 0; m < static_cast<int>(p2->num_morphisms()); ++m) {
    int s = meet1.ob_map[p2->src(m)], t = meet1.ob_map[p2->tgt(m)];
    meet1.mor_map[m] = d1->morphism_index(std::to_string(s) + "->" + std::to_string(t));
  }
  validate_functor(meet1);
  FunctorData meet2{d_top, d2, {}, {}};
  meet2.ob_map = {0, 0, 1, 1};
  meet2.mor_map.resize(p2->num_morphisms());
  for (int m = 0; m < static_cast<int>(p2->num_morphisms()); ++m) {
    int s = meet2.ob_map[p2->src(m)], t = meet2.ob_map[p2->tgt(m)];
    meet2.mor_map[m] = d2->morphism_index(std::to_string(s) + "->" + std::to_string(t));
  }
  validate_functor(meet2);
  // Meets down to down({}) = ONE.
  auto tov1 = constant_functor(d1, dbot, 0);
  auto tov2 = constant_functor(d2, dbot, 0);

  // Verticals: meet2 (left, down({12}) -> down({2})) and tov1 (right).
  // Square: top = meet1, bot has to make a commuting square of right
  // adjoints... the verticals both have right adjoints by completeness.
  auto left_adj = find_right_adjoint(meet2);
  auto right_adj = find_right_adjoint(tov1);
  REQUIRE(left_adj.adjunction.has_value());
  REQUIRE(right_adj.adjunction.has_value());

  CatLaxSquare sq;
  sq.top = meet1;
  sq.bot = tov2;
  sq.left_adj = *left_adj.adjunction;
  sq.right_adj = *right_adj.adjunction;
  // tov1 ∘ meet1 == tov2 ∘ meet2 strictly; identity filler.
  auto composite = compose_functors(tov1, meet1);
  CHECK(composite.ob_map == compose_functors(tov2, meet2).ob_map);
  sq.filler = identity_nat(composite);
  sq.filler.source = compose_functors(tov1, meet1);
  sq.filler.target = compose_functors(tov2, meet2);
  CHECK(is_beck_chevalley(sq));
}

TEST_CASE("Beck-Chevalley fails for a non-pullback square") {
  // Slice square of the commuting square ({}; {1}, {12}; {12}) in P2, whose
  // true pullback apex is {1}, not {}. Slices are modelled by downsets:
  // P2/{} = ONE, P2/{1} = chain(1), P2/{12} = P2.
  auto p2 = fixtures::p2();
  auto d1 = fixtures::chain(1);
  auto one = fixtures::one();

  // top: P2/{} -> P2/{1}, postcompose with {} <= {1}.
  auto top = constant_functor(one, d1, 0);
  // left vertical: P2/{} -> P2/{12}, postcompose with {} <= {12}.
  auto left = constant_functor(one, p2, p2->object_index("{}"));
  // bottom: identity on P2/{12}.
  auto bot = identity_functor(p2);
  // right vertical: P2/{1} -> P2/{12}, inclusion of the downset.
  FunctorData right{d1, p2, {p2->object_index("{}"), p2->object_index("{1}")}, {}};
  right.mor_map = {p2->morphism_index("{}<={}"), p2->morphism_index("{}<={1}"),
                   p2->morphism_index("{1}<={1}")};
  validate_functor(right);

  auto left_adj = find_right_adjoint(left);
  auto right_adj = find_right_adjoint(right);
  REQUIRE(left_adj.adjunction.has_value());
  REQUIRE(right_adj.adjunction.has_value());

  CatLaxSquare sq;
  sq.top = top;
  sq.bot = bot;
  sq.left_adj = *left_adj.adjunction;
  sq.right_adj = *right_adj.adjunction;
  auto composite = compose_functors(right, top);  // constant at {}
  CHECK(composite.ob_map == compose_functors(bot, left).ob_map);
  sq.filler = identity_nat(composite);
  sq.filler.source = composite;
  sq.filler.target = compose_functors(bot, left);
  auto m = mate(sq);
  // The component at {1} is the non-invertible inclusion {} <= {1}.
  CHECK(m.component[p2->object_index("{1}")] == p2->morphism_index("{}<={1}"));
  CHECK(!is_beck_chevalley(sq));
}

namespace {

Adjunction compose_adjunctions_cat(const Adjunction& inner, const Adjunction& outer) {
  Adjunction out;
  out.left = compose_functors(outer.left, inner.left);
  out.right = compose_functors(inner.right, outer.right);
  out.unit.source = identity_functor(inner.left.source);
  out.unit.target = compose_functors(out.right, out.left);
  const FinCat& c = *inner.left.source;
  out.unit.component.resize(c.num_objects());
  for (int x = 0; x < static_cast<int>(c.num_objects()); ++x)
    out.unit.component[x] =
        c.compose(inner.right.mor_map[outer.unit.component[inner.left.ob_map[x]]],
                  inner.unit.component[x]);
  out.counit.source = compose_functors(out.left, out.right);
  out.counit.target = identity_functor(outer.left.target);
  const FinCat& d = *outer.left.target;
  out.counit.component.resize(d.num_objects());
  for (int y = 0; y < static_cast<int>(d.num_objects()); ++y)
    out.counit.component[y] =
        d.compose(outer.counit.component[y],
                  outer.left.mor_map[inner.counit.component[outer.right.ob_map[y]]]);
  validate_nat(out.unit);
  validate_nat(out.counit);
  return out;
}

}  // namespace

TEST_CASE("mate of a vertically pasted square is the paste of mates") {
  // Stack the passing P2 downset square on a collapse square below it.
  auto p2 = fixtures::p2();
  auto d1 = fixtures::chain(1);
  auto d2 = fixtures::chain(1);
  auto one = fixtures::one();

  FunctorData meet1{p2, d1, {0, 1, 0, 1}, {}};
  meet1.mor_map.resize(p2->num_morphisms());
  for (int m = 0; m < static_cast<int>(p2->num_morphisms()); ++m)
    meet1.mor_map[m] =
        d1->morphism_index(std::to_string(meet1.ob_map[p2->src(m)]) + "->" +
                           std::to_string(meet1.ob_map[p2->tgt(m)]));
  validate_functor(meet1);
  FunctorData meet2{p2, d2, {0, 0, 1, 1}, {}};
  meet2.mor_map.resize(p2->num_morphisms());
  for (int m = 0; m < static_cast<int>(p2->num_morphisms()); ++m)
    meet2.mor_map[m] =
        d2->morphism_index(std::to_string(meet2.ob_map[p2->src(m)]) + "->" +
                           std::to_string(meet2.ob_map[p2->tgt(m)]));
  validate_functor(meet2);
  auto tov1 = constant_functor(d1, one, 0);
  auto tov2 = constant_functor(d2, one, 0);

  CatLaxSquare upper;
  upper.top = meet1;
  upper.bot = tov2;
  upper.left_adj = *find_right_adjoint(meet2).adjunction;
  upper.right_adj = *find_right_adjoint(tov1).adjunction;
  auto comp_upper = compose_functors(tov1, meet1);
  upper.filler = identity_nat(comp_upper);
  upper.filler.source = comp_upper;
  upper.filler.target = compose_functors(tov2, meet2);

  CatLaxSquare lower;
  lower.top = tov2;
  lower.bot = identity_functor(one);
  lower.left_adj = *find_right_adjoint(tov2).adjunction;
  {
    Adjunction idadj;
    idadj.left = identity_functor(one);
    idadj.right = identity_functor(one);
    idadj.unit = identity_nat(idadj.left);
    idadj.counit = identity_nat(idadj.left);
    lower.right_adj = idadj;
  }
  lower.filler = identity_nat(tov2);
  lower.filler.source = compose_functors(lower.right_adj.left, lower.top);
  lower.filler.target = compose_functors(lower.bot, lower.left_adj.left);

  CatLaxSquare pasted;
  pasted.top = upper.top;
  pasted.bot = lower.bot;
  pasted.left_adj = compose_adjunctions_cat(upper.left_adj, lower.left_adj);
  pasted.right_adj = compose_adjunctions_cat(upper.right_adj, lower.right_adj);
  CHECK(check_triangle_identities(pasted.left_adj));
  CHECK(check_triangle_identities(pasted.right_adj));
  // filler: (lower ⊲ leftA) ∘ (rightB ⊳ upper)
  auto part1 = whisker_functor_nat(lower.right_adj.left, upper.filler);
  auto part2 = whisker_nat_functor(lower.filler, upper.left_adj.left);
  pasted.filler = vcompose_nats(part2, part1);
  pasted.filler.source = compose_functors(pasted.right_adj.left, pasted.top);
  pasted.filler.target = compose_functors(pasted.bot, pasted.left_adj.left);
  validate_nat(pasted.filler);

  auto mate_upper = mate(upper);
  auto mate_lower = mate(lower);
  auto mate_pasted = mate(pasted);
  // paste of mates: (rA^R ⊳ mateB) ∘ (mateA ⊲ lB^R)
  auto paste = vcompose_nats(whisker_functor_nat(upper.right_adj.right, mate_lower),
                             whisker_nat_functor(mate_upper, lower.left_adj.right));
  CHECK(mate_pasted.component == paste.component);
}
