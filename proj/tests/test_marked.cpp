#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "corrcalc/fixtures.hpp"
#include "corrcalc/marked.hpp"

using namespace corrcalc;

TEST_CASE("validate_marking adds identities and checks closure") {
  auto arrow = fixtures::arrow();
  auto m = validate_marking(arrow, {"a"});
  CHECK(m.marking.size() == 3);
  CHECK(m.marked(arrow->morphism_index("id0")));

  auto all = maximal_marking(arrow);
  CHECK(all.marking.size() == 3);

  auto chain2 = fixtures::chain(2);
  std::set<std::string> bad = {"0->1", "1->2"};
  CHECK_THROWS_AS(validate_marking(chain2, bad), Error);
  try {
    validate_marking(chain2, bad);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotClosed);
    CHECK(e.witness().find("1->2") != std::string::npos);
  }
}

TEST_CASE("has_base_change holds for ARROW marked at a") {
  auto m = validate_marking(fixtures::arrow(), {"a"});
  auto rep = has_base_change(m);
  CHECK(rep.holds);
  // Pullback of a along a has apex 0 with identity legs.
  auto arrow = fixtures::arrow();
  int a = arrow->morphism_index("a");
  const Cone& c = rep.certificate.at({a, a});
  CHECK(c.apex == arrow->object_index("0"));
  CHECK(c.legs[0] == arrow->morphism_index("id0"));
  CHECK(c.legs[1] == arrow->morphism_index("id0"));
}

TEST_CASE("the trivial marking has base change on every fixture") {
  for (auto c : {fixtures::one(), fixtures::arrow(), fixtures::p2(),
                 fixtures::chain(2), fixtures::fin_le(2)}) {
    auto m = trivial_marking(c);
    CHECK(has_base_change(m).holds);
  }
}

TEST_CASE("the maximal marking has base change on complete fixtures") {
  CHECK(has_base_change(maximal_marking(fixtures::p2())).holds);
  CHECK(has_base_change(maximal_marking(fixtures::chain(2))).holds);
  CHECK(has_base_change(maximal_marking(fixtures::one())).holds);
}

TEST_CASE("FS4 fully marked fails base change at the cospan 2 -> 1 <- 3") {
  auto fs4 = fixtures::fin_le(4);
  auto m = maximal_marking(fs4);
  auto rep = has_base_change(m);
  CHECK(!rep.holds);
  REQUIRE(rep.counterexample_pair.has_value());
  auto [f, g] = *rep.counterexample_pair;
  CHECK(fs4->morphism_name(f) == fixtures::fin_map_name(2, 1, {0, 0}));
  CHECK(fs4->morphism_name(g) == fixtures::fin_map_name(3, 1, {0, 0, 0}));
  // The partial certificate still covers earlier cospans.
  CHECK(rep.certificate.count({f, fs4->morphism_index(fixtures::fin_map_name(2, 1, {0, 0}))}) == 1);
}

TEST_CASE("missing-pullback failures are monotone under enlargement") {
  // Enumerate composition-closed markings of small fixtures. A marking that
  // fails because a pullback is missing keeps failing in every enlargement;
  // an unmarked-leg failure need not (see the repair case below).
  for (auto cat : {fixtures::fin_le(2), fixtures::p2()}) {
    std::vector<int> nonids;
    for (int m = 0; m < static_cast<int>(cat->num_morphisms()); ++m)
      if (!cat->is_identity(m)) nonids.push_back(m);
    REQUIRE(nonids.size() <= 12);
    struct Entry {
      std::set<int> marking;
      BaseChangeReport rep;
    };
    std::vector<Entry> closed;
    for (unsigned mask = 0; mask < (1u << nonids.size()); ++mask) {
      std::set<int> s;
      for (std::size_t i = 0; i < nonids.size(); ++i)
        if (mask & (1u << i)) s.insert(nonids[i]);
      try {
        auto m = validate_marking_idx(cat, s);
        closed.push_back({m.marking, has_base_change(m)});
      } catch (const Error&) {
      }
    }
    for (const auto& small : closed) {
      if (small.rep.holds) continue;
      // Re-test the small counterexample pair under each enlargement: a
      // missing pullback stays missing no matter how the marking grows.
      auto [f, g] = *small.rep.counterexample_pair;
      if (!small.rep.missing_pullback) continue;
      for (const auto& big : closed) {
        if (!std::includes(big.marking.begin(), big.marking.end(),
                           small.marking.begin(), small.marking.end()))
          continue;
        CHECK(!big.rep.holds);
      }
      (void)f;
      (void)g;
    }
  }
}

TEST_CASE("an unmarked-leg failure can be repaired by enlargement") {
  auto p2 = fixtures::p2();
  auto small = validate_marking(p2, {"{1}<={12}"});
  auto rep = has_base_change(small);
  CHECK(!rep.holds);
  CHECK(!rep.missing_pullback);
  CHECK(has_base_change(maximal_marking(p2)).holds);
}

TEST_CASE("marked comma over a point picks out marked arrows into it") {
  auto arrow = fixtures::arrow();
  auto m = validate_marking(arrow, {"a"});
  auto one = fixtures::one();
  auto p = constant_functor(one, arrow, arrow->object_index("1"));
  auto res = marked_comma(m, p);
  CHECK(res.cat->num_objects() == 2);
  CHECK(res.cat->num_morphisms() == 3);
  validate_functor(res.proj);
  validate_functor(res.incl);
}

TEST_CASE("marked comma with trivial marking is equivalent to the source") {
  auto p2 = fixtures::p2();
  auto m = trivial_marking(p2);
  auto res = marked_comma(m, identity_functor(p2));
  auto rep = is_equivalence(res.proj);
  CHECK(rep.fully_faithful);
  CHECK(rep.essentially_surjective);
}

TEST_CASE("marked comma of an empty source is empty") {
  FinCatData d;
  d.name = "EMPTY";
  auto empty = validate_category(d);
  auto arrow = fixtures::arrow();
  auto m = validate_marking(arrow, {"a"});
  FunctorData p{empty, arrow, {}, {}};
  auto res = marked_comma(m, p);
  CHECK(res.cat->num_objects() == 0);
}

TEST_CASE("base change exactness of a naturality square") {
  auto arrow = fixtures::arrow();
  auto p2 = fixtures::p2();
  auto m0 = certify_base_change(validate_marking(arrow, {"a"}));
  auto m1 = maximal_marking(p2);

  // F0: a -> ({} <= {1}), F1: a -> ({2} <= {12}), psi the inclusions.
  FunctorData f0{arrow, p2, {p2->object_index("{}"), p2->object_index("{1}")},
                 {p2->morphism_index("{}<={}"), p2->morphism_index("{1}<={1}"),
                  p2->morphism_index("{}<={1}")}};
  FunctorData f1{arrow, p2, {p2->object_index("{2}"), p2->object_index("{12}")},
                 {p2->morphism_index("{2}<={2}"), p2->morphism_index("{12}<={12}"),
                  p2->morphism_index("{2}<={12}")}};
  validate_functor(f0);
  validate_functor(f1);
  NatTransData psi{f0, f1, {p2->morphism_index("{}<={2}"), p2->morphism_index("{1}<={12}")}};
  validate_nat(psi);
  CHECK(is_base_change_exact(m0, m1, psi));

  // Moving F0 to ({} <= {12}) breaks the pullback property.
  FunctorData g0{arrow, p2, {p2->object_index("{}"), p2->object_index("{12}")},
                 {p2->morphism_index("{}<={}"), p2->morphism_index("{12}<={12}"),
                  p2->morphism_index("{}<={12}")}};
  validate_functor(g0);
  NatTransData psi2{g0, f1, {p2->morphism_index("{}<={2}"), p2->morphism_index("{12}<={12}")}};
  validate_nat(psi2);
  CHECK(!is_base_change_exact(m0, m1, psi2));
}

TEST_CASE("identity transformation on a base-change preserving functor is exact") {
  auto p2 = fixtures::p2();
  auto m = certify_base_change(maximal_marking(p2));
  auto idf = identity_functor(p2);
  NatTransData idn = identity_nat(idf);
  CHECK(is_base_change_exact(m, m, idn));
}
