#pragma once

#include <array>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "corrcalc/common.hpp"

namespace corrcalc {

// Raw description of a finite category, as parsed from fincat-v1 or produced
// by a generator. validate_category turns it into a FinCat or throws.
struct FinCatData {
  std::string name;
  std::vector<std::string> objects;
  struct Mor {
    std::string name;
    std::string src;
    std::string tgt;
  };
  std::vector<Mor> morphisms;
  std::map<std::string, std::string> identities;           // object -> morphism
  std::vector<std::array<std::string, 3>> compose;         // [g, f, g∘f]
};

// A finite strictly presented category: total composition table, canonical
// order = input order, decidable equality everywhere. Immutable after
// validation.
class FinCat {
 public:
  std::size_t num_objects() const { return objects_.size(); }
  std::size_t num_morphisms() const { return mor_name_.size(); }

  const std::string& name() const { return name_; }
  const std::string& object_name(int o) const { return objects_[o]; }
  const std::string& morphism_name(int m) const { return mor_name_[m]; }

  int src(int m) const { return src_[m]; }
  int tgt(int m) const { return tgt_[m]; }
  int identity(int o) const { return identity_[o]; }
  bool is_identity(int m) const { return identity_[src_[m]] == m && src_[m] == tgt_[m]; }

  // g after f; -1 when tgt(f) != src(g).
  int compose(int g, int f) const { return table_[static_cast<std::size_t>(g) * num_morphisms() + f]; }

  int object_index(const std::string& name) const;    // -1 if absent
  int morphism_index(const std::string& name) const;  // -1 if absent

  // Morphisms x -> y in index order.
  std::vector<int> hom(int x, int y) const;
  bool is_iso(int m) const;
  std::optional<int> inverse(int m) const;

  bool operator==(const FinCat& other) const;

  static FinCat validate(const FinCatData& data);

  FinCatData to_data() const;

 private:
  FinCat() = default;

  std::string name_;
  std::vector<std::string> objects_;
  std::vector<std::string> mor_name_;
  std::vector<int> src_, tgt_;
  std::vector<int> identity_;
  std::vector<int32_t> table_;
  std::map<std::string, int> object_lookup_;
  std::map<std::string, int> morphism_lookup_;
};

using CatPtr = std::shared_ptr<const FinCat>;

CatPtr validate_category(const FinCatData& data);

// A functor between finite categories, exact on all structure.
struct FunctorData {
  CatPtr source;
  CatPtr target;
  std::vector<int> ob_map;
  std::vector<int> mor_map;

  int ob(int o) const { return ob_map[o]; }
  int mor(int m) const { return mor_map[m]; }
  bool operator==(const FunctorData& other) const;
};

void validate_functor(const FunctorData& f);
FunctorData identity_functor(const CatPtr& c);
FunctorData compose_functors(const FunctorData& g, const FunctorData& f);
FunctorData constant_functor(const CatPtr& c, const CatPtr& d, int object);
FunctorData opposite_functor(const FunctorData& f);

// A natural transformation with exact naturality squares.
struct NatTransData {
  FunctorData source;
  FunctorData target;
  std::vector<int> component;  // per source-category object, a target-category morphism

  bool operator==(const NatTransData& other) const;
};

void validate_nat(const NatTransData& n);
NatTransData identity_nat(const FunctorData& f);
NatTransData vcompose_nats(const NatTransData& later, const NatTransData& earlier);
// Horizontal composite of s: F => F' (C -> D) with t: G => G' (D -> E).
NatTransData hcompose_nats(const NatTransData& t, const NatTransData& s);
NatTransData whisker_functor_nat(const FunctorData& g, const NatTransData& s);  // g ∘ s
NatTransData whisker_nat_functor(const NatTransData& t, const FunctorData& f);  // t ∘ f
bool nat_is_iso(const NatTransData& n);
std::optional<NatTransData> nat_inverse(const NatTransData& n);

// Finite diagrams and limit cones. Arrows are category morphisms between the
// listed diagram objects.
struct Diagram {
  std::vector<int> objects;
  struct Arrow {
    int from;  // index into objects
    int to;    // index into objects
    int mor;   // morphism of the ambient category
  };
  std::vector<Arrow> arrows;
};

struct Cone {
  int apex = -1;
  std::vector<int> legs;  // per diagram object

  bool operator==(const Cone& other) const = default;
  bool operator<(const Cone& other) const;
};

std::vector<Cone> enumerate_cones(const FinCat& c, const Diagram& d);
bool cone_commutes(const FinCat& c, const Diagram& d, const Cone& cone);
// Mediating morphisms from `from` into the cone `to` over the same diagram.
std::vector<int> cone_mediators(const FinCat& c, const Diagram& d, const Cone& to,
                                const Cone& from);
bool cone_is_terminal(const FinCat& c, const Diagram& d, const Cone& cone);
// Lexicographically least terminal cone, if any.
std::optional<Cone> limit(const FinCat& c, const Diagram& d);

// Canonical pullback of the cospan f: x -> z, g: y -> z. Legs are ordered
// (leg to src f, leg to src g).
std::optional<Cone> pullback(const FinCat& c, int f, int g);
// Canonical pushout of the span f: z -> x, g: z -> y, computed as a pullback
// in the opposite category; legs are (from tgt f, from tgt g, from z).
std::optional<Cone> pushout(const FinCat& c, int f, int g);
std::optional<Cone> product_cone(const FinCat& c, const std::vector<int>& objects);
std::optional<int> terminal_object(const FinCat& c);

struct CommaResult {
  CatPtr cat;
  FunctorData proj_left;   // to the source of F
  FunctorData proj_right;  // to the source of G
  // object i of cat is (left_ob[i], right_ob[i], alpha[i])
  std::vector<int> left_ob, right_ob, alpha;
};

// Comma category F ↓ G for F: E -> D, G: E' -> D.
CommaResult comma(const FunctorData& f, const FunctorData& g, const Caps& caps = {});

struct ProductCatResult {
  CatPtr cat;
  FunctorData proj1, proj2;
  std::vector<std::pair<int, int>> ob_pairs;   // object index -> (o1, o2)
  std::vector<std::pair<int, int>> mor_pairs;  // morphism index -> (m1, m2)
  int ob_of(int o1, int o2) const;
  int mor_of(int m1, int m2) const;
};

ProductCatResult product_category(const CatPtr& a, const CatPtr& b, const Caps& caps = {});

struct FunctorCategoryResult {
  CatPtr cat;
  std::vector<FunctorData> functors;   // object index -> functor
  std::vector<NatTransData> nats;      // morphism index -> transformation
  int object_of(const FunctorData& f) const;
  int morphism_of(const NatTransData& n) const;
};

std::vector<FunctorData> enumerate_functors(const CatPtr& c, const CatPtr& d,
                                            const Caps& caps = {});
// Functors T with q ∘ T = p, for p out of the wanted source and q out of the
// wanted target into the same base.
std::vector<FunctorData> enumerate_functors_over(const FunctorData& p,
                                                 const FunctorData& q,
                                                 const Caps& caps = {});
std::vector<NatTransData> enumerate_nats(const FunctorData& f, const FunctorData& g);
FunctorCategoryResult functor_category(const CatPtr& c, const CatPtr& d,
                                       const Caps& caps = {});

struct EquivalenceReport {
  bool fully_faithful = false;
  bool essentially_surjective = false;
  std::optional<FunctorData> quasi_inverse;
  std::string witness;  // first failing cell when not an equivalence

  bool is_equivalence() const { return fully_faithful && essentially_surjective; }
};

EquivalenceReport is_equivalence(const FunctorData& f);

CatPtr opposite(const CatPtr& c);

struct SubcategoryResult {
  CatPtr cat;
  FunctorData incl;
  std::vector<int> ob_of, mor_of;  // new index -> old index
};

// Full subcategory on the listed objects, names kept.
SubcategoryResult full_subcategory(const CatPtr& c, const std::vector<int>& objects);

// Isomorphism of categories: bijective on objects and morphisms, exact on
// composition. Search is exhaustive.
bool categories_isomorphic(const CatPtr& a, const CatPtr& b);

}  // namespace corrcalc
