#pragma once

#include <array>
#include <functional>
#include <map>

#include "corrcalc/fincat.hpp"

namespace corrcalc {

// Horizontal composition data for one object triple (x, y, z).
struct HComp {
  std::vector<std::vector<int>> ob;   // [g][f] -> 1-cell of hom(x,z)
  std::vector<std::vector<int>> mor;  // [gcell][fcell] -> 2-cell of hom(x,z)
};

// Finite bicategory with fully explicit data: hom categories, horizontal
// composition tables, and associator / unitor 2-cells. Nothing is
// strictified; strictness is checkable, never assumed.
class Bicat {
 public:
  std::vector<std::string> objects;
  std::vector<CatPtr> homs;  // row-major (x, y)
  std::vector<int> unit;     // per object: object of hom(x,x)
  std::vector<HComp> hcomps; // per (x, y, z), index ((x*n)+y)*n+z
  // associator[(x,y,z,w)][h][g][f]: 2-cell (h∘g)∘f => h∘(g∘f) in hom(x,w)
  std::map<std::array<int, 4>, std::vector<std::vector<std::vector<int>>>> associator;
  std::vector<std::vector<int>> lunitor;  // per (x,y), per f: id_y ∘ f => f
  std::vector<std::vector<int>> runitor;  // per (x,y), per f: f ∘ id_x => f

  int num_objects() const { return static_cast<int>(objects.size()); }
  const CatPtr& hom(int x, int y) const { return homs[x * num_objects() + y]; }
  const HComp& hcomp(int x, int y, int z) const {
    return hcomps[(x * num_objects() + y) * num_objects() + z];
  }

  // 1-cell composition g∘f for f in hom(x,y), g in hom(y,z).
  int comp1(int x, int y, int z, int g, int f) const { return hcomp(x, y, z).ob[g][f]; }
  // Horizontal composite of 2-cells.
  int comp2(int x, int y, int z, int gcell, int fcell) const {
    return hcomp(x, y, z).mor[gcell][fcell];
  }
  // Whiskering: 1-cell g after 2-cell s (s in hom(x,y), g in hom(y,z)).
  int wl(int x, int y, int z, int g, int s) const {
    return comp2(x, y, z, id2(y, z, g), s);
  }
  // Whiskering: 2-cell s (in hom(y,z)) after 1-cell f.
  int wr(int x, int y, int z, int s, int f) const {
    return comp2(x, y, z, s, id2(x, y, f));
  }
  // Vertical composition in hom(x,y): later ∘ earlier.
  int vc(int x, int y, int later, int earlier) const;
  int id2(int x, int y, int f) const { return hom(x, y)->identity(f); }
  std::optional<int> inv2(int x, int y, int s) const { return hom(x, y)->inverse(s); }
  int inv2_or_throw(int x, int y, int s) const;

  int assoc(int x, int y, int z, int w, int h, int g, int f) const {
    return associator.at({x, y, z, w})[h][g][f];
  }
  int assoc_inv(int x, int y, int z, int w, int h, int g, int f) const {
    return inv2_or_throw(x, w, assoc(x, y, z, w, h, g, f));
  }
  int lu(int x, int y, int f) const { return lunitor[x * num_objects() + y][f]; }
  int ru(int x, int y, int f) const { return runitor[x * num_objects() + y][f]; }
  int lu_inv(int x, int y, int f) const { return inv2_or_throw(x, y, lu(x, y, f)); }
  int ru_inv(int x, int y, int f) const { return inv2_or_throw(x, y, ru(x, y, f)); }

  bool strictly_associative() const;
};

using BicatPtr = std::shared_ptr<const Bicat>;

// Assembles a Bicat from callbacks and runs no validation.
struct BicatBuilder {
  std::vector<std::string> objects;
  std::vector<CatPtr> homs;
  std::vector<int> unit;
  std::function<int(int, int, int, int, int)> ob_comp;   // x,y,z,g,f
  std::function<int(int, int, int, int, int)> mor_comp;  // x,y,z,gcell,fcell
  std::function<int(int, int, int, int, int, int, int)> assoc_cell;  // x,y,z,w,h,g,f
  std::function<int(int, int, int)> lu_cell, ru_cell;    // x,y,f

  BicatPtr build() const;
};

// Exhaustive validation: functoriality of horizontal composition, boundaries,
// invertibility and naturality of the coherence cells, pentagon for every
// composable quadruple, triangle for every composable pair.
void validate_bicat(const Bicat& b);

// A category viewed as a bicategory with discrete hom categories; 1-cell
// index = morphism index of c.
BicatPtr locally_discrete(const CatPtr& c);

// Finite slice of the 2-category of categories: objects are the given
// categories, hom(C, D) the functor category. Strict.
struct CatUniverseResult {
  BicatPtr bicat;
  std::vector<CatPtr> cats;
  std::vector<FunctorCategoryResult> hom_tables;  // row-major

  const FunctorCategoryResult& table(int x, int y) const {
    return hom_tables[x * static_cast<int>(cats.size()) + y];
  }
  int object_of(const CatPtr& c) const;
};

CatUniverseResult cat_universe(const std::vector<CatPtr>& cats, const Caps& caps = {});

// Subcategory specification: objects, 1-cells per hom, 2-cells per hom.
struct Specification2 {
  std::vector<int> s0;
  std::map<std::pair<int, int>, std::vector<int>> s1;
  std::map<std::pair<int, int>, std::vector<int>> s2;
};

BicatPtr sub_bicat_by_spec(const BicatPtr& b, const Specification2& s);

// All objects and 1-cells, invertible 2-cells only.
Specification2 two_one_core_spec(const Bicat& b);

// Underlying 1-category. If horizontal composition is strict on 1-cells the
// cell names are kept; otherwise 1-cells are quotiented by 2-isomorphism with
// least representatives.
struct Core1Result {
  CatPtr cat;
  bool strict = false;
  std::vector<std::array<int, 3>> cells;  // morphism -> (x, y, representative 1-cell)
};
Core1Result core1(const BicatPtr& b);

BicatPtr op1(const BicatPtr& b);
BicatPtr op2(const BicatPtr& b);

bool bicats_equal(const Bicat& a, const Bicat& b);

// Weak functor between bicategories with invertible compositor / unitor
// coherence cells.
struct Pseudofunctor {
  BicatPtr source, target;
  std::vector<int> ob_map;
  std::vector<FunctorData> hom_functor;  // per (x,y) row-major
  // compositor[(x,y,z)][g][f]: F(g)∘F(f) => F(g∘f) in hom(Fx,Fz)
  std::map<std::array<int, 3>, std::vector<std::vector<int>>> compositor;
  std::vector<int> unitor;  // per x: id_{Fx} => F(id_x)

  const FunctorData& hf(int x, int y) const {
    return hom_functor[x * static_cast<int>(ob_map.size()) + y];
  }
  int fob(int x) const { return ob_map[x]; }
  int f1(int x, int y, int f) const { return hf(x, y).ob_map[f]; }
  int f2(int x, int y, int s) const { return hf(x, y).mor_map[s]; }
  int comp_cell(int x, int y, int z, int g, int f) const {
    return compositor.at({x, y, z})[g][f];
  }
};

void validate_pseudofunctor(const Pseudofunctor& p);
Pseudofunctor identity_pseudofunctor(const BicatPtr& b);
Pseudofunctor compose_pseudofunctors(const Pseudofunctor& g, const Pseudofunctor& f);

// Pseudonatural transformation with invertible naturality cells.
struct PseudoTransformation {
  std::vector<int> component;              // per object x: 1-cell F x -> G x
  std::map<std::array<int, 3>, int> cell;  // (x,y,f) -> G(f)∘comp_x => comp_y∘F(f)

  int comp(int x) const { return component[x]; }
  int cell_at(int x, int y, int f) const { return cell.at({x, y, f}); }
};

void validate_pseudotransformation(const Pseudofunctor& f, const Pseudofunctor& g,
                                   const PseudoTransformation& t);
// When invertible_components_only is set, components are restricted to
// internal equivalences; enumeration stops after max_results hits.
std::vector<PseudoTransformation> enumerate_pseudotransformations(
    const Pseudofunctor& f, const Pseudofunctor& g, bool invertible_components_only,
    std::size_t max_results = SIZE_MAX);
bool pseudofunctors_isomorphic(const Pseudofunctor& f, const Pseudofunctor& g);

// Adjunction internal to a bicategory.
struct BicatAdjunction {
  int x = -1, y = -1;
  int left = -1;    // 1-cell x -> y
  int right = -1;   // 1-cell y -> x
  int unit = -1;    // id_x => right∘left
  int counit = -1;  // left∘right => id_y
};

bool bicat_triangle_identities(const Bicat& b, const BicatAdjunction& adj);
std::optional<BicatAdjunction> find_right_adjoint_1cell(const Bicat& b, int x, int y,
                                                        int left);
// Canonical comparison 2-cell a.right => c.right between two adjunctions of
// the same left 1-cell; always invertible.
int right_adjoint_comparison_cell(const Bicat& b, const BicatAdjunction& a,
                                  const BicatAdjunction& c);

// Lax square in a bicategory; the vertical 1-cells carry the adjunctions.
//
//   x00 --top--> x01
//    |    <=      |
//  left        right
//    v            v
//   x10 --bot--> x11
struct BicatLaxSquare {
  int x00, x01, x10, x11;
  int top;
  int bot;
  BicatAdjunction left_adj;
  BicatAdjunction right_adj;
  int filler;  // 2-cell right∘top => bot∘left in hom(x00, x11)
};

void validate_lax_square(const Bicat& b, const BicatLaxSquare& sq);
// Conjugate 2-cell top∘left.right => right.right∘bot in hom(x10, x01).
int bicat_mate(const Bicat& b, const BicatLaxSquare& sq);
// The other adjunct ordering; agrees with bicat_mate by coherence (tested).
int bicat_mate_route2(const Bicat& b, const BicatLaxSquare& sq);
bool bicat_is_beck_chevalley(const Bicat& b, const BicatLaxSquare& sq);

}  // namespace corrcalc
