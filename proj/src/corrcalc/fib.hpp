#pragma once

#include "corrcalc/marked.hpp"

namespace corrcalc {

// A functor into a base with materialized (co)Cartesian lift certificates.
// Certificates are the canonical least choices found by search.
struct Fibration {
  CatPtr total, base;
  FunctorData proj;
  std::set<int> cart_over;    // base morphisms with certified Cartesian lifts
  std::set<int> cocart_over;  // base morphisms with certified co-Cartesian lifts
  // (base morphism f, total object e over tgt f) -> lift ending at e
  std::map<std::pair<int, int>, int> cart_lifts;
  // (base morphism f, total object e over src f) -> lift starting at e
  std::map<std::pair<int, int>, int> cocart_lifts;

  int cart_lift(int f, int e) const { return cart_lifts.at({f, e}); }
  int cocart_lift(int f, int e) const { return cocart_lifts.at({f, e}); }
};

// Universal property of a Cartesian lift, checked by enumeration.
bool is_cartesian_lift(const FunctorData& p, int phi, int f);
bool is_cocartesian_lift(const FunctorData& p, int phi, int f);

struct FibrationCheck {
  std::optional<Fibration> fibration;
  std::string failure;  // names the first missing lift
  std::optional<std::pair<int, int>> failure_at;  // (f, e)
};

// Searches lifts for every required (f, e); canonical least certificates.
FibrationCheck check_fibration(const FunctorData& proj, const std::set<int>& cart_over,
                               const std::set<int>& cocart_over);

// Category-valued weak functor on a base category. Covariant transitions go
// along arrows, contravariant ones against them; the compositor of a
// contravariant functor has shape F(f)∘F(g) => F(g∘f).
struct CatPseudofunctor {
  CatPtr base;
  bool contravariant = false;
  std::vector<CatPtr> fibre;
  std::vector<FunctorData> transition;
  std::map<std::pair<int, int>, NatTransData> compositor;  // key (g, f) composable
  std::vector<NatTransData> unitor;  // per object: id => F(id_d)

  const NatTransData& comp_at(int g, int f) const { return compositor.at({g, f}); }
};

void validate_cat_pseudofunctor(const CatPseudofunctor& p);
// Strict functor family with identity coherence cells; validated.
CatPseudofunctor strict_cat_functor(const CatPtr& base, bool contravariant,
                                    std::vector<CatPtr> fibres,
                                    std::vector<FunctorData> transitions);
CatPseudofunctor constant_cat_functor(const CatPtr& base, const CatPtr& value);

// Pseudonatural transformation of category-valued functors with the same
// variance over the same base.
struct CatPseudoTransformation {
  std::vector<FunctorData> component;  // per object: fibre_F(d) -> fibre_G(d)
  std::vector<NatTransData> cell;      // per base morphism, see validate
};

void validate_cat_pseudotransformation(const CatPseudofunctor& f,
                                       const CatPseudofunctor& g,
                                       const CatPseudoTransformation& t);
bool cat_pseudofunctors_isomorphic(const CatPseudofunctor& f, const CatPseudofunctor& g);

// Total category of pairs (d, x in F d); co-Cartesian lifts certified for the
// covariant case, Cartesian for the contravariant one.
Fibration grothendieck(const CatPseudofunctor& f, const Caps& caps = {});

// Inverse: fibres and certified-lift transport.
CatPseudofunctor fibre_transport(const Fibration& p, bool contravariant);

// Fibred comparison: an equivalence over the base preserving certified lifts.
bool fibrations_equivalent(const Fibration& a, const Fibration& b);

struct FreenessReport {
  bool free = false;
  std::string witness;
};

struct FreeCartesianResult {
  Fibration fibration;
  FunctorData incl;  // E -> D#E
  FreenessReport freeness;
};

// Free S-Cartesian fibration on p: E -> D via the marked comma category.
// Freeness is verified against the supplied family of S-Cartesian fibrations.
FreeCartesianResult free_cartesian(const MarkedCat& m, const FunctorData& p,
                                   const std::vector<Fibration>& test_family,
                                   const Caps& caps = {});

struct BaseChangeFibReport {
  bool holds = false;
  std::string counterexample;
};

// Beck-Chevalley condition over every certified base pullback square, by the
// factorization construction of the comparison map.
BaseChangeFibReport check_bicartesian_base_change(const Fibration& p,
                                                  const MarkedCat& m);

struct FreeBicartesianResult {
  Fibration fibration;
  FunctorData incl;  // E -> (D#E) ↓ D
  BaseChangeFibReport base_change;
};

// Free co-Cartesian fibration on the free Cartesian fibration.
FreeBicartesianResult free_bicartesian(const MarkedCat& m, const FunctorData& p,
                                       const Caps& caps = {});

struct TwistedReport {
  bool holds = false;
  int failing_condition = 0;  // 1..4 when holds is false
  std::string witness;
};

// Conditions i)-iv) for a twisted bi-Cartesian fibration over a product.
TwistedReport check_twisted_bicartesian(const FunctorData& p,
                                        const ProductCatResult& base,
                                        const MarkedCat& mc, const MarkedCat& md);

// Strict contravariant family of marked categories over an index category.
struct MarkedFamily {
  CatPtr index;
  std::vector<MarkedCat> fibre;          // certified
  std::vector<FunctorData> transition;   // per index morphism u: fibre[tgt u] -> fibre[src u]
};

struct IntegralMarkingResult {
  MarkedCat total;                        // certified; union-of-fibres marking
  FunctorData proj;                       // to index^op
  std::vector<std::pair<int, int>> obs;   // total object -> (i, x)
};

// Contravariant Grothendieck total with the fibrewise-union marking; base
// change of the union marking is verified, not assumed.
IntegralMarkingResult integral_marking(const MarkedFamily& family,
                                       const Caps& caps = {});

}  // namespace corrcalc
