#pragma once

#include "corrcalc/adjoint.hpp"
#include "corrcalc/fib.hpp"
#include "corrcalc/span.hpp"

namespace corrcalc {

// Verdict for a pseudofunctor out of the locally discrete base: a validated
// right adjoint for every marked 1-cell, and an invertible conjugate for
// every certified pullback square.
struct BivariantReport {
  Pseudofunctor h;
  MarkedCat base;  // certified
  std::map<int, BicatAdjunction> adjoints;            // marked f -> adjunction
  std::map<std::pair<int, int>, bool> square_verdicts;
  bool ok = false;
  std::string failure;
};

// The source of h must be the locally discrete bicategory of m.cat; m must
// have base change.
BivariantReport check_bivariant(const Pseudofunctor& h, const MarkedCat& m);

// 1-cell index of a base morphism inside the locally discrete hom category.
int discrete_one_cell(const FinCat& base, int f);

// True iff every marked naturality square of the transformation is
// Beck-Chevalley; both functors need passing reports.
bool check_bivariant_transformation(const BivariantReport& h1,
                                    const BivariantReport& h2,
                                    const PseudoTransformation& phi);

// Cat-valued variant, used where the target is the category universe.
struct CatBivariantCheck {
  bool ok = false;
  std::string failure;
  std::map<int, Adjunction> adjoints;
};
CatBivariantCheck check_bivariant_cat(const CatPseudofunctor& h, const MarkedCat& m);

// The same fibres and transitions read as a contravariant family over the
// opposite base.
CatPseudofunctor op1_view(const CatPseudofunctor& h);

// Dual checker: marked transitions admit left adjoints and every pushout
// square of a marked map has an invertible left conjugate.
CatBivariantCheck check_left_bivariant_collar_cat(const CatPseudofunctor& h,
                                                  const MarkedCat& m);

// The 2-cell-reversed reading: right adjoints reread as left adjoints with
// unit and counit exchanged; the exchanged data is revalidated directly.
CatBivariantCheck check_op2_dual_cat(const CatPseudofunctor& h, const MarkedCat& m);

// Symmetric characterization of twisted fibrations: Cartesian over arrows
// that are isomorphisms in one factor, with base change between the two
// classes. Compared against the four-condition checker on fixtures.
bool twisted_symmetric_form(const FunctorData& p, const ProductCatResult& base,
                            const MarkedCat& mc, const MarkedCat& md);

// Embedding of a category-valued functor into a finite category universe.
struct EmbeddedBivariant {
  CatUniverseResult universe;
  Pseudofunctor h;
};
EmbeddedBivariant embed_in_cat_universe(const CatPseudofunctor& h, const Caps& caps = {});

// Hom action of the span extension: spans to q_! ∘ p^!, span morphisms to
// the adjunct-of-counit composite.
struct LocalRep {
  int x = -1;
  std::vector<FunctorData> at;  // per y: corr hom category -> K hom category
};

LocalRep local_representation(const BivariantReport& rep, const CorrResult& corr,
                              int x);

// Span extension: object part h, hom parts the local representations,
// compositors the Beck-Chevalley mates of the composition pullback squares.
Pseudofunctor spex(const BivariantReport& rep, const CorrResult& corr);

struct IntertwineReport {
  bool holds = false;
  std::string counterexample;
};

// The square comparing span composition with composition in the target.
IntertwineReport check_composition_intertwine(const BivariantReport& rep,
                                              const CorrResult& corr,
                                              const Pseudofunctor& spexed, int x, int y,
                                              int z);

// Representable Corr(x, -) as a category-valued functor on the base.
CatPseudofunctor representable_corr(const CorrResult& corr, int x);

struct YonedaReport {
  bool holds = false;
  int transformation_count = 0;
  EquivalenceReport evaluation;
  std::string failure;
};

// Enumerates bivariant transformations Corr(x,-) => F, forms their category
// with modifications, and checks evaluation at the identity span is an
// equivalence onto F(x).
YonedaReport yoneda_check(const CorrResult& corr, const CatPseudofunctor& f, int x,
                          const Caps& caps = {});

struct UniversalityReport {
  bool holds = false;
  std::size_t corr_classes = 0;
  std::size_t bivariant_classes = 0;
  bool injective = false, surjective = false;
  std::vector<std::pair<std::size_t, std::size_t>> witness;  // corr class -> biv class
  std::string failure;
};

// Enumerates pseudofunctors Corr_D -> K and bivariant functors D -> K up to
// isomorphism and checks restriction along the inclusion is a bijection on
// classes. Exhaustive; sized for tiny fixtures only.
UniversalityReport universality_check(const CorrResult& corr, const BicatPtr& k,
                                      const Caps& caps = {});

std::vector<Pseudofunctor> enumerate_pseudofunctors(const BicatPtr& src,
                                                    const BicatPtr& tgt,
                                                    const Caps& caps = {},
                                                    std::size_t max_results = SIZE_MAX);

struct PowerCatResult {
  CatPtr cat;
  int arity = 0;
  // mixed-radix tuple indexing
  int ob_of(const std::vector<int>& tuple) const;
  int mor_of(const std::vector<int>& tuple) const;
  std::vector<int> ob_tuple(int ob) const;
  std::vector<int> mor_tuple(int mor) const;
  int base_obs = 0, base_mors = 0;
};

PowerCatResult power_category(const CatPtr& c, int arity, const Caps& caps = {});

struct CartesianMonoidalReport {
  CatPtr base;             // skeletal finite sets up to n, opposite
  CatPseudofunctor power;  // I -> C^I with reindexing transitions
  bool adjoints_ok = false;
  bool product_formula_ok = false;
  std::string witness;
  BaseChangeReport base_change;  // of the maximal marking on the base
  std::map<int, Adjunction> adjoints;
};

// Reindexing functors on powers of C with right adjoints matched against the
// product formula; the base-change verdict of the fully marked base is part
// of the report (truncation can lose pushouts).
CartesianMonoidalReport cartesian_monoidal(const CatPtr& c, int n,
                                           const Caps& caps = {});

// Zigzag identities for the evaluation / coevaluation spans of X.
bool self_duality_check(const MarkedCat& m, int x);

}  // namespace corrcalc
