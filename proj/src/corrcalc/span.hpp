#pragma once

#include "corrcalc/bicat.hpp"
#include "corrcalc/marked.hpp"

namespace corrcalc {

// A roof x <- k -> y whose wrong-way leg is marked.
struct Span {
  int left_foot = -1;   // x
  int right_foot = -1;  // y
  int kernel = -1;      // k
  int wrong_way = -1;   // p: k -> x, marked
  int right_way = -1;   // q: k -> y

  bool operator==(const Span& other) const = default;
  bool operator<(const Span& other) const;
};

// A kernel map commuting with both legs.
struct SpanMorphism {
  Span source, target;
  int h = -1;  // kernel -> kernel'
};

void validate_span(const MarkedCat& m, const Span& s);
void validate_span_morphism(const MarkedCat& m, const SpanMorphism& sm);

// The walking span: objects s0, s01, s1; p marked.
MarkedCat walking_span();

// All spans x -> y in canonical order.
std::vector<Span> enumerate_spans(const MarkedCat& m, int x, int y);

struct SpanCategoryResult {
  CatPtr cat;
  std::vector<Span> spans;              // object index -> span
  std::vector<SpanMorphism> morphisms;  // morphism index -> kernel map
  int object_of(const Span& s) const;
  int morphism_of(int src_obj, int tgt_obj, int h) const;
};

SpanCategoryResult span_category(const MarkedCat& m, int x, int y,
                                 const Caps& caps = {});

// Composite of s1: x -> y and s2: y -> z through the certified pullback of
// (s2.wrong_way, s1.right_way). Requires the base-change certificate.
Span compose_spans(const MarkedCat& m, const Span& s1, const Span& s2);
Span identity_span(const MarkedCat& m, int x);

// The correspondence bicategory: objects of the base, span categories as
// homs, composition by certified pullbacks, coherence cells the unique
// mediating isomorphisms.
struct CorrResult {
  BicatPtr bicat;
  std::vector<SpanCategoryResult> hom_tables;  // row-major
  MarkedCat base;

  const SpanCategoryResult& table(int x, int y) const {
    return hom_tables[x * bicat->num_objects() + y];
  }
};

CorrResult build_corr(const MarkedCat& m, const Caps& caps = {});

// The inclusion D -> Corr(D): f goes to the span (id, f).
Pseudofunctor corr_inclusion(const CorrResult& corr);

// Restriction to spans whose right-way leg lies in splus. Checks that splus
// is composition-closed and stable under the certified pullbacks.
BicatPtr restrict_corr(const CorrResult& corr, const std::set<int>& splus);

struct ProductSplitReport {
  bool objects_split = false;
  bool homs_split = false;
  std::string witness;
  bool holds() const { return objects_split && homs_split; }
};

// Checks Corr(D1 x D2) decomposes as a product through the projection-induced
// functors, object space and hom categories separately.
ProductSplitReport corr_product_split(const MarkedCat& m1, const MarkedCat& m2,
                                      const Caps& caps = {});

}  // namespace corrcalc
