#pragma once

#include <map>
#include <set>

#include "corrcalc/fincat.hpp"

namespace corrcalc {

// Chosen pullback of a marked morphism along an arbitrary one, keyed by
// (marked f, g with the same target). The cone stores legs in the order
// (to src f, to src g, to the common target); the leg to src g is the
// pullback of f along g and must itself be marked.
using BaseChangeCertificate = std::map<std::pair<int, int>, Cone>;

// A category with a composition-closed, identity-containing morphism class.
struct MarkedCat {
  CatPtr cat;
  std::set<int> marking;
  std::optional<BaseChangeCertificate> certificate;

  bool marked(int m) const { return marking.count(m) > 0; }
  const Cone& chosen_pullback(int marked_f, int g) const;
};

// Verifies closure; identities are added, anything else missing is an error.
MarkedCat validate_marking(const CatPtr& c, const std::set<std::string>& names);
MarkedCat validate_marking_idx(const CatPtr& c, const std::set<int>& marking);

MarkedCat maximal_marking(const CatPtr& c);
// All isomorphisms; this marking always has base change.
MarkedCat trivial_marking(const CatPtr& c);

struct BaseChangeReport {
  bool holds = false;
  BaseChangeCertificate certificate;  // partial when holds is false
  std::string counterexample;         // first failing (f, g) in canonical order
  std::optional<std::pair<int, int>> counterexample_pair;
  // True when the failure is a missing pullback; failures of this kind are
  // never repaired by enlarging the marking. An unmarked-leg failure can be.
  bool missing_pullback = false;
};

// For every marked f and every g with the same target, computes the canonical
// pullback; holds iff all exist with marked pulled-back legs. Scans in
// canonical order and stops at the first failure.
BaseChangeReport has_base_change(const MarkedCat& m);
// Same, but stores the certificate into the returned copy on success.
MarkedCat certify_base_change(const MarkedCat& m);

// Dual condition: pushouts of marked maps exist with marked pushed-out legs.
// The certificate cones live in the opposite category (indices shared).
BaseChangeReport has_collar_change(const MarkedCat& m);

struct MarkedCommaResult {
  CatPtr cat;           // D#E
  FunctorData proj;     // to D, (e, f: x -> pe) -> x
  FunctorData incl;     // E -> D#E, e -> (e, id_pe)
  // object i is (ob_e[i], roofmor[i]: roof_src[i] -> p(ob_e[i]))
  std::vector<int> ob_e, roof;
};

// Marked comma category D#E of p: E -> D: objects are pairs (e, marked
// f: x -> pe), morphisms are squares with unrestricted top edge.
MarkedCommaResult marked_comma(const MarkedCat& m, const FunctorData& p,
                               const Caps& caps = {});

// Checks that f preserves the marking and the certified base-change squares.
void require_marked_functor(const MarkedCat& d0, const MarkedCat& d1,
                            const FunctorData& f);

// True iff every marked morphism's naturality square is a pullback in the
// target. Both functors must be marked and base-change preserving.
bool is_base_change_exact(const MarkedCat& d0, const MarkedCat& d1,
                          const NatTransData& psi);

}  // namespace corrcalc
