#pragma once

#include "corrcalc/fincat.hpp"

namespace corrcalc {

// Unit/counit presentation of an adjunction left ⊣ right between functors.
struct Adjunction {
  FunctorData left;    // L: C -> D
  FunctorData right;   // R: D -> C
  NatTransData unit;   // id_C => RL
  NatTransData counit; // LR => id_D
};

// Componentwise evaluation of (εL)∘(Le) = id_L and (Rε)∘(eR) = id_R.
bool check_triangle_identities(const Adjunction& adj, std::string* witness = nullptr);

struct AdjointSearchResult {
  std::optional<Adjunction> adjunction;
  std::string missing_at;  // object of D with no terminal comma object
};

// Terminal-object search in each comma F ↓ d; assembles R, unit, counit and
// validates the triangle identities before returning.
AdjointSearchResult find_right_adjoint(const FunctorData& f, const Caps& caps = {});
// Dual, computed through opposites.
AdjointSearchResult find_left_adjoint(const FunctorData& f, const Caps& caps = {});

// A lax square of functors
//
//   c00 --top--> c01
//    |    <=      |
//  left         right
//    v            v
//   c10 --bot--> c11
//
// with filler: right∘top => bot∘left and adjunctions for the two verticals.
struct CatLaxSquare {
  FunctorData top, bot;
  Adjunction left_adj;   // for the left vertical
  Adjunction right_adj;  // for the right vertical
  NatTransData filler;
};

// The conjugate 2-cell top∘left_R => right_R∘bot induced by the filler and
// the vertical adjunctions.
NatTransData mate(const CatLaxSquare& sq);

bool is_beck_chevalley(const CatLaxSquare& sq);

// Canonical comparison between two right adjoints of the same functor.
NatTransData right_adjoint_comparison(const Adjunction& a, const Adjunction& b);

}  // namespace corrcalc
