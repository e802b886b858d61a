#pragma once

#include "corrcalc/fincat.hpp"

namespace corrcalc::fixtures {

// Terminal category: one object *, one morphism.
CatPtr one();

// Walking arrow: objects 0, 1; morphisms id0, id1, a: 0 -> 1.
CatPtr arrow();

// Inclusion poset of subsets of {1,...,n}; p2() is the n = 2 square.
CatPtr power_poset(int n);
CatPtr p2();

// Linear poset 0 -> 1 -> ... -> n.
CatPtr chain(int n);

// Two objects u, v with mutually inverse arrows between them.
CatPtr walking_iso();

// Skeleton of finite sets of size <= n: objects "0".."n", morphisms all
// functions f[k->m]#i where i encodes the graph in base m.
CatPtr fin_le(int n);

// Names used by fin_le: function k -> m with digits (f(0), ..., f(k-1)).
std::string fin_map_name(int k, int m, const std::vector<int>& digits);

}  // namespace corrcalc::fixtures
