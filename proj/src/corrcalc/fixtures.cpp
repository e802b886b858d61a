#include "corrcalc/fixtures.hpp"

namespace corrcalc::fixtures {

CatPtr one() {
  FinCatData d;
  d.name = "ONE";
  d.objects = {"*"};
  d.morphisms = {{"id*", "*", "*"}};
  d.identities = {{"*", "id*"}};
  d.compose = {{"id*", "id*", "id*"}};
  return validate_category(d);
}

CatPtr arrow() {
  FinCatData d;
  d.name = "ARROW";
  d.objects = {"0", "1"};
  d.morphisms = {{"id0", "0", "0"}, {"id1", "1", "1"}, {"a", "0", "1"}};
  d.identities = {{"0", "id0"}, {"1", "id1"}};
  d.compose = {{"id0", "id0", "id0"}, {"id1", "id1", "id1"}, {"a", "id0", "a"},
               {"id1", "a", "a"}};
  return validate_category(d);
}

CatPtr power_poset(int n) {
  FinCatData d;
  d.name = "P" + std::to_string(n);
  const int count = 1 << n;
  auto setname = [&](int mask) {
    if (mask == 0) return std::string("{}");
    std::string s = "{";
    for (int i = 0; i < n; ++i)
      if (mask & (1 << i)) s += std::to_string(i + 1);
    return s + "}";
  };
  for (int m = 0; m < count; ++m) d.objects.push_back(setname(m));
  auto morname = [&](int a, int b) { return setname(a) + "<=" + setname(b); };
  for (int a = 0; a < count; ++a)
    for (int b = 0; b < count; ++b)
      if ((a & b) == a) d.morphisms.push_back({morname(a, b), setname(a), setname(b)});
  for (int a = 0; a < count; ++a) d.identities[setname(a)] = morname(a, a);
  for (int a = 0; a < count; ++a)
    for (int b = 0; b < count; ++b)
      for (int c = 0; c < count; ++c)
        if ((a & b) == a && (b & c) == b)
          d.compose.push_back({morname(b, c), morname(a, b), morname(a, c)});
  return validate_category(d);
}

CatPtr p2() { return power_poset(2); }

CatPtr chain(int n) {
  FinCatData d;
  d.name = "CHAIN" + std::to_string(n);
  for (int i = 0; i <= n; ++i) d.objects.push_back(std::to_string(i));
  auto morname = [](int a, int b) { return std::to_string(a) + "->" + std::to_string(b); };
  for (int a = 0; a <= n; ++a)
    for (int b = a; b <= n; ++b)
      d.morphisms.push_back({morname(a, b), std::to_string(a), std::to_string(b)});
  for (int a = 0; a <= n; ++a) d.identities[std::to_string(a)] = morname(a, a);
  for (int a = 0; a <= n; ++a)
    for (int b = a; b <= n; ++b)
      for (int c = b; c <= n; ++c)
        d.compose.push_back({morname(b, c), morname(a, b), morname(a, c)});
  return validate_category(d);
}

CatPtr walking_iso() {
  FinCatData d;
  d.name = "ISO";
  d.objects = {"u", "v"};
  d.morphisms = {{"idu", "u", "u"}, {"idv", "v", "v"}, {"i", "u", "v"}, {"j", "v", "u"}};
  d.identities = {{"u", "idu"}, {"v", "idv"}};
  d.compose = {{"idu", "idu", "idu"}, {"idv", "idv", "idv"}, {"i", "idu", "i"},
               {"idv", "i", "i"},     {"j", "idv", "j"},     {"idu", "j", "j"},
               {"j", "i", "idu"},     {"i", "j", "idv"}};
  return validate_category(d);
}

std::string fin_map_name(int k, int m, const std::vector<int>& digits) {
  std::string s = "f[" + std::to_string(k) + ">" + std::to_string(m) + "]";
  for (int v : digits) s += "." + std::to_string(v);
  return s;
}

CatPtr fin_le(int n) {
  FinCatData d;
  d.name = "FS" + std::to_string(n);
  for (int k = 0; k <= n; ++k) d.objects.push_back(std::to_string(k));

  // All functions k -> m enumerated by their digit tuples, lexicographically.
  auto maps_of = [](int k, int m) {
    std::vector<std::vector<int>> out;
    if (k == 0) {
      out.push_back({});
      return out;
    }
    if (m == 0) return out;
    std::vector<int> cur(k, 0);
    while (true) {
      out.push_back(cur);
      int i = k - 1;
      while (i >= 0 && cur[i] == m - 1) cur[i--] = 0;
      if (i < 0) break;
      ++cur[i];
    }
    return out;
  };

  for (int k = 0; k <= n; ++k)
    for (int m = 0; m <= n; ++m)
      for (const auto& digits : maps_of(k, m))
        d.morphisms.push_back(
            {fin_map_name(k, m, digits), std::to_string(k), std::to_string(m)});
  for (int k = 0; k <= n; ++k) {
    std::vector<int> idd(k);
    for (int i = 0; i < k; ++i) idd[i] = i;
    d.identities[std::to_string(k)] = fin_map_name(k, k, idd);
  }
  for (int k = 0; k <= n; ++k)
    for (int m = 0; m <= n; ++m)
      for (const auto& f : maps_of(k, m))
        for (int p = 0; p <= n; ++p)
          for (const auto& g : maps_of(m, p)) {
            std::vector<int> gf(k);
            for (int i = 0; i < k; ++i) gf[i] = g[f[i]];
            d.compose.push_back({fin_map_name(m, p, g), fin_map_name(k, m, f),
                                 fin_map_name(k, p, gf)});
          }
  return validate_category(d);
}

}  // namespace corrcalc::fixtures
