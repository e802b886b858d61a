#include "corrcalc/json_io.hpp"

#include <json.hpp>

namespace corrcalc {

using nlohmann::json;

namespace {

json parse_or_throw(const std::string& text) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) throw Error(ErrorCode::BadInput, "malformed JSON");
  return j;
}

void reject_unknown_keys(const json& j, const std::set<std::string>& allowed,
                         const std::string& what) {
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!allowed.count(it.key()))
      throw Error(ErrorCode::BadInput, "unknown key \"" + it.key() + "\" in " + what,
                  it.key());
}

FinCatData fincat_from_json(const json& j, const std::string& name) {
  if (!j.is_object()) throw Error(ErrorCode::BadInput, "category must be an object");
  reject_unknown_keys(j, {"objects", "morphisms", "identities", "compose", "marked"},
                      "fincat-v1");
  FinCatData d;
  d.name = name;
  for (const auto& o : j.at("objects")) d.objects.push_back(o.get<std::string>());
  for (const auto& m : j.at("morphisms")) {
    reject_unknown_keys(m, {"name", "src", "tgt"}, "morphism");
    d.morphisms.push_back({m.at("name").get<std::string>(),
                           m.at("src").get<std::string>(),
                           m.at("tgt").get<std::string>()});
  }
  for (auto it = j.at("identities").begin(); it != j.at("identities").end(); ++it)
    d.identities[it.key()] = it.value().get<std::string>();
  for (const auto& t : j.at("compose")) {
    if (!t.is_array() || t.size() != 3)
      throw Error(ErrorCode::BadInput, "compose entries are [g, f, gf] triples");
    d.compose.push_back({t[0].get<std::string>(), t[1].get<std::string>(),
                         t[2].get<std::string>()});
  }
  return d;
}

std::set<std::string> marked_names(const json& j) {
  std::set<std::string> out;
  if (j.contains("marked"))
    for (const auto& m : j.at("marked")) out.insert(m.get<std::string>());
  return out;
}

}  // namespace

FinCatData parse_fincat_v1(const std::string& text, const std::string& name) {
  return fincat_from_json(parse_or_throw(text), name);
}

MarkedCat parse_marked_category(const std::string& text, const std::string& name) {
  json j = parse_or_throw(text);
  auto cat = validate_category(fincat_from_json(j, name));
  return validate_marking(cat, marked_names(j));
}

std::string fincat_v1_to_json(const FinCat& c, const std::set<int>* marking) {
  json j;
  j["objects"] = json::array();
  for (std::size_t o = 0; o < c.num_objects(); ++o)
    j["objects"].push_back(c.object_name(static_cast<int>(o)));
  j["morphisms"] = json::array();
  for (int m = 0; m < static_cast<int>(c.num_morphisms()); ++m)
    j["morphisms"].push_back({{"name", c.morphism_name(m)},
                              {"src", c.object_name(c.src(m))},
                              {"tgt", c.object_name(c.tgt(m))}});
  j["identities"] = json::object();
  for (std::size_t o = 0; o < c.num_objects(); ++o)
    j["identities"][c.object_name(static_cast<int>(o))] =
        c.morphism_name(c.identity(static_cast<int>(o)));
  j["compose"] = json::array();
  for (int g = 0; g < static_cast<int>(c.num_morphisms()); ++g)
    for (int f = 0; f < static_cast<int>(c.num_morphisms()); ++f)
      if (c.compose(g, f) >= 0)
        j["compose"].push_back({c.morphism_name(g), c.morphism_name(f),
                                c.morphism_name(c.compose(g, f))});
  if (marking) {
    j["marked"] = json::array();
    for (int m : *marking) j["marked"].push_back(c.morphism_name(m));
  }
  return j.dump(2);
}

FunctorData parse_functor(const std::string& text) {
  json j = parse_or_throw(text);
  reject_unknown_keys(j, {"source", "target", "ob_map", "mor_map"}, "functor");
  FunctorData f;
  f.source = validate_category(fincat_from_json(j.at("source"), "source"));
  f.target = validate_category(fincat_from_json(j.at("target"), "target"));
  f.ob_map.assign(f.source->num_objects(), -1);
  for (auto it = j.at("ob_map").begin(); it != j.at("ob_map").end(); ++it) {
    int o = f.source->object_index(it.key());
    int v = f.target->object_index(it.value().get<std::string>());
    if (o < 0 || v < 0)
      throw Error(ErrorCode::BadInput, "ob_map names unknown object", it.key());
    f.ob_map[o] = v;
  }
  f.mor_map.assign(f.source->num_morphisms(), -1);
  for (auto it = j.at("mor_map").begin(); it != j.at("mor_map").end(); ++it) {
    int m = f.source->morphism_index(it.key());
    int v = f.target->morphism_index(it.value().get<std::string>());
    if (m < 0 || v < 0)
      throw Error(ErrorCode::BadInput, "mor_map names unknown morphism", it.key());
    f.mor_map[m] = v;
  }
  for (int o : f.ob_map)
    if (o < 0) throw Error(ErrorCode::BadInput, "ob_map is not total");
  for (int m : f.mor_map)
    if (m < 0) throw Error(ErrorCode::BadInput, "mor_map is not total");
  validate_functor(f);
  return f;
}

std::string functor_to_json(const FunctorData& f) {
  json j;
  j["source"] = json::parse(fincat_v1_to_json(*f.source));
  j["target"] = json::parse(fincat_v1_to_json(*f.target));
  j["ob_map"] = json::object();
  for (std::size_t o = 0; o < f.ob_map.size(); ++o)
    j["ob_map"][f.source->object_name(static_cast<int>(o))] =
        f.target->object_name(f.ob_map[o]);
  j["mor_map"] = json::object();
  for (std::size_t m = 0; m < f.mor_map.size(); ++m)
    j["mor_map"][f.source->morphism_name(static_cast<int>(m))] =
        f.target->morphism_name(f.mor_map[m]);
  return j.dump(2);
}

CatPseudofunctor parse_cat_family(const std::string& text) {
  json j = parse_or_throw(text);
  reject_unknown_keys(j, {"base", "contravariant", "fibres", "transitions"},
                      "functor family");
  auto base = validate_category(fincat_from_json(j.at("base"), "base"));
  bool contravariant = j.value("contravariant", false);
  std::vector<CatPtr> fibres(base->num_objects());
  for (auto it = j.at("fibres").begin(); it != j.at("fibres").end(); ++it) {
    int o = base->object_index(it.key());
    if (o < 0) throw Error(ErrorCode::BadInput, "fibre names unknown object", it.key());
    fibres[o] = validate_category(fincat_from_json(it.value(), "fibre:" + it.key()));
  }
  for (const auto& f : fibres)
    if (!f) throw Error(ErrorCode::BadInput, "missing fibre");
  std::vector<FunctorData> trans(base->num_morphisms());
  for (auto it = j.at("transitions").begin(); it != j.at("transitions").end(); ++it) {
    int m = base->morphism_index(it.key());
    if (m < 0)
      throw Error(ErrorCode::BadInput, "transition names unknown morphism", it.key());
    int s = contravariant ? base->tgt(m) : base->src(m);
    int t = contravariant ? base->src(m) : base->tgt(m);
    FunctorData f;
    f.source = fibres[s];
    f.target = fibres[t];
    const json& spec = it.value();
    reject_unknown_keys(spec, {"ob_map", "mor_map"}, "transition");
    f.ob_map.assign(f.source->num_objects(), -1);
    for (auto o = spec.at("ob_map").begin(); o != spec.at("ob_map").end(); ++o)
      f.ob_map[f.source->object_index(o.key())] =
          f.target->object_index(o.value().get<std::string>());
    f.mor_map.assign(f.source->num_morphisms(), -1);
    for (auto o = spec.at("mor_map").begin(); o != spec.at("mor_map").end(); ++o)
      f.mor_map[f.source->morphism_index(o.key())] =
          f.target->morphism_index(o.value().get<std::string>());
    validate_functor(f);
    trans[m] = f;
  }
  return strict_cat_functor(base, contravariant, fibres, trans);
}

std::string bicat_v1_to_json(const Bicat& b) {
  json j;
  j["objects"] = b.objects;
  j["homs"] = json::array();
  const int n = b.num_objects();
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      j["homs"].push_back({{"src", b.objects[x]},
                           {"tgt", b.objects[y]},
                           {"cat", json::parse(fincat_v1_to_json(*b.hom(x, y)))}});
  j["units"] = json::object();
  for (int x = 0; x < n; ++x)
    j["units"][b.objects[x]] = b.hom(x, x)->object_name(b.unit[x]);
  j["hcomp"] = json::array();
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      for (int z = 0; z < n; ++z) {
        json entry;
        entry["x"] = b.objects[x];
        entry["y"] = b.objects[y];
        entry["z"] = b.objects[z];
        entry["ob"] = json::array();
        const HComp& t = b.hcomp(x, y, z);
        for (std::size_t g = 0; g < t.ob.size(); ++g)
          for (std::size_t f = 0; f < t.ob[g].size(); ++f)
            entry["ob"].push_back({b.hom(y, z)->object_name(static_cast<int>(g)),
                                   b.hom(x, y)->object_name(static_cast<int>(f)),
                                   b.hom(x, z)->object_name(t.ob[g][f])});
        entry["mor"] = json::array();
        for (std::size_t g = 0; g < t.mor.size(); ++g)
          for (std::size_t f = 0; f < t.mor[g].size(); ++f)
            entry["mor"].push_back({b.hom(y, z)->morphism_name(static_cast<int>(g)),
                                    b.hom(x, y)->morphism_name(static_cast<int>(f)),
                                    b.hom(x, z)->morphism_name(t.mor[g][f])});
        j["hcomp"].push_back(entry);
      }
  j["associators"] = json::array();
  for (const auto& [key, table] : b.associator) {
    auto [x, y, z, w] = key;
    for (std::size_t h = 0; h < table.size(); ++h)
      for (std::size_t g = 0; g < table[h].size(); ++g)
        for (std::size_t f = 0; f < table[h][g].size(); ++f)
          j["associators"].push_back(
              {{"x", b.objects[x]},
               {"y", b.objects[y]},
               {"z", b.objects[z]},
               {"w", b.objects[w]},
               {"h", b.hom(z, w)->object_name(static_cast<int>(h))},
               {"g", b.hom(y, z)->object_name(static_cast<int>(g))},
               {"f", b.hom(x, y)->object_name(static_cast<int>(f))},
               {"cell", b.hom(x, w)->morphism_name(table[h][g][f])}});
  }
  j["lunitors"] = json::array();
  j["runitors"] = json::array();
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      for (int f = 0; f < static_cast<int>(b.hom(x, y)->num_objects()); ++f) {
        j["lunitors"].push_back({{"x", b.objects[x]},
                                 {"y", b.objects[y]},
                                 {"f", b.hom(x, y)->object_name(f)},
                                 {"cell", b.hom(x, y)->morphism_name(b.lu(x, y, f))}});
        j["runitors"].push_back({{"x", b.objects[x]},
                                 {"y", b.objects[y]},
                                 {"f", b.hom(x, y)->object_name(f)},
                                 {"cell", b.hom(x, y)->morphism_name(b.ru(x, y, f))}});
      }
  return j.dump(2);
}

BicatPtr parse_bicat_v1(const std::string& text) {
  json j = parse_or_throw(text);
  reject_unknown_keys(
      j, {"objects", "homs", "units", "hcomp", "associators", "lunitors", "runitors"},
      "bicat-v1");
  auto b = std::make_shared<Bicat>();
  for (const auto& o : j.at("objects")) b->objects.push_back(o.get<std::string>());
  const int n = b->num_objects();
  auto obidx = [&](const std::string& name) {
    for (int i = 0; i < n; ++i)
      if (b->objects[i] == name) return i;
    throw Error(ErrorCode::BadInput, "unknown bicategory object " + name, name);
  };
  b->homs.resize(static_cast<std::size_t>(n) * n);
  for (const auto& hom : j.at("homs")) {
    int x = obidx(hom.at("src").get<std::string>());
    int y = obidx(hom.at("tgt").get<std::string>());
    b->homs[x * n + y] = validate_category(fincat_from_json(
        hom.at("cat"), "hom(" + b->objects[x] + "," + b->objects[y] + ")"));
  }
  for (const auto& h : b->homs)
    if (!h) throw Error(ErrorCode::BadInput, "missing hom category");
  b->unit.resize(n);
  for (int x = 0; x < n; ++x)
    b->unit[x] =
        b->hom(x, x)->object_index(j.at("units").at(b->objects[x]).get<std::string>());
  b->hcomps.resize(static_cast<std::size_t>(n) * n * n);
  for (const auto& entry : j.at("hcomp")) {
    int x = obidx(entry.at("x").get<std::string>());
    int y = obidx(entry.at("y").get<std::string>());
    int z = obidx(entry.at("z").get<std::string>());
    HComp& t = b->hcomps[(x * n + y) * n + z];
    t.ob.assign(b->hom(y, z)->num_objects(),
                std::vector<int>(b->hom(x, y)->num_objects(), -1));
    t.mor.assign(b->hom(y, z)->num_morphisms(),
                 std::vector<int>(b->hom(x, y)->num_morphisms(), -1));
    for (const auto& row : entry.at("ob"))
      t.ob[b->hom(y, z)->object_index(row[0].get<std::string>())]
          [b->hom(x, y)->object_index(row[1].get<std::string>())] =
              b->hom(x, z)->object_index(row[2].get<std::string>());
    for (const auto& row : entry.at("mor"))
      t.mor[b->hom(y, z)->morphism_index(row[0].get<std::string>())]
          [b->hom(x, y)->morphism_index(row[1].get<std::string>())] =
              b->hom(x, z)->morphism_index(row[2].get<std::string>());
  }
  for (const auto& cell : j.at("associators")) {
    int x = obidx(cell.at("x").get<std::string>());
    int y = obidx(cell.at("y").get<std::string>());
    int z = obidx(cell.at("z").get<std::string>());
    int w = obidx(cell.at("w").get<std::string>());
    auto& table = b->associator[{x, y, z, w}];
    if (table.empty())
      table.assign(b->hom(z, w)->num_objects(),
                   std::vector<std::vector<int>>(
                       b->hom(y, z)->num_objects(),
                       std::vector<int>(b->hom(x, y)->num_objects(), -1)));
    table[b->hom(z, w)->object_index(cell.at("h").get<std::string>())]
         [b->hom(y, z)->object_index(cell.at("g").get<std::string>())]
         [b->hom(x, y)->object_index(cell.at("f").get<std::string>())] =
             b->hom(x, w)->morphism_index(cell.at("cell").get<std::string>());
  }
  b->lunitor.resize(static_cast<std::size_t>(n) * n);
  b->runitor.resize(static_cast<std::size_t>(n) * n);
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) {
      b->lunitor[x * n + y].assign(b->hom(x, y)->num_objects(), -1);
      b->runitor[x * n + y].assign(b->hom(x, y)->num_objects(), -1);
    }
  for (const auto& cell : j.at("lunitors")) {
    int x = obidx(cell.at("x").get<std::string>());
    int y = obidx(cell.at("y").get<std::string>());
    b->lunitor[x * n + y][b->hom(x, y)->object_index(cell.at("f").get<std::string>())] =
        b->hom(x, y)->morphism_index(cell.at("cell").get<std::string>());
  }
  for (const auto& cell : j.at("runitors")) {
    int x = obidx(cell.at("x").get<std::string>());
    int y = obidx(cell.at("y").get<std::string>());
    b->runitor[x * n + y][b->hom(x, y)->object_index(cell.at("f").get<std::string>())] =
        b->hom(x, y)->morphism_index(cell.at("cell").get<std::string>());
  }
  validate_bicat(*b);
  return b;
}

std::string fibration_to_json(const Fibration& f) {
  json j;
  j["total"] = json::parse(fincat_v1_to_json(*f.total));
  j["base"] = json::parse(fincat_v1_to_json(*f.base));
  j["proj"] = json::object();
  for (std::size_t o = 0; o < f.proj.ob_map.size(); ++o)
    j["proj"]["ob_map"][f.total->object_name(static_cast<int>(o))] =
        f.base->object_name(f.proj.ob_map[o]);
  for (std::size_t m = 0; m < f.proj.mor_map.size(); ++m)
    j["proj"]["mor_map"][f.total->morphism_name(static_cast<int>(m))] =
        f.base->morphism_name(f.proj.mor_map[m]);
  j["cart_lifts"] = json::array();
  for (const auto& [key, lift] : f.cart_lifts)
    j["cart_lifts"].push_back({{"over", f.base->morphism_name(key.first)},
                               {"at", f.total->object_name(key.second)},
                               {"lift", f.total->morphism_name(lift)}});
  j["cocart_lifts"] = json::array();
  for (const auto& [key, lift] : f.cocart_lifts)
    j["cocart_lifts"].push_back({{"over", f.base->morphism_name(key.first)},
                                 {"at", f.total->object_name(key.second)},
                                 {"lift", f.total->morphism_name(lift)}});
  return j.dump(2);
}

namespace {

std::string dot_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  return out;
}

}  // namespace

std::string category_to_dot(const FinCat& c, const std::set<int>* marking) {
  std::string out = "digraph category {\n";
  for (std::size_t o = 0; o < c.num_objects(); ++o)
    out += "  n" + std::to_string(o) + " [label=\"" +
           dot_escape(c.object_name(static_cast<int>(o))) + "\"];\n";
  for (int m = 0; m < static_cast<int>(c.num_morphisms()); ++m) {
    if (c.is_identity(m)) continue;
    out += "  n" + std::to_string(c.src(m)) + " -> n" + std::to_string(c.tgt(m)) +
           " [label=\"" + dot_escape(c.morphism_name(m)) + "\"";
    if (marking && marking->count(m)) out += " style=bold";
    out += "];\n";
  }
  out += "}\n";
  return out;
}

std::string span_to_dot(const MarkedCat& m, const Span& s) {
  const FinCat& c = *m.cat;
  std::string out = "digraph span {\n";
  out += "  { rank=min; kernel; }\n";
  out += "  kernel [label=\"" + dot_escape(c.object_name(s.kernel)) + "\"];\n";
  out += "  left [label=\"" + dot_escape(c.object_name(s.left_foot)) + "\"];\n";
  out += "  right [label=\"" + dot_escape(c.object_name(s.right_foot)) + "\"];\n";
  out += "  kernel -> left [label=\"" + dot_escape(c.morphism_name(s.wrong_way)) +
         "\" style=bold];\n";
  out += "  kernel -> right [label=\"" + dot_escape(c.morphism_name(s.right_way)) +
         "\"];\n";
  out += "}\n";
  return out;
}

std::string bicat_skeleton_to_dot(const Bicat& b) {
  std::string out = "digraph skeleton {\n";
  for (int x = 0; x < b.num_objects(); ++x)
    out += "  n" + std::to_string(x) + " [label=\"" + dot_escape(b.objects[x]) + "\"];\n";
  for (int x = 0; x < b.num_objects(); ++x)
    for (int y = 0; y < b.num_objects(); ++y)
      for (int f = 0; f < static_cast<int>(b.hom(x, y)->num_objects()); ++f) {
        if (x == y && f == b.unit[x]) continue;
        out += "  n" + std::to_string(x) + " -> n" + std::to_string(y) + " [label=\"" +
               dot_escape(b.hom(x, y)->object_name(f)) + "\"];\n";
      }
  out += "}\n";
  return out;
}

std::string fibration_to_dot(const Fibration& f) {
  std::string out = "digraph fibration {\n";
  const FinCat& e = *f.total;
  for (std::size_t o = 0; o < e.num_objects(); ++o)
    out += "  n" + std::to_string(o) + " [label=\"" +
           dot_escape(e.object_name(static_cast<int>(o))) + "\"];\n";
  for (int m = 0; m < static_cast<int>(e.num_morphisms()); ++m) {
    if (e.is_identity(m)) continue;
    bool is_lift = false;
    for (const auto& [key, lift] : f.cart_lifts)
      if (lift == m) is_lift = true;
    for (const auto& [key, lift] : f.cocart_lifts)
      if (lift == m) is_lift = true;
    out += "  n" + std::to_string(e.src(m)) + " -> n" + std::to_string(e.tgt(m)) +
           " [label=\"" + dot_escape(e.morphism_name(m)) + "\"" +
           (is_lift ? " style=bold" : "") + "];\n";
  }
  out += "}\n";
  return out;
}

}  // namespace corrcalc
