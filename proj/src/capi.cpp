#include "corrcalc.h"

#include <cstring>
#include <json.hpp>

#include "corrcalc/bivariant.hpp"
#include "corrcalc/fixtures.hpp"
#include "corrcalc/json_io.hpp"

#if defined(_WIN32)
#define CORRCALC_EXPORT __declspec(dllexport)
#else
#define CORRCALC_EXPORT __attribute__((visibility("default")))
#endif

using nlohmann::json;
using namespace corrcalc;

struct corrcalc_cat {
  CatPtr cat;
  std::set<int> marking;  // from the optional "marked" key
};

namespace {

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

corrcalc_status status_of(const Error& e) {
  switch (e.code()) {
    case ErrorCode::BadInput:
    case ErrorCode::DuplicateName:
    case ErrorCode::MissingIdentity:
    case ErrorCode::CompositionGap:
    case ErrorCode::NonAssociative:
    case ErrorCode::SrcTgtMismatch:
      return CORRCALC_PARSE_ERROR;
    case ErrorCode::SizeCap:
      return CORRCALC_SIZE_CAP;
    case ErrorCode::NotClosed:
    case ErrorCode::NoLimit:
    case ErrorCode::NoAdjoint:
    case ErrorCode::PreconditionFailed:
    case ErrorCode::MissingCertificate:
    case ErrorCode::NoProducts:
      return CORRCALC_CHECK_FAILED;
    default:
      return CORRCALC_INTERNAL_ERROR;
  }
}

json error_report(const Error& e) {
  json j;
  j["verdict"] = "error";
  j["error"] = error_code_name(e.code());
  j["message"] = e.what();
  if (!e.witness().empty()) j["witness"] = e.witness();
  return j;
}

MarkedCat marked_from_args(const json& args, const char* key = "input") {
  if (!args.contains(key))
    throw Error(ErrorCode::BadInput, std::string("missing \"") + key + "\"");
  return parse_marked_category(args.at(key).dump(), key);
}

Caps caps_from_args(const json& args) {
  Caps caps;
  if (args.contains("cap")) {
    caps.max_morphisms = args.at("cap").get<std::size_t>();
    caps.max_objects = caps.max_morphisms;
  }
  return caps;
}

int named_morphism(const FinCat& c, const json& j, const char* what) {
  int m = c.morphism_index(j.get<std::string>());
  if (m < 0)
    throw Error(ErrorCode::BadInput,
                std::string(what) + " names unknown morphism " + j.get<std::string>());
  return m;
}

Span span_from_args(const MarkedCat& m, const json& j, const char* what) {
  if (!j.is_array() || j.size() != 2)
    throw Error(ErrorCode::BadInput, std::string(what) + " must be [wrong, right]");
  const FinCat& c = *m.cat;
  int p = named_morphism(c, j[0], what);
  int q = named_morphism(c, j[1], what);
  if (c.src(p) != c.src(q))
    throw Error(ErrorCode::BadInput, std::string(what) + " legs have different roots");
  Span s{c.tgt(p), c.tgt(q), c.src(p), p, q};
  validate_span(m, s);
  return s;
}

json run_check_category(const json& args) {
  auto m = marked_from_args(args);
  json rep;
  rep["check"] = "FINCAT_V1";
  rep["verdict"] = "holds";
  rep["objects"] = m.cat->num_objects();
  rep["morphisms"] = m.cat->num_morphisms();
  return rep;
}

json run_check_marking(const json& args) {
  auto m = marked_from_args(args);
  json rep;
  rep["check"] = "CAT_FIB_MARK";
  rep["verdict"] = "holds";
  rep["marked"] = m.marking.size();
  return rep;
}

json run_check_base_change(const json& args, corrcalc_status& status) {
  auto m = marked_from_args(args);
  auto bc = has_base_change(m);
  json rep;
  rep["check"] = "BIV_BC_DEF";
  rep["verdict"] = bc.holds ? "holds" : "fails";
  if (!bc.holds) {
    rep["counterexample"] = bc.counterexample;
    auto [f, g] = *bc.counterexample_pair;
    rep["pair"] = {m.cat->morphism_name(f), m.cat->morphism_name(g)};
    status = CORRCALC_CHECK_FAILED;
  } else {
    rep["squares"] = bc.certificate.size();
  }
  return rep;
}

json run_find_adjoint(const json& args, corrcalc_status& status) {
  if (!args.contains("functor"))
    throw Error(ErrorCode::BadInput, "missing \"functor\"");
  auto f = parse_functor(args.at("functor").dump());
  auto res = find_right_adjoint(f);
  json rep;
  rep["check"] = "CAT_ADJ_UNIT";
  if (!res.adjunction) {
    rep["verdict"] = "fails";
    rep["missing_at"] = res.missing_at;
    status = CORRCALC_CHECK_FAILED;
    return rep;
  }
  rep["verdict"] = "holds";
  json ob = json::object();
  for (std::size_t o = 0; o < res.adjunction->right.ob_map.size(); ++o)
    ob[f.target->object_name(static_cast<int>(o))] =
        f.source->object_name(res.adjunction->right.ob_map[o]);
  rep["right_adjoint_objects"] = ob;
  rep["triangles"] = check_triangle_identities(*res.adjunction);
  return rep;
}

struct SquareInput {
  MarkedCat m;
  CorrResult corr;
  BicatLaxSquare sq;
};

SquareInput square_from_args(const json& args) {
  SquareInput out{marked_from_args(args), {}, {}};
  out.m = certify_base_change(out.m);
  out.corr = build_corr(out.m);
  if (!args.contains("square"))
    throw Error(ErrorCode::BadInput, "missing \"square\"");
  const json& sq = args.at("square");
  const FinCat& c = *out.m.cat;
  int top = named_morphism(c, sq.at("top"), "square.top");
  int left = named_morphism(c, sq.at("left"), "square.left");
  int right = named_morphism(c, sq.at("right"), "square.right");
  int bottom = named_morphism(c, sq.at("bottom"), "square.bottom");
  if (c.compose(right, top) != c.compose(bottom, left))
    throw Error(ErrorCode::BadInput, "square does not commute");
  if (!out.m.marked(left) || !out.m.marked(right))
    throw Error(ErrorCode::PreconditionFailed, "vertical edges must be marked");
  auto incl = corr_inclusion(out.corr);
  const FinCat& d = *out.m.cat;
  auto cell = [&](int f) {
    return incl.f1(d.src(f), d.tgt(f), discrete_one_cell(d, f));
  };
  BicatLaxSquare& bs = out.sq;
  bs.x00 = c.src(top);
  bs.x01 = c.tgt(top);
  bs.x10 = c.tgt(left);
  bs.x11 = c.tgt(right);
  bs.top = cell(top);
  bs.bot = cell(bottom);
  auto ladj = find_right_adjoint_1cell(*out.corr.bicat, bs.x00, bs.x10, cell(left));
  auto radj = find_right_adjoint_1cell(*out.corr.bicat, bs.x01, bs.x11, cell(right));
  if (!ladj || !radj)
    throw Error(ErrorCode::NoAdjoint, "vertical edge has no adjoint span");
  bs.left_adj = *ladj;
  bs.right_adj = *radj;
  const Bicat& k = *out.corr.bicat;
  int up = incl.comp_cell(bs.x00, bs.x01, bs.x11, discrete_one_cell(d, right),
                          discrete_one_cell(d, top));
  int down = incl.comp_cell(bs.x00, bs.x10, bs.x11, discrete_one_cell(d, bottom),
                            discrete_one_cell(d, left));
  bs.filler = k.vc(bs.x00, bs.x11, k.inv2_or_throw(bs.x00, bs.x11, down), up);
  validate_lax_square(k, bs);
  return out;
}

json run_mate(const json& args) {
  auto in = square_from_args(args);
  const Bicat& k = *in.corr.bicat;
  int m1 = bicat_mate(k, in.sq);
  int m2 = bicat_mate_route2(k, in.sq);
  json rep;
  rep["check"] = "BIV_BC_MATE";
  rep["verdict"] = "holds";
  rep["mate"] = k.hom(in.sq.x10, in.sq.x01)->morphism_name(m1);
  rep["routes_agree"] = (m1 == m2);
  rep["invertible"] = k.hom(in.sq.x10, in.sq.x01)->is_iso(m1);
  return rep;
}

json run_check_bc(const json& args, corrcalc_status& status) {
  auto in = square_from_args(args);
  bool bc = bicat_is_beck_chevalley(*in.corr.bicat, in.sq);
  json rep;
  rep["check"] = "BIV_BC_CONDITION";
  rep["verdict"] = bc ? "holds" : "fails";
  if (!bc) status = CORRCALC_CHECK_FAILED;
  return rep;
}

json run_build_corr(const json& args) {
  auto m = certify_base_change(marked_from_args(args));
  auto corr = build_corr(m, caps_from_args(args));
  json rep;
  rep["check"] = "BIV_LOC_IMAGE";
  rep["verdict"] = "holds";
  rep["objects"] = corr.bicat->num_objects();
  json homs = json::object();
  for (int x = 0; x < corr.bicat->num_objects(); ++x)
    for (int y = 0; y < corr.bicat->num_objects(); ++y)
      homs[corr.base.cat->object_name(x) + ">" + corr.base.cat->object_name(y)] = {
          {"spans", corr.table(x, y).spans.size()},
          {"cells", corr.table(x, y).morphisms.size()}};
  rep["homs"] = homs;
  if (args.value("emit", true)) rep["bicat"] = json::parse(bicat_v1_to_json(*corr.bicat));
  rep["dot"] = bicat_skeleton_to_dot(*corr.bicat);
  return rep;
}

json run_compose_spans(const json& args) {
  auto m = certify_base_change(marked_from_args(args));
  Span s1 = span_from_args(m, args.at("span1"), "span1");
  Span s2 = span_from_args(m, args.at("span2"), "span2");
  Span res = compose_spans(m, s1, s2);
  json rep;
  rep["check"] = "BIV_COMP_PROP";
  rep["verdict"] = "holds";
  rep["kernel"] = m.cat->object_name(res.kernel);
  rep["wrong_way"] = m.cat->morphism_name(res.wrong_way);
  rep["right_way"] = m.cat->morphism_name(res.right_way);
  return rep;
}

json run_grothendieck(const json& args) {
  if (!args.contains("family")) throw Error(ErrorCode::BadInput, "missing \"family\"");
  auto fam = parse_cat_family(args.at("family").dump());
  auto fib = grothendieck(fam, caps_from_args(args));
  json rep;
  rep["check"] = "CAT_GROT_INT";
  rep["verdict"] = "holds";
  rep["fibration"] = json::parse(fibration_to_json(fib));
  rep["dot"] = fibration_to_dot(fib);
  return rep;
}

json run_check_fibration(const json& args, corrcalc_status& status) {
  if (!args.contains("functor")) throw Error(ErrorCode::BadInput, "missing \"functor\"");
  const json& fj = args.at("functor");
  auto f = parse_functor(fj.dump());
  // Markings come from the target's "marked" set.
  std::set<std::string> marked;
  if (fj.contains("target") && fj.at("target").contains("marked"))
    for (const auto& mm : fj.at("target").at("marked")) marked.insert(mm.get<std::string>());
  auto m = validate_marking(f.target, marked);
  auto pick = [&](const std::string& mode) -> std::set<int> {
    if (mode == "none") return {};
    if (mode == "marked") return m.marking;
    std::set<int> all;
    for (int i = 0; i < static_cast<int>(f.target->num_morphisms()); ++i) all.insert(i);
    return all;
  };
  auto cart = pick(args.value("cart", "marked"));
  auto cocart = pick(args.value("cocart", "none"));
  auto check = check_fibration(f, cart, cocart);
  json rep;
  rep["check"] = "CAT_FIB_CART_DEF";
  if (!check.fibration) {
    rep["verdict"] = "fails";
    rep["failure"] = check.failure;
    status = CORRCALC_CHECK_FAILED;
    return rep;
  }
  rep["verdict"] = "holds";
  rep["cart_lifts"] = check.fibration->cart_lifts.size();
  rep["cocart_lifts"] = check.fibration->cocart_lifts.size();
  return rep;
}

json run_check_twisted(const json& args, corrcalc_status& status) {
  auto mc = marked_from_args(args, "c");
  auto md = marked_from_args(args, "d");
  if (!args.contains("total") || !args.contains("proj_c") || !args.contains("proj_d"))
    throw Error(ErrorCode::BadInput, "missing total or projections");
  auto total = validate_category(parse_fincat_v1(args.at("total").dump(), "total"));
  auto prod = product_category(mc.cat, md.cat);
  FunctorData p;
  p.source = total;
  p.target = prod.cat;
  const json& pc = args.at("proj_c");
  const json& pd = args.at("proj_d");
  p.ob_map.resize(total->num_objects());
  for (int o = 0; o < static_cast<int>(total->num_objects()); ++o) {
    int c1 = mc.cat->object_index(
        pc.at("ob_map").at(total->object_name(o)).get<std::string>());
    int d1 = md.cat->object_index(
        pd.at("ob_map").at(total->object_name(o)).get<std::string>());
    p.ob_map[o] = prod.ob_of(c1, d1);
  }
  p.mor_map.resize(total->num_morphisms());
  for (int mo = 0; mo < static_cast<int>(total->num_morphisms()); ++mo) {
    int c1 = mc.cat->morphism_index(
        pc.at("mor_map").at(total->morphism_name(mo)).get<std::string>());
    int d1 = md.cat->morphism_index(
        pd.at("mor_map").at(total->morphism_name(mo)).get<std::string>());
    p.mor_map[mo] = prod.mor_of(c1, d1);
  }
  validate_functor(p);
  auto rep0 = check_twisted_bicartesian(p, prod, mc, md);
  json rep;
  rep["check"] = "BIV_TWIST_DEF";
  rep["verdict"] = rep0.holds ? "holds" : "fails";
  if (!rep0.holds) {
    rep["condition"] = rep0.failing_condition;
    rep["witness"] = rep0.witness;
    status = CORRCALC_CHECK_FAILED;
  }
  return rep;
}

json run_check_bivariant(const json& args, corrcalc_status& status) {
  if (!args.contains("family")) throw Error(ErrorCode::BadInput, "missing \"family\"");
  auto fam = parse_cat_family(args.at("family").dump());
  std::set<std::string> marked;
  if (args.at("family").contains("base") &&
      args.at("family").at("base").contains("marked"))
    for (const auto& mm : args.at("family").at("base").at("marked"))
      marked.insert(mm.get<std::string>());
  auto m = certify_base_change(validate_marking(fam.base, marked));
  auto emb = embed_in_cat_universe(fam, caps_from_args(args));
  auto rep0 = check_bivariant(emb.h, m);
  json rep;
  rep["check"] = "BIV_FUN_DEF";
  rep["verdict"] = rep0.ok ? "holds" : "fails";
  rep["adjoints"] = rep0.adjoints.size();
  rep["squares"] = rep0.square_verdicts.size();
  if (!rep0.ok) {
    rep["failure"] = rep0.failure;
    status = CORRCALC_CHECK_FAILED;
  }
  return rep;
}

json run_spex(const json& args, corrcalc_status& status) {
  if (!args.contains("family")) throw Error(ErrorCode::BadInput, "missing \"family\"");
  auto fam = parse_cat_family(args.at("family").dump());
  std::set<std::string> marked;
  if (args.at("family").contains("base") &&
      args.at("family").at("base").contains("marked"))
    for (const auto& mm : args.at("family").at("base").at("marked"))
      marked.insert(mm.get<std::string>());
  auto m = certify_base_change(validate_marking(fam.base, marked));
  auto corr = build_corr(m, caps_from_args(args));
  auto emb = embed_in_cat_universe(fam, caps_from_args(args));
  auto biv = check_bivariant(emb.h, m);
  json rep;
  rep["check"] = "BIV_EXT_THM";
  if (!biv.ok) {
    rep["verdict"] = "fails";
    rep["failure"] = biv.failure;
    status = CORRCALC_CHECK_FAILED;
    return rep;
  }
  auto sp = spex(biv, corr);
  auto incl = corr_inclusion(corr);
  bool restricts = pseudofunctors_isomorphic(compose_pseudofunctors(sp, incl), emb.h);
  bool intertwines = true;
  for (int x = 0; x < corr.bicat->num_objects() && intertwines; ++x)
    for (int y = 0; y < corr.bicat->num_objects() && intertwines; ++y)
      for (int z = 0; z < corr.bicat->num_objects() && intertwines; ++z)
        intertwines = check_composition_intertwine(biv, corr, sp, x, y, z).holds;
  rep["verdict"] = (restricts && intertwines) ? "holds" : "fails";
  rep["restricts_to_input"] = restricts;
  rep["intertwines_composition"] = intertwines;
  if (!(restricts && intertwines)) status = CORRCALC_CHECK_FAILED;
  return rep;
}

json run_yoneda(const json& args, corrcalc_status& status) {
  auto m = certify_base_change(marked_from_args(args));
  if (!args.contains("at")) throw Error(ErrorCode::BadInput, "missing \"at\"");
  int x = m.cat->object_index(args.at("at").get<std::string>());
  if (x < 0) throw Error(ErrorCode::BadInput, "unknown object in \"at\"");
  auto corr = build_corr(m, caps_from_args(args));
  CatPseudofunctor f = args.contains("family")
                           ? parse_cat_family(args.at("family").dump())
                           : representable_corr(corr, x);
  auto rep0 = yoneda_check(corr, f, x, caps_from_args(args));
  json rep;
  rep["check"] = "BIV_YON_LEMMA";
  rep["verdict"] = rep0.holds ? "holds" : "fails";
  rep["transformations"] = rep0.transformation_count;
  rep["fully_faithful"] = rep0.evaluation.fully_faithful;
  rep["essentially_surjective"] = rep0.evaluation.essentially_surjective;
  if (!rep0.holds) {
    rep["failure"] = rep0.failure;
    status = CORRCALC_CHECK_FAILED;
  }
  return rep;
}

json run_universality(const json& args, corrcalc_status& status) {
  auto m = certify_base_change(marked_from_args(args));
  auto corr = build_corr(m, caps_from_args(args));
  if (!args.contains("k") || !args.at("k").is_array() || args.at("k").empty())
    throw Error(ErrorCode::BadInput, "missing \"k\": list of categories");
  std::vector<CatPtr> cats;
  for (std::size_t i = 0; i < args.at("k").size(); ++i)
    cats.push_back(validate_category(
        parse_fincat_v1(args.at("k")[i].dump(), "k" + std::to_string(i))));
  auto u = cat_universe(cats, caps_from_args(args));
  auto rep0 = universality_check(corr, u.bicat, caps_from_args(args));
  json rep;
  rep["check"] = "UNIV_EXT_THM";
  rep["verdict"] = rep0.holds ? "holds" : "fails";
  rep["corr_classes"] = rep0.corr_classes;
  rep["bivariant_classes"] = rep0.bivariant_classes;
  rep["injective"] = rep0.injective;
  rep["surjective"] = rep0.surjective;
  json wit = json::array();
  for (auto& [a, b] : rep0.witness) wit.push_back({a, b});
  rep["witness"] = wit;
  if (!rep0.holds) {
    rep["failure"] = rep0.failure;
    status = CORRCALC_CHECK_FAILED;
  }
  return rep;
}

json run_self_dual(const json& args, corrcalc_status& status) {
  auto m = certify_base_change(marked_from_args(args));
  if (!args.contains("at")) throw Error(ErrorCode::BadInput, "missing \"at\"");
  int x = m.cat->object_index(args.at("at").get<std::string>());
  if (x < 0) throw Error(ErrorCode::BadInput, "unknown object in \"at\"");
  bool ok = self_duality_check(m, x);
  json rep;
  rep["check"] = "EX_MON_SPANS";
  rep["verdict"] = ok ? "holds" : "fails";
  if (!ok) status = CORRCALC_CHECK_FAILED;
  return rep;
}

json run_emit_dot(const json& args) {
  auto m = marked_from_args(args);
  json rep;
  rep["check"] = "DOT";
  rep["verdict"] = "holds";
  if (args.contains("span")) {
    Span s = span_from_args(m, args.at("span"), "span");
    rep["dot"] = span_to_dot(m, s);
  } else {
    rep["dot"] = category_to_dot(*m.cat, &m.marking);
  }
  return rep;
}

}  // namespace

extern "C" {

CORRCALC_EXPORT const char* corrcalc_version(void) { return "corrcalc 1.0.0"; }

CORRCALC_EXPORT void corrcalc_set_parallelism(unsigned workers) {
  set_parallelism(workers);
}

CORRCALC_EXPORT corrcalc_status corrcalc_cat_parse(const char* json_text,
                                                   const char* name, corrcalc_cat** out,
                                                   char** err_json) {
  if (!json_text || !out) return CORRCALC_INVALID_ARGUMENT;
  *out = nullptr;
  try {
    auto m = parse_marked_category(json_text, name ? name : "input");
    *out = new corrcalc_cat{m.cat, m.marking};
    return CORRCALC_OK;
  } catch (const Error& e) {
    if (err_json) *err_json = dup_string(error_report(e).dump(2));
    return status_of(e);
  } catch (const std::exception& e) {
    if (err_json) *err_json = dup_string(std::string("{\"error\":\"") + e.what() + "\"}");
    return CORRCALC_INTERNAL_ERROR;
  }
}

CORRCALC_EXPORT void corrcalc_cat_free(corrcalc_cat* cat) { delete cat; }

CORRCALC_EXPORT size_t corrcalc_cat_num_objects(const corrcalc_cat* cat) {
  return cat ? cat->cat->num_objects() : 0;
}

CORRCALC_EXPORT size_t corrcalc_cat_num_morphisms(const corrcalc_cat* cat) {
  return cat ? cat->cat->num_morphisms() : 0;
}

CORRCALC_EXPORT corrcalc_status corrcalc_cat_to_json(const corrcalc_cat* cat,
                                                     char** out_json) {
  if (!cat || !out_json) return CORRCALC_INVALID_ARGUMENT;
  *out_json = dup_string(fincat_v1_to_json(*cat->cat, &cat->marking));
  return CORRCALC_OK;
}

CORRCALC_EXPORT corrcalc_status corrcalc_cat_to_dot(const corrcalc_cat* cat,
                                                    char** out_dot) {
  if (!cat || !out_dot) return CORRCALC_INVALID_ARGUMENT;
  *out_dot = dup_string(category_to_dot(*cat->cat, &cat->marking));
  return CORRCALC_OK;
}

CORRCALC_EXPORT corrcalc_status corrcalc_cat_opposite(const corrcalc_cat* cat,
                                                      corrcalc_cat** out) {
  if (!cat || !out) return CORRCALC_INVALID_ARGUMENT;
  try {
    auto op = opposite(cat->cat);
    *out = new corrcalc_cat{op, cat->marking};
    return CORRCALC_OK;
  } catch (const std::exception&) {
    return CORRCALC_INTERNAL_ERROR;
  }
}

CORRCALC_EXPORT corrcalc_status corrcalc_run(const char* command, const char* args_json,
                                             char** out_json) {
  if (!command || !out_json) return CORRCALC_INVALID_ARGUMENT;
  *out_json = nullptr;
  corrcalc_status status = CORRCALC_OK;
  try {
    json args = json::parse(args_json ? args_json : "{}", nullptr, false);
    if (args.is_discarded())
      throw Error(ErrorCode::BadInput, "malformed argument JSON");
    std::string cmd = command;
    json rep;
    if (cmd == "check-category") {
      rep = run_check_category(args);
    } else if (cmd == "check-marking") {
      rep = run_check_marking(args);
    } else if (cmd == "check-base-change") {
      rep = run_check_base_change(args, status);
    } else if (cmd == "find-adjoint") {
      rep = run_find_adjoint(args, status);
    } else if (cmd == "mate") {
      rep = run_mate(args);
    } else if (cmd == "check-bc") {
      rep = run_check_bc(args, status);
    } else if (cmd == "build-corr") {
      rep = run_build_corr(args);
    } else if (cmd == "compose-spans") {
      rep = run_compose_spans(args);
    } else if (cmd == "grothendieck") {
      rep = run_grothendieck(args);
    } else if (cmd == "check-fibration") {
      rep = run_check_fibration(args, status);
    } else if (cmd == "check-twisted") {
      rep = run_check_twisted(args, status);
    } else if (cmd == "check-bivariant") {
      rep = run_check_bivariant(args, status);
    } else if (cmd == "spex") {
      rep = run_spex(args, status);
    } else if (cmd == "yoneda-check") {
      rep = run_yoneda(args, status);
    } else if (cmd == "universality") {
      rep = run_universality(args, status);
    } else if (cmd == "self-dual") {
      rep = run_self_dual(args, status);
    } else if (cmd == "emit-dot") {
      rep = run_emit_dot(args);
    } else {
      throw Error(ErrorCode::BadInput, "unknown command " + cmd);
    }
    *out_json = dup_string(rep.dump(2));
    return status;
  } catch (const Error& e) {
    *out_json = dup_string(error_report(e).dump(2));
    return status_of(e);
  } catch (const std::exception& e) {
    *out_json = dup_string(std::string("{\"error\":\"") + e.what() + "\"}");
    return CORRCALC_INTERNAL_ERROR;
  }
}

CORRCALC_EXPORT void corrcalc_string_free(char* text) { std::free(text); }

}  // extern "C"
