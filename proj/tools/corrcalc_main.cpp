// corrcalc command line front end. Talks to the engine exclusively through
// the C API in corrcalc.h; file handling and argument packing live here.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>

#include "corrcalc.h"

using nlohmann::json;

namespace {

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    std::cerr << "cannot open " << path << "\n";
    std::exit(2);
  }
  std::stringstream ss;
  ss << in.rdbuf();
  json j = json::parse(ss.str(), nullptr, false);
  if (j.is_discarded()) {
    std::cerr << "malformed JSON in " << path << "\n";
    std::exit(2);
  }
  return j;
}

json spans_arg(const std::string& legs) {
  auto comma = legs.find(',');
  if (comma == std::string::npos) {
    std::cerr << "span must be wrong,right\n";
    std::exit(2);
  }
  return json::array({legs.substr(0, comma), legs.substr(comma + 1)});
}

int exit_code_for(corrcalc_status status) {
  switch (status) {
    case CORRCALC_OK:
      return 0;
    case CORRCALC_CHECK_FAILED:
    case CORRCALC_SIZE_CAP:
      return 1;
    default:
      return 2;
  }
}

void print_text(const json& rep) {
  if (rep.contains("check")) std::cout << "check: " << rep["check"].get<std::string>() << "\n";
  for (auto it = rep.begin(); it != rep.end(); ++it) {
    if (it.key() == "check" || it.key() == "bicat" || it.key() == "fibration" ||
        it.key() == "dot")
      continue;
    std::cout << it.key() << ": " << it.value().dump() << "\n";
  }
}

int emit(const json& rep, corrcalc_status status, const std::string& format,
         const std::string& out_path) {
  json printable = rep;
  std::string side_payload;
  std::string side_kind;
  for (const char* key : {"bicat", "fibration", "dot"}) {
    if (printable.contains(key)) {
      side_kind = key;
      side_payload = printable[key].is_string() ? printable[key].get<std::string>()
                                                : printable[key].dump(2);
      if (!out_path.empty()) printable.erase(key);
      break;
    }
  }
  if (!out_path.empty() && !side_payload.empty()) {
    std::ofstream out(out_path);
    out << side_payload;
    if (side_kind != "dot") out << "\n";
  }
  if (format == "text") {
    print_text(printable);
  } else if (format == "dot") {
    if (printable.contains("dot"))
      std::cout << printable["dot"].get<std::string>();
    else if (side_kind == "dot")
      std::cout << side_payload;
    else
      std::cout << printable.dump(2) << "\n";
  } else {
    std::cout << printable.dump(2) << "\n";
  }
  return exit_code_for(status);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"corrcalc: finite category computation engine"};
  app.require_subcommand(1);

  std::string input, out_path, format = "json", at, functor_path, family_path;
  std::string square_path, span1, span2, span_arg;
  std::string cart_mode = "marked", cocart_mode = "none";
  std::string c_path, d_path, total_path, proj_c_path, proj_d_path;
  std::vector<std::string> k_paths;
  std::size_t cap = 0;
  unsigned parallel = 1;

  app.add_option("--parallel", parallel, "worker count for internal scans");

  auto add_common = [&](CLI::App* cmd, bool needs_input) {
    if (needs_input)
      cmd->add_option("--input", input, "fincat-v1 file")->required();
    cmd->add_option("--out", out_path, "write the payload to this file");
    cmd->add_option("--format", format, "json|text|dot");
    cmd->add_option("--cap", cap, "size cap for constructed categories");
  };

  auto* c_cat = app.add_subcommand("check-category", "validate a fincat-v1 file");
  add_common(c_cat, true);
  auto* c_mark = app.add_subcommand("check-marking", "validate the marked class");
  add_common(c_mark, true);
  auto* c_bc = app.add_subcommand("check-base-change",
                                  "pullbacks of marked maps exist and stay marked");
  add_common(c_bc, true);
  auto* c_adj = app.add_subcommand("find-adjoint", "search a right adjoint");
  add_common(c_adj, false);
  c_adj->add_option("--functor", functor_path, "functor file")->required();
  auto* c_mate = app.add_subcommand("mate", "conjugate 2-cell of a marked square");
  add_common(c_mate, true);
  c_mate->add_option("--square", square_path, "square file")->required();
  auto* c_bcq = app.add_subcommand("check-bc", "Beck-Chevalley condition of a square");
  add_common(c_bcq, true);
  c_bcq->add_option("--square", square_path, "square file")->required();
  auto* c_corr = app.add_subcommand("build-corr", "build the span bicategory");
  add_common(c_corr, true);
  auto* c_comp = app.add_subcommand("compose-spans", "compose two spans");
  add_common(c_comp, true);
  c_comp->add_option("--span1", span1, "wrong,right")->required();
  c_comp->add_option("--span2", span2, "wrong,right")->required();
  auto* c_groth = app.add_subcommand("grothendieck", "integrate a functor family");
  add_common(c_groth, false);
  c_groth->add_option("--family", family_path, "functor family file")->required();
  auto* c_fib = app.add_subcommand("check-fibration", "certify (co)Cartesian lifts");
  add_common(c_fib, false);
  c_fib->add_option("--functor", functor_path, "projection functor file")->required();
  c_fib->add_option("--cart", cart_mode, "none|marked|all");
  c_fib->add_option("--cocart", cocart_mode, "none|marked|all");
  auto* c_tw = app.add_subcommand("check-twisted", "twisted bi-Cartesian conditions");
  add_common(c_tw, false);
  c_tw->add_option("--c", c_path, "first factor fincat-v1")->required();
  c_tw->add_option("--d", d_path, "second factor fincat-v1")->required();
  c_tw->add_option("--total", total_path, "total category fincat-v1")->required();
  c_tw->add_option("--proj-c", proj_c_path, "ob_map/mor_map file")->required();
  c_tw->add_option("--proj-d", proj_d_path, "ob_map/mor_map file")->required();
  auto* c_biv = app.add_subcommand("check-bivariant", "adjoints plus base change");
  add_common(c_biv, false);
  c_biv->add_option("--family", family_path, "functor family file")->required();
  auto* c_spex = app.add_subcommand("spex", "span extension of a bivariant family");
  add_common(c_spex, false);
  c_spex->add_option("--family", family_path, "functor family file")->required();
  auto* c_yon = app.add_subcommand("yoneda-check", "evaluation equivalence");
  add_common(c_yon, true);
  c_yon->add_option("--at", at, "base object")->required();
  c_yon->add_option("--family", family_path,
                    "target functor family (default: representable)");
  auto* c_univ = app.add_subcommand("universality", "restriction bijection on classes");
  add_common(c_univ, true);
  c_univ->add_option("--k", k_paths, "target universe categories")->required();
  auto* c_dual = app.add_subcommand("self-dual", "zigzag identities");
  add_common(c_dual, true);
  c_dual->add_option("--at", at, "object")->required();
  auto* c_dot = app.add_subcommand("emit-dot", "DOT rendering");
  add_common(c_dot, true);
  c_dot->add_option("--span", span_arg, "wrong,right");

  CLI11_PARSE(app, argc, argv);
  corrcalc_set_parallelism(parallel);

  json args;
  std::string command;
  if (!input.empty()) args["input"] = read_json_file(input);
  if (cap > 0) args["cap"] = cap;
  if (*c_cat) command = "check-category";
  if (*c_mark) command = "check-marking";
  if (*c_bc) command = "check-base-change";
  if (*c_adj) {
    command = "find-adjoint";
    args["functor"] = read_json_file(functor_path);
  }
  if (*c_mate || *c_bcq) {
    command = *c_mate ? "mate" : "check-bc";
    args["square"] = read_json_file(square_path);
  }
  if (*c_corr) command = "build-corr";
  if (*c_comp) {
    command = "compose-spans";
    args["span1"] = spans_arg(span1);
    args["span2"] = spans_arg(span2);
  }
  if (*c_groth) {
    command = "grothendieck";
    args["family"] = read_json_file(family_path);
  }
  if (*c_fib) {
    command = "check-fibration";
    args["functor"] = read_json_file(functor_path);
    args["cart"] = cart_mode;
    args["cocart"] = cocart_mode;
  }
  if (*c_tw) {
    command = "check-twisted";
    args["c"] = read_json_file(c_path);
    args["d"] = read_json_file(d_path);
    args["total"] = read_json_file(total_path);
    args["proj_c"] = read_json_file(proj_c_path);
    args["proj_d"] = read_json_file(proj_d_path);
  }
  if (*c_biv || *c_spex) {
    command = *c_biv ? "check-bivariant" : "spex";
    args["family"] = read_json_file(family_path);
  }
  if (*c_yon) {
    command = "yoneda-check";
    args["at"] = at;
    if (!family_path.empty()) args["family"] = read_json_file(family_path);
  }
  if (*c_univ) {
    command = "universality";
    args["k"] = json::array();
    for (const auto& p : k_paths) args["k"].push_back(read_json_file(p));
  }
  if (*c_dual) {
    command = "self-dual";
    args["at"] = at;
  }
  if (*c_dot) {
    command = "emit-dot";
    if (!span_arg.empty()) args["span"] = spans_arg(span_arg);
  }

  char* report = nullptr;
  corrcalc_status status = corrcalc_run(command.c_str(), args.dump().c_str(), &report);
  json rep = report ? json::parse(report, nullptr, false) : json::object();
  if (rep.is_discarded()) rep = json::object();
  corrcalc_string_free(report);
  return emit(rep, status, format, out_path);
}
