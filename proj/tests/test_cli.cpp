#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cstdio>
#include <fstream>
#include <string>

namespace {

struct RunResult {
  int exit_code;
  std::string output;
};

RunResult run_cli(const std::string& args) {
  std::string cmd = std::string(CORRCALC_CLI_PATH) + " " + args + " 2>&1";
  std::array<char, 4096> buf{};
  std::string output;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  while (fgets(buf.data(), buf.size(), pipe)) output += buf.data();
  int status = pclose(pipe);
  return {WEXITSTATUS(status), output};
}

std::string write_fixture(const std::string& name, const std::string& text) {
  std::string path = "cli_fixture_" + name + ".json";
  std::ofstream out(path);
  out << text;
  return path;
}

const char* kArrowMarked = R"({
  "objects": ["0", "1"],
  "morphisms": [{"name": "id0", "src": "0", "tgt": "0"},
                {"name": "id1", "src": "1", "tgt": "1"},
                {"name": "a", "src": "0", "tgt": "1"}],
  "identities": {"0": "id0", "1": "id1"},
  "compose": [["id0","id0","id0"],["id1","id1","id1"],["a","id0","a"],["id1","a","a"]],
  "marked": ["a"]
})";

const char* kP2All = R"({
  "objects": ["e","a","b","t"],
  "morphisms": [{"name":"ide","src":"e","tgt":"e"},{"name":"ida","src":"a","tgt":"a"},
                {"name":"idb","src":"b","tgt":"b"},{"name":"idt","src":"t","tgt":"t"},
                {"name":"ea","src":"e","tgt":"a"},{"name":"eb","src":"e","tgt":"b"},
                {"name":"et","src":"e","tgt":"t"},{"name":"at","src":"a","tgt":"t"},
                {"name":"bt","src":"b","tgt":"t"}],
  "identities": {"e":"ide","a":"ida","b":"idb","t":"idt"},
  "compose": [["ide","ide","ide"],["ida","ida","ida"],["idb","idb","idb"],
              ["idt","idt","idt"],["ea","ide","ea"],["ida","ea","ea"],
              ["eb","ide","eb"],["idb","eb","eb"],["et","ide","et"],["idt","et","et"],
              ["at","ida","at"],["idt","at","at"],["bt","idb","bt"],["idt","bt","bt"],
              ["at","ea","et"],["bt","eb","et"]],
  "marked": ["ide","ida","idb","idt","ea","eb","et","at","bt"]
})";

}  // namespace

TEST_CASE("exit codes: 0 holds, 1 fails, 2 malformed") {
  auto arrow = write_fixture("arrow", kArrowMarked);
  auto ok = run_cli("check-category --input " + arrow);
  CHECK(ok.exit_code == 0);

  auto bad = write_fixture("bad", "{\"objects\": [");
  auto malformed = run_cli("check-category --input " + bad);
  CHECK(malformed.exit_code == 2);

  // FS-like failure: base change with an unmarked pulled-back leg.
  auto p2bad = write_fixture("p2bad", R"({
    "objects": ["e","a","b","t"],
    "morphisms": [{"name":"ide","src":"e","tgt":"e"},{"name":"ida","src":"a","tgt":"a"},
                  {"name":"idb","src":"b","tgt":"b"},{"name":"idt","src":"t","tgt":"t"},
                  {"name":"ea","src":"e","tgt":"a"},{"name":"eb","src":"e","tgt":"b"},
                  {"name":"et","src":"e","tgt":"t"},{"name":"at","src":"a","tgt":"t"},
                  {"name":"bt","src":"b","tgt":"t"}],
    "identities": {"e":"ide","a":"ida","b":"idb","t":"idt"},
    "compose": [["ide","ide","ide"],["ida","ida","ida"],["idb","idb","idb"],
                ["idt","idt","idt"],["ea","ide","ea"],["ida","ea","ea"],
                ["eb","ide","eb"],["idb","eb","eb"],["et","ide","et"],["idt","et","et"],
                ["at","ida","at"],["idt","at","at"],["bt","idb","bt"],["idt","bt","bt"],
                ["at","ea","et"],["bt","eb","et"]],
    "marked": ["at"]
  })");
  auto fails = run_cli("check-base-change --input " + p2bad);
  CHECK(fails.exit_code == 1);
  CHECK(fails.output.find("counterexample") != std::string::npos);
}

TEST_CASE("pipeline: build-corr then yoneda-check") {
  auto arrow = write_fixture("arrow2", kArrowMarked);
  auto corr = run_cli("build-corr --input " + arrow + " --out cli_corr_out.json");
  CHECK(corr.exit_code == 0);
  std::ifstream emitted("cli_corr_out.json");
  CHECK(emitted.good());
  auto yoneda = run_cli("yoneda-check --input " + arrow + " --at 1");
  CHECK(yoneda.exit_code == 0);
  CHECK(yoneda.output.find("\"verdict\": \"holds\"") != std::string::npos);
}

TEST_CASE("square commands detect pullbacks in the span bicategory") {
  auto p2 = write_fixture("p2", kP2All);
  auto sq = write_fixture("square_good",
                          R"({"top": "ea", "left": "eb", "right": "at", "bottom": "bt"})");
  auto good = run_cli("check-bc --input " + p2 + " --square " + sq);
  CHECK(good.exit_code == 0);
  auto mate = run_cli("mate --input " + p2 + " --square " + sq);
  CHECK(mate.exit_code == 0);
  CHECK(mate.output.find("\"routes_agree\": true") != std::string::npos);

  // Commuting non-pullback square: apex e under the cospan (a <= t, t <= t).
  auto sqbad = write_fixture("square_bad",
                             R"({"top": "ea", "left": "et", "right": "at", "bottom": "idt"})");
  auto bad = run_cli("check-bc --input " + p2 + " --square " + sqbad);
  CHECK(bad.exit_code == 1);
}

TEST_CASE("dot output renders spans as roofs") {
  auto arrow = write_fixture("arrow3", kArrowMarked);
  auto dot = run_cli("emit-dot --input " + arrow + " --span a,a --format dot");
  CHECK(dot.exit_code == 0);
  CHECK(dot.output.find("kernel -> left") != std::string::npos);
  CHECK(dot.output.find("style=bold") != std::string::npos);
}

TEST_CASE("reports are byte-identical across parallelism settings") {
  auto p2 = write_fixture("p2det", kP2All);
  auto r1 = run_cli("--parallel 1 build-corr --input " + p2);
  auto r4 = run_cli("--parallel 4 build-corr --input " + p2);
  CHECK(r1.exit_code == 0);
  CHECK(r1.output == r4.output);
}

TEST_CASE("family-based commands run end to end") {
  const char* one_cat = R"({"objects": ["*"],
    "morphisms": [{"name": "id*", "src": "*", "tgt": "*"}],
    "identities": {"*": "id*"}, "compose": [["id*","id*","id*"]]})";
  std::string family = std::string(R"({"base": )") + kArrowMarked +
                       R"(, "contravariant": false,
    "fibres": {"0": )" + one_cat + R"(, "1": )" + one_cat + R"(},
    "transitions": {"id0": {"ob_map": {"*": "*"}, "mor_map": {"id*": "id*"}},
                    "id1": {"ob_map": {"*": "*"}, "mor_map": {"id*": "id*"}},
                    "a": {"ob_map": {"*": "*"}, "mor_map": {"id*": "id*"}}}})";
  auto fam = write_fixture("family", family);

  auto groth = run_cli("grothendieck --family " + fam + " --out cli_fib_out.json");
  CHECK(groth.exit_code == 0);
  std::ifstream emitted("cli_fib_out.json");
  CHECK(emitted.good());

  auto groth_dot = run_cli("grothendieck --family " + fam + " --format dot");
  CHECK(groth_dot.exit_code == 0);
  CHECK(groth_dot.output.find("digraph fibration") != std::string::npos);

  auto arrow_for_yoneda = write_fixture("arrowyon", kArrowMarked);
  auto yon_fam =
      run_cli("yoneda-check --input " + arrow_for_yoneda + " --at 1 --family " + fam);
  CHECK(yon_fam.exit_code == 0);

  auto biv = run_cli("check-bivariant --family " + fam);
  CHECK(biv.exit_code == 0);
  CHECK(biv.output.find("BIV_FUN_DEF") != std::string::npos);

  auto sp = run_cli("spex --family " + fam);
  CHECK(sp.exit_code == 0);
  CHECK(sp.output.find("\"restricts_to_input\": true") != std::string::npos);

  // Projection functor of a product as a fibration.
  auto arrow = write_fixture("arrowfib", kArrowMarked);
  auto dual = run_cli("self-dual --input cli_fixture_p2det.json --at t");
  CHECK(dual.exit_code == 0);

  auto univ = run_cli("universality --input " + arrow + " --k " +
                      write_fixture("k1", one_cat) + " --k " +
                      write_fixture("k2", kArrowMarked));
  CHECK(univ.exit_code == 0);
  CHECK(univ.output.find("\"injective\": true") != std::string::npos);
  (void)one_cat;
}

TEST_CASE("check-fibration and check-twisted run from files") {
  // Projection of ARROW x ARROW onto the second factor, described inline.
  const char* total = R"({
    "objects": ["00","01","10","11"],
    "morphisms": [
      {"name":"i00","src":"00","tgt":"00"},{"name":"i01","src":"01","tgt":"01"},
      {"name":"i10","src":"10","tgt":"10"},{"name":"i11","src":"11","tgt":"11"},
      {"name":"h0","src":"00","tgt":"10"},{"name":"h1","src":"01","tgt":"11"},
      {"name":"v0","src":"00","tgt":"01"},{"name":"v1","src":"10","tgt":"11"},
      {"name":"dg","src":"00","tgt":"11"}],
    "identities": {"00":"i00","01":"i01","10":"i10","11":"i11"},
    "compose": [["i00","i00","i00"],["i01","i01","i01"],["i10","i10","i10"],
                ["i11","i11","i11"],["h0","i00","h0"],["i10","h0","h0"],
                ["h1","i01","h1"],["i11","h1","h1"],["v0","i00","v0"],
                ["i01","v0","v0"],["v1","i10","v1"],["i11","v1","v1"],
                ["dg","i00","dg"],["i11","dg","dg"],["v1","h0","dg"],["h1","v0","dg"]]
  })";
  auto total_f = write_fixture("twtotal", total);
  auto arrow = write_fixture("twarrow", kArrowMarked);
  auto proj_c = write_fixture("twprojc", R"({
    "ob_map": {"00": "0", "01": "0", "10": "1", "11": "1"},
    "mor_map": {"i00":"id0","i01":"id0","i10":"id1","i11":"id1",
                "h0":"a","h1":"a","v0":"id0","v1":"id1","dg":"a"}})");
  auto proj_d = write_fixture("twprojd", R"({
    "ob_map": {"00": "0", "01": "1", "10": "0", "11": "1"},
    "mor_map": {"i00":"id0","i01":"id1","i10":"id0","i11":"id1",
                "h0":"id0","h1":"id1","v0":"a","v1":"a","dg":"a"}})");
  auto tw = run_cli("check-twisted --c " + arrow + " --d " + arrow + " --total " +
                    total_f + " --proj-c " + proj_c + " --proj-d " + proj_d);
  CHECK(tw.exit_code == 0);
  CHECK(tw.output.find("BIV_TWIST_DEF") != std::string::npos);

  // The same square viewed as a functor file for check-fibration.
  std::string functor = std::string(R"({"source": )") + total +
                        R"(, "target": )" + kArrowMarked + R"(,
    "ob_map": {"00": "0", "01": "0", "10": "1", "11": "1"},
    "mor_map": {"i00":"id0","i01":"id0","i10":"id1","i11":"id1",
                "h0":"a","h1":"a","v0":"id0","v1":"id1","dg":"a"}})";
  auto fn = write_fixture("twfunctor", functor);
  auto fib = run_cli("check-fibration --functor " + fn + " --cart marked --cocart all");
  CHECK(fib.exit_code == 0);
}
