#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "feller/generators.hpp"
#include "feller/io.hpp"
#include "feller/report.hpp"

using namespace feller;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::filesystem::path temp_dir() {
  auto dir = std::filesystem::temp_directory_path() / "feller_lab_tests";
  std::filesystem::create_directories(dir);
  return dir;
}

// label-level equality: same named vertices, measures, frontier flags and
// weighted edges, independent of index numbering
bool graphs_identical(const WeightedGraph& a, const WeightedGraph& b) {
  if (a.size() != b.size()) return false;
  for (Vertex v = 0; v < a.size(); ++v) {
    auto bv = b.find_vertex(a.name(v));
    if (!bv) return false;
    if (a.measure(v) != b.measure(*bv)) return false;
    if (a.is_frontier(v) != b.is_frontier(*bv)) return false;
    auto na = a.neighbors(v), nb = b.neighbors(*bv);
    if (na.size() != nb.size()) return false;
    std::map<std::string, double> wa, wb;
    for (auto [w, x] : na) wa[a.name(w)] = x;
    for (auto [w, x] : nb) wb[b.name(w)] = x;
    if (wa != wb) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("graph files round-trip bit-exactly") {
  auto dir = temp_dir();
  for (const auto& g : {gen_model_example(1.0, 32),
                        gen_glued_line(2.0, 24, GluedMeasureRule::Feller),
                        gen_ternary_anti_example(1.0, 4)}) {
    std::string path = (dir / "roundtrip.graph").string();
    write_graph_file(g, path);
    WeightedGraph back = parse_graph_file(path);
    CHECK(graphs_identical(g, back));
  }
}

TEST_CASE("model files round-trip bit-exactly") {
  auto dir = temp_dir();
  ModelGraph mg = gen_ternary_radial(1.0, 16);
  std::string path = (dir / "roundtrip.model").string();
  write_model_file(mg, path);
  ModelGraph back = parse_model_file(path);
  REQUIRE(back.length == mg.length);
  for (int r = 0; r < mg.length; ++r) {
    CHECK(back.outer_curv[r] == mg.outer_curv[r]);
    CHECK(back.sphere_measure[r] == mg.sphere_measure[r]);
    CHECK(back.boundary_area[r] == mg.boundary_area[r]);
    CHECK(back.inner_curv[r] == mg.inner_curv[r]);
  }
  REQUIRE(back.tails.size() == mg.tails.size());
  for (const auto& [id, ta] : mg.tails) {
    REQUIRE(back.tails.count(id));
    CHECK(back.tails.at(id).kind == ta.kind);
    CHECK(back.tails.at(id).exponent == ta.exponent);
  }
}

TEST_CASE("parser rejects malformed input") {
  auto parse_text = [](const std::string& text) {
    std::istringstream in(text);
    return parse_graph(in, "inline");
  };
  CHECK_THROWS_WITH_AS(parse_text("Q 1 2 3\n"), doctest::Contains("ParseError"),
                       Error);
  CHECK_THROWS_AS(parse_text("E a b notanumber\nM a 1\nM b 1\n"), Error);
  CHECK_THROWS_AS(parse_text("E a b 1.0\nM a 1\n"), Error);          // missing measure
  CHECK_THROWS_AS(parse_text("E a b 1.0\nM a 1\nM a 2\nM b 1\n"), Error);
  CHECK_THROWS_AS(parse_text("E a b 1.0\nM a 1\nM b 1\nF zz\n"), Error);

  auto parse_mtext = [](const std::string& text) {
    std::istringstream in(text);
    return parse_model(in, "inline");
  };
  CHECK_THROWS_AS(parse_mtext("R 0 1 1\nR 2 1 1\nR 3 1 1\n"), Error);  // gap
  CHECK_THROWS_AS(parse_mtext("R 0 1 1\nR 0 1 1\nR 1 1 1\n"), Error);  // duplicate
  CHECK_THROWS_AS(parse_mtext("R 0 1 1\nR 1 1 1\nR 2 1 1\nTAIL bogus power 2\n"),
                  Error);
  CHECK_NOTHROW(parse_mtext("# comment\nR 0 1 1\nR 1 1 1\nR 2 1 1\n"));
}

TEST_CASE("comments and ordering do not matter in graph files") {
  std::istringstream in(
      "# header\n"
      "M b 2.0\n"
      "E a b 1.5\n"
      "F b\n"
      "M a 1.0\n");
  WeightedGraph g = parse_graph(in, "inline");
  CHECK(g.size() == 2);
  CHECK(g.measure(g.vertex("b")) == 2.0);
  CHECK(g.is_frontier(g.vertex("b")));
  CHECK(g.neighbors(g.vertex("a"))[0].second == 1.5);
}

TEST_CASE("generated files are deterministic and reparse to the same object") {
  auto dir = temp_dir();
  auto p1 = (dir / "gen1").string();
  auto p2 = (dir / "gen2").string();
  for (const char* id : {"unit-line", "model-example", "binary-tree-unit",
                         "ternary-anti-example", "glued-line"}) {
    int size = std::string(id).find("tree") != std::string::npos ||
                       std::string(id) == "ternary-anti-example"
                   ? 5
                   : 24;
    GeneratedFiles f1 = generate_example(id, size, 1.0, 2.0, "feller", p1);
    GeneratedFiles f2 = generate_example(id, size, 1.0, 2.0, "feller", p2);
    CHECK(slurp(f1.graph_path) == slurp(f2.graph_path));
    if (!f1.model_path.empty()) CHECK(slurp(f1.model_path) == slurp(f2.model_path));

    // the canonical written form is a fixed point of parse-then-write
    WeightedGraph parsed = parse_graph_file(f1.graph_path);
    CHECK(graphs_identical(parsed, parse_graph_file(f2.graph_path)));
    std::string rewritten = (dir / "rewrite.graph").string();
    write_graph_file(parsed, rewritten);
    WeightedGraph reparsed = parse_graph_file(rewritten);
    std::string rewritten2 = (dir / "rewrite2.graph").string();
    write_graph_file(reparsed, rewritten2);
    CHECK(slurp(rewritten) == slurp(rewritten2));
  }
  CHECK_THROWS_AS(generate_example("mystery", 16, 1.0, 2.0, "feller", p1), Error);
}

TEST_CASE("format_double round-trips doubles exactly") {
  for (double x : {1.0, 1.0 / 3.0, 6.02e23, 1e-300, 0.1 + 0.2, 123456.789}) {
    CHECK(std::stod(format_double(x)) == x);
  }
}

TEST_CASE("reports serialize deterministically") {
  ModelGraph mg = gen_model_example_radial(1.0, 64);
  auto build = [&] {
    Report rep;
    rep.command = "classify-model";
    rep.config["input"] = "x.model";
    rep.results["feller"] = to_json(classify_feller(mg));
    rep.results["sc"] = to_json(classify_stochastic_completeness(mg));
    rep.provenance["length"] = mg.length;
    return rep.to_json();
  };
  std::string a = build(), b = build();
  CHECK(a == b);
  CHECK(a.find("\"grade\": \"certified\"") != std::string::npos);
}

TEST_CASE("the CLI binary is deterministic across runs") {
  auto dir = temp_dir();
  std::string bin = FELLER_LAB_BIN;
  auto run = [&](const std::string& args, const std::string& outfile) {
    std::string cmd = bin + " " + args + " > " + outfile + " 2>/dev/null";
    REQUIRE(std::system(cmd.c_str()) == 0);
    return slurp(outfile);
  };
  std::string g1 = (dir / "cli1").string();
  std::string o1 = (dir / "out1.json").string(), o2 = (dir / "out2.json").string();
  run("generate --example model-example --size 32 --prefix " + g1, o1);
  std::string model_first = slurp(g1 + ".model");
  std::string graph_first = slurp(g1 + ".graph");
  run("generate --example model-example --size 32 --prefix " + g1, o2);
  CHECK(model_first == slurp(g1 + ".model"));
  CHECK(graph_first == slurp(g1 + ".graph"));

  std::string c1 = run("classify-model --input " + g1 + ".model", o1);
  std::string c2 = run("classify-model --input " + g1 + ".model", o2);
  CHECK(c1 == c2);
  CHECK(!c1.empty());
}
