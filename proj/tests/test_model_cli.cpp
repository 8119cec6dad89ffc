#include <gtest/gtest.h>

#include "json.hpp"
#include "qtoric/model.hpp"
#include "qtoric/run.hpp"

using namespace qtoric;
using Json = nlohmann::ordered_json;

namespace {

const char* kModel = R"(# small model
[bounds]
degree = 4

[semigroups]
A1: gens [[1,0],[1,1],[1,2]]
N23: gens [[2],[3]]

[cocycles]
alpha: dim 2; params [q]; bichar q [[0,1],[0,0]]
beta: dim 2; params [q]; bichar q [[0,0],[-1,0]]
plane: dim 2; params [q]; qmatrix q [[0,1],[-1,0]]
shifted: dim 2; params [q]; qmatrix q [[0,1],[-1,0]];
  quad q [[1/2,0],[0,0]]; linear q [0,-1]
q3: dim 3; params [q]; qmatrix q [[0,1,2],[-1,0,1],[-2,-1,0]]

[lattices]
diamond: elements [bot,a,b,top]; covers [[bot,a],[bot,b],[a,top],[b,top]]
V: poset 3; less [[0,1],[0,2]]

[elements]
x: X[1,0] + q*X[0,1]
y: 2*q^-1*X[1,1]
zero: 0; dim 2
)";

Outcome run(const std::string& command, std::vector<std::string> names,
            const std::string& model = kModel, std::optional<std::size_t> bound = std::nullopt) {
  Invocation inv;
  inv.command = command;
  inv.names = std::move(names);
  inv.model_text = model;
  inv.bound = bound;
  return execute(inv);
}

Json report(const Outcome& o) { return Json::parse(o.report); }

void expect_parse_error(const std::string& text, std::size_t line, const std::string& fragment) {
  try {
    parse_model(text);
    FAIL() << "expected a parse error for:\n" << text;
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), line) << e.what();
    EXPECT_NE(std::string(e.what()).find(fragment), std::string::npos) << e.what();
  }
}

}  // namespace

TEST(ParseModel, MinimalSemigroup) {
  const ModelFile m = parse_model("[semigroups]\nA1: gens [[1,0],[1,1],[1,2]]\n");
  ASSERT_EQ(m.semigroups.size(), 1u);
  EXPECT_EQ(m.semigroups[0].name, "A1");
  EXPECT_EQ(m.semigroups[0].dim, 2u);
  EXPECT_EQ(m.semigroups[0].generators.size(), 3u);
}

TEST(ParseModel, FullModel) {
  const ModelFile m = parse_model(kModel);
  EXPECT_EQ(m.degree_bound, 4u);
  EXPECT_EQ(m.cocycles.size(), 5u);
  const auto* s = m.find_cocycle("shifted");
  ASSERT_TRUE(s);
  ASSERT_TRUE(s->cocycle.coboundary());
  EXPECT_EQ(s->cocycle.coboundary()->quad()[0][0][0], Rational(1, 2));
  EXPECT_EQ(m.find_cocycle("plane")->cocycle.bichar()[0], (IntMatrix{{0, 0}, {-1, 0}}));
  const auto* v = m.find_lattice("V");
  ASSERT_TRUE(v && v->poset);
  EXPECT_EQ(build_lattice(*v).size(), 5u);
  EXPECT_EQ(m.find_element("y")->element.to_string(), "2*q^-1*X^(1,1)");
  EXPECT_TRUE(m.find_element("zero")->element.is_zero());
}

TEST(ParseModel, Scalars) {
  EXPECT_EQ(parse_scalar("2*q^-1").to_string(), "2*q^-1");
  EXPECT_EQ(parse_scalar("-q").to_string(), "-1*q");
  EXPECT_EQ(parse_scalar("q^(1/2)").to_string(), "q^(1/2)");
  EXPECT_EQ(parse_scalar("3/4").to_string(), "3/4");
}

TEST(ParseModel, PositionedErrors) {
  expect_parse_error("[semigroups]\nA: gens [[1,0],[1]]\n", 2, "");
  expect_parse_error("[cocycles]\nbad: dim 2; params [q]; bichar q [[0,1,0],[0,0,0]]\n", 2, "bad");
  expect_parse_error("[nope]\n", 1, "nope");
  expect_parse_error("A: gens [[1]]\n", 1, "");
  expect_parse_error("[semigroups]\nA: gens [[1]]\nA: gens [[2]]\n", 3, "A");
  expect_parse_error("[lattices]\nL: elements [a,b]; covers [[a,c]]\n", 2, "c");
  expect_parse_error("[cocycles]\nc: dim 2; params [q]; qmatrix q [[0,1],[1,0]]\n", 2, "c");
  expect_parse_error("[bounds]\ndegree = x\n", 2, "");
  expect_parse_error("[semigroups]\n  A: gens [[1]]\n", 2, "continuation");
}

TEST(Execute, DanglingReferencesAndUsage) {
  EXPECT_EQ(run("twist-check", {"A1", "missing"}).exit_code, kExitParse);
  EXPECT_EQ(run("frobnicate", {}).exit_code, kExitParse);
  EXPECT_EQ(run("normal", {}).exit_code, kExitParse);
  const Json r = report(run("normal", {"nope"}));
  EXPECT_EQ(r["error"]["kind"], "reference");
}

TEST(Execute, ExitCodesForErrorClasses) {
  EXPECT_EQ(run("normal", {"A1"}, "[semigroups]\nA1 gens\n").exit_code, kExitParse);
  const Outcome pre = run("decompose", {"N23"});
  EXPECT_EQ(pre.exit_code, kExitPrecondition);
  EXPECT_EQ(report(pre)["error"]["certificate"]["g"], "(1)");
  Invocation inv{"cohomologous", {"alpha", "beta"}, kModel, std::nullopt, "", "witness"};
  EXPECT_EQ(execute(inv).exit_code, kExitVerification);
  inv.fault = "bogus";
  EXPECT_EQ(execute(inv).exit_code, kExitParse);
}

TEST(Execute, RegularityReport) {
  const Outcome o = run("regularity", {"A1"});
  ASSERT_EQ(o.exit_code, kExitOk) << o.report;
  const Json r = report(o)["results"];
  EXPECT_EQ(r["normal"]["value"], true);
  EXPECT_EQ(r["gorenstein"]["value"], "yes");
  EXPECT_EQ(r["gorenstein_witness"]["value"], Json::array({1, 1}));
  EXPECT_EQ(r["regular"]["value"], false);
  EXPECT_EQ(r["maximal_order"]["value"], true);
}

TEST(Execute, NormalAndCohomologous) {
  Json r = report(run("normal", {"N23"}))["results"];
  EXPECT_EQ(r["normal"]["value"], false);
  EXPECT_EQ(r["witness"]["value"]["g"], Json::array({1}));
  EXPECT_EQ(r["witness"]["value"]["p"], 2);

  r = report(run("cohomologous", {"alpha", "beta"}))["results"];
  EXPECT_EQ(r["cohomologous"]["value"], true);
  EXPECT_EQ(r["witness"]["value"], "q^(-s0*s1)");
  EXPECT_EQ(r["witness"]["box_check"]["pairs"], 625);
}

TEST(Execute, BoundsAreRecorded) {
  Json r = report(run("decompose", {"A1"}));
  EXPECT_EQ(r["bounds"]["degree"], 4);
  EXPECT_EQ(r["bounds"]["degree_source"], "model");
  EXPECT_EQ(r["results"]["intersection_equals_semigroup"]["degree"], 4);
  r = report(run("decompose", {"A1"}, kModel, 3));
  EXPECT_EQ(r["bounds"]["degree"], 3);
  EXPECT_EQ(r["bounds"]["degree_source"], "flag");
  r = report(run("decompose", {"A1"}, "[semigroups]\nA1: gens [[1,0],[1,1],[1,2]]\n"));
  EXPECT_EQ(r["bounds"]["degree"], 6);
  EXPECT_EQ(r["bounds"]["degree_source"], "default");
}

TEST(Execute, EveryClaimIsLabeled) {
  const std::vector<std::pair<std::string, std::vector<std::string>>> cmds = {
      {"analyze", {"A1"}},          {"facets", {"A1"}},
      {"decompose", {"A1"}},        {"embed-torus", {"A1", "plane"}},
      {"twist-check", {"A1", "shifted"}}, {"multiply", {"plane", "x", "y"}},
      {"lattice", {"diamond"}},     {"straighten", {"diamond", "q3", "b", "a"}}};
  for (const auto& [cmd, names] : cmds) {
    const Outcome o = run(cmd, names);
    ASSERT_EQ(o.exit_code, kExitOk) << cmd << "\n" << o.report;
    std::function<void(const Json&)> walk = [&](const Json& j) {
      if (j.is_object()) {
        if (j.contains("status")) {
          const std::string st = j["status"];
          EXPECT_TRUE(st == "exact" || st == "verified") << cmd;
          if (st == "verified") EXPECT_TRUE(j.contains("degree") || j.contains("box")) << cmd << j.dump();
        }
        for (const auto& [k, v] : j.items()) walk(v);
      } else if (j.is_array()) {
        for (const auto& v : j) walk(v);
      }
    };
    walk(report(o)["results"]);
  }
}

TEST(Execute, Deterministic) {
  for (const auto& cmd : command_names()) {
    std::vector<std::string> names = {"A1"};
    if (cmd == "embed-torus" || cmd == "twist-check") names = {"A1", "plane"};
    if (cmd == "cohomologous") names = {"alpha", "plane"};
    if (cmd == "multiply") names = {"plane", "x", "y"};
    if (cmd == "straighten") names = {"diamond", "q3", "b", "a"};
    if (cmd == "lattice") names = {"V"};
    const Outcome a = run(cmd, names);
    const Outcome b = run(cmd, names);
    EXPECT_EQ(a.report, b.report) << cmd;
    EXPECT_EQ(a.exit_code, kExitOk) << cmd << "\n" << a.report;
  }
}
