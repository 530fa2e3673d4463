#include <sys/wait.h>

#include <cstdio>
#include <functional>
#include <limits>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "edgesym/cli.hpp"
#include "edgesym/io.hpp"

namespace edgesym {
namespace {

const std::string kData = EDGESYM_TEST_DATA;

std::string data(const std::string& name) { return kData + "/" + name; }

struct CliResult {
  int code;
  std::string out;
  std::string err;
};

CliResult run_cli(const std::vector<std::string>& args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

CliResult run_binary(const std::string& args) {
  const std::string command = std::string(EDGESYM_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(command.c_str(), "r");
  std::string out;
  char buf[4096];
  while (std::size_t got = std::fread(buf, 1, sizeof buf, pipe)) out.append(buf, got);
  const int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out, {}};
}

ErrorKind error_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "expected an error";
  return ErrorKind::InvalidArgument;
}

TEST(FormatDouble, FixedSignificantDigits) {
  EXPECT_EQ(format_double(0.0), "0");
  EXPECT_EQ(format_double(-0.0), "0");
  EXPECT_EQ(format_double(2.5), "2.5");
  EXPECT_EQ(format_double(1.0), "1");
  EXPECT_EQ(format_double(0.1), "0.10000000000000001");
  EXPECT_EQ(format_double(std::numeric_limits<double>::infinity()), "null");
}

TEST(CanonicalDump, SortedKeysAndInlineScalars) {
  const json j = {{"b", 1}, {"a", {1.5, 2.0}}, {"c", {{"z", true}, {"y", "s"}}}};
  EXPECT_EQ(canonical_dump(j), "{\n  \"a\": [1.5, 2],\n  \"b\": 1,\n  \"c\": {\n    \"y\": \"s\",\n    \"z\": true\n  }\n}\n");
}

TEST(ParseOff, UnitCube) {
  const auto doc = parse_off_file(data("cube.off"));
  EXPECT_TRUE(doc.warnings.empty());
  const auto& p = doc.polytope;
  ASSERT_EQ(p.size(), 8u);
  std::vector<std::string> expected;
  for (int i = 0; i < 8; ++i) expected.push_back(std::to_string(i));
  EXPECT_EQ(p.labels, expected);
  EXPECT_EQ(p.points[*p.index_of("6")], Vec3(1, 1, 1));
}

TEST(ParseOff, WarningsAndErrors) {
  const auto doc = parse_off_file(data("cube_wrong_faces.off"));
  ASSERT_EQ(doc.warnings.size(), 1u);
  EXPECT_NE(doc.warnings[0].find("declared faces differ"), std::string::npos);

  EXPECT_EQ(error_of([] { parse_off_file(data("triangle.off")); }), ErrorKind::NotFullDimensional);
  try {
    parse_off_file(data("bad_coordinate.off"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::ParseError);
    EXPECT_NE(std::string(e.what()).find("bad_coordinate.off:5:"), std::string::npos) << e.what();
  }
  EXPECT_EQ(error_of([] { parse_off_file(data("nope.off")); }), ErrorKind::IoError);
  std::istringstream wrong_header("PLY\n");
  EXPECT_EQ(error_of([&] { parse_off(wrong_header); }), ErrorKind::ParseError);
  std::istringstream truncated("OFF\n8 0 0\n0 0 0\n");
  EXPECT_EQ(error_of([&] { parse_off(truncated); }), ErrorKind::ParseError);
}

TEST(ParseOff, RoundTrip) {
  const auto p = parse_off_file(data("cube.off")).polytope;
  const std::string text = write_off(p);
  std::istringstream in(text);
  const auto doc = parse_off(in);
  EXPECT_TRUE(doc.warnings.empty());
  EXPECT_EQ(doc.polytope.labels, p.labels);
  EXPECT_EQ(doc.polytope.points, p.points);
  EXPECT_EQ(write_off(doc.polytope), text);
}

TEST(ParseGraphJson, SquareAndErrors) {
  const auto g = parse_graph_json_file(data("square.json"));
  EXPECT_EQ(g.size(), 4u);
  EXPECT_EQ(g.bounded_face_count(), 1);

  const auto again = parse_graph_json(write_graph_json(g));
  EXPECT_EQ(again.points, g.points);
  EXPECT_TRUE(again.map == g.map);
  EXPECT_EQ(write_graph_json(again), write_graph_json(g));

  EXPECT_EQ(error_of([] { parse_graph_json_file(data("crossing.json")); }), ErrorKind::EdgeCrossing);
  try {
    parse_graph_json_file(data("missing_y.json"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("vertices[3].y"), std::string::npos) << e.what();
  }
  EXPECT_EQ(error_of([] { parse_graph_json("{not json"); }), ErrorKind::ParseError);
  EXPECT_EQ(error_of([] { parse_graph_json(R"({"vertices": [], "edges": [["1"]]})"); }), ErrorKind::ParseError);
}

TEST(Report, RoundTripIsStable) {
  const auto r = run_cli({"analyze", "--gallery", "box_1_2_3"});
  ASSERT_EQ(r.code, 0);
  const auto doc = parse_report(r.out);
  EXPECT_EQ(doc["schema_version"], "1.0");
  EXPECT_EQ(write_report(doc), r.out);
}

TEST(Cli, AnalyzeGallery) {
  const auto cube = parse_report(run_cli({"analyze", "--gallery", "cube"}).out);
  EXPECT_EQ(cube["payload"]["counts"]["total"], 48);
  EXPECT_EQ(cube["payload"]["counts"]["edge_preserving"], 48);
  EXPECT_EQ(cube["payload"]["counts"]["realized"], 48);
  EXPECT_EQ(cube["kind"], "symmetry_report");
  EXPECT_EQ(cube["instance"]["vertex_count"], 8);
  EXPECT_EQ(cube["payload"]["records"][0]["sigma"], "()");

  const auto box = parse_report(run_cli({"analyze", "--gallery", "box_1_2_3"}).out);
  EXPECT_EQ(box["payload"]["counts"]["total"], 48);
  EXPECT_EQ(box["payload"]["counts"]["edge_preserving"], 8);
  EXPECT_EQ(box["payload"]["counts"]["realized"], 8);
}

TEST(Cli, AnalyzeFiles) {
  const auto off = run_cli({"analyze", data("cube.off")});
  ASSERT_EQ(off.code, 0) << off.err;
  EXPECT_EQ(parse_report(off.out)["payload"]["counts"]["realized"], 48);

  const auto graph = run_cli({"analyze", data("square.json"), "--format", "text"});
  ASSERT_EQ(graph.code, 0) << graph.err;
  EXPECT_NE(graph.out.find("(1 2 3 4)"), std::string::npos) << graph.out;

  const auto missing = run_cli({"analyze", "missing.off"});
  EXPECT_EQ(missing.code, 2);
  EXPECT_NE(missing.err.find("not found"), std::string::npos);

  const auto bad = run_cli({"analyze", data("crossing.json")});
  EXPECT_EQ(bad.code, 2);
  EXPECT_NE(bad.err.find("EdgeCrossing"), std::string::npos) << bad.err;

  EXPECT_EQ(run_cli({"analyze"}).code, 2);
  EXPECT_EQ(run_cli({"analyze", "--gallery", "cube", "--format", "xml"}).code, 2);
  EXPECT_EQ(run_cli({"analyze", "--gallery", "nothing"}).code, 2);
  EXPECT_EQ(run_cli({"frobnicate"}).code, 2);
}

TEST(Cli, Verify) {
  const auto hex = run_cli({"verify", "--gallery", "hex_prism"});
  EXPECT_EQ(hex.code, 0);
  EXPECT_EQ(parse_report(hex.out)["payload"]["classification"], "theorem-applies-and-holds");

  const auto oblique = run_cli({"verify", "--gallery", "oblique_parallelepiped"});
  EXPECT_EQ(oblique.code, 0);
  EXPECT_EQ(parse_report(oblique.out)["payload"]["classification"], "hypothesis-fails-conclusion-fails");

  const auto random = run_cli({"verify", "--random", "20", "--seed", "42"});
  EXPECT_EQ(random.code, 0);
  EXPECT_EQ(parse_report(random.out)["payload"]["classification"], "theorem-applies-and-holds");

  const auto graph = run_cli({"verify", "--random", "15", "--seed", "3", "--random-graph", "--format", "text"});
  EXPECT_EQ(graph.code, 0);
  EXPECT_NE(graph.out.find("theorem-applies-and-holds"), std::string::npos);

  EXPECT_EQ(run_cli({"verify"}).code, 2);
  EXPECT_EQ(run_cli({"verify", "--random", "3"}).code, 2);
}

TEST(Cli, VerifyBatchKeepsInputOrder) {
  const std::vector<std::string> args{"verify", data("cube.off"), data("square.json"), "--gallery", "frustum"};
  auto serial = args;
  auto parallel = args;
  parallel.insert(parallel.end(), {"--jobs", "3"});
  const auto a = run_cli(serial);
  const auto b = run_cli(parallel);
  EXPECT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
  const auto first = a.out.find(data("cube.off"));
  const auto second = a.out.find(data("square.json"));
  const auto third = a.out.find("gallery:frustum");
  EXPECT_LT(first, second);
  EXPECT_LT(second, third);
}

TEST(Cli, Reconstruct) {
  const auto tri = run_cli({"reconstruct", "--sides", "3,4,5"});
  ASSERT_EQ(tri.code, 0);
  const auto doc = parse_report(tri.out);
  EXPECT_NEAR(doc["payload"]["circumradius"].get<double>(), 2.5, 1e-12);
  EXPECT_EQ(doc["payload"]["vertices"].size(), 3u);

  const auto sq = parse_report(run_cli({"reconstruct", "--sides", "1,1,1,1"}).out);
  EXPECT_NEAR(sq["payload"]["circumradius"].get<double>(), 0.70711, 1e-5);

  const auto bad = run_cli({"reconstruct", "--sides", "10,1,1"});
  EXPECT_EQ(bad.code, 2);
  EXPECT_NE(bad.err.find("PolygonInequality"), std::string::npos) << bad.err;
  EXPECT_EQ(run_cli({"reconstruct", "--sides", "1,x,1"}).code, 2);
  EXPECT_EQ(run_cli({"reconstruct"}).code, 2);
}

TEST(Cli, Tolerance) {
  const auto loose = parse_report(run_cli({"analyze", "--gallery", "cube", "--tol", "10"}).out);
  EXPECT_NEAR(loose["tolerance"]["fit_eps"].get<double>(), 1e-5, 1e-20);
  EXPECT_EQ(run_cli({"analyze", "--gallery", "cube", "--tol", "-1"}).code, 2);
}

TEST(Cli, BinaryIsDeterministic) {
  for (const std::string& args : std::vector<std::string>{"analyze --gallery oblique_parallelepiped", "verify --random 12 --seed 5",
                                 "reconstruct --sides 2,1,1.2", "analyze " + data("square.json")}) {
    const auto a = run_binary(args);
    const auto b = run_binary(args);
    EXPECT_EQ(a.code, 0) << args;
    EXPECT_FALSE(a.out.empty()) << args;
    EXPECT_EQ(a.out, b.out) << args;
    EXPECT_EQ(a.out, run_cli([&] {
                       std::vector<std::string> v;
                       std::istringstream ss(args);
                       for (std::string t; ss >> t;) v.push_back(t);
                       return v;
                     }()).out)
        << args;
  }
  EXPECT_EQ(run_binary("analyze missing.off").code, 2);
}

}  // namespace
}  // namespace edgesym
