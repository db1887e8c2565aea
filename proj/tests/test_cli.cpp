#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "x4/cli.hpp"
#include "x4/extent.hpp"

using nlohmann::json;

namespace {

struct Run {
  int code;
  std::string out, err;
  json report() const { return json::parse(out); }
};

Run raw(std::vector<std::string> args, const std::string& payload) {
  std::istringstream in(payload);
  std::ostringstream out, err;
  int code = x4::cli::run(args, in, out, err);
  return {code, out.str(), err.str()};
}

Run run(const std::string& command, const json& payload, std::vector<std::string> extra = {}) {
  extra.insert(extra.begin(), command);
  return raw(extra, payload.dump());
}

const json k3 = {{"vertices", 3},
                 {"edges", {{{"between", {0, 1}}, {"order", 2}}, {{"between", {1, 2}}, {"order", 2}}}},
                 {"invariants", {"0", "-1/2", "1/2"}}};

}  // namespace

TEST_CASE("classify examples") {
  auto r = run("classify", k3);
  CHECK(r.code == 0);
  auto j = r.report();
  CHECK(j["result"] == "wcp-quotient");
  CHECK(j["weights"] == json({4, -1, -1}));
  CHECK(j["exit_code"] == 0);

  json two_loops = {{"vertices", 2}, {"edges", {{{"loop", 0}, {"order", 2}}, {{"loop", 1}, {"order", 3}}}}};
  auto d = run("classify", two_loops);
  CHECK(d.code == 2);
  CHECK(d.report()["tag"] == "fig5-dg");
  CHECK(d.err.find("fig5-dg") != std::string::npos);
}

TEST_CASE("canonical output does not depend on the generator") {
  auto a = run("canon", {{"tuple", {"1/3", "-1/4", "2"}}});
  auto b = run("canon", {{"tuple", {"-1/4", "2", "1/3"}}});
  REQUIRE(a.code == 0);
  REQUIRE(b.code == 0);
  CHECK(a.report()["canonical"] == b.report()["canonical"]);
  // integers are accepted where rationals are expected
  auto c = run("canon", {{"tuple", {0, "1/2", 1}}});
  CHECK(c.code == 0);
  CHECK(c.report()["request"]["payload"]["tuple"] == json({"0", "1/2", "1"}));
}

TEST_CASE("exit codes") {
  CHECK(run("equiv", {{"a", {"0", "1", "2"}}, {"b", {"1", "2", "3"}}}).code == 0);
  CHECK(run("wcp", {{"tuple", {"1/2", "1/2", "1/3"}}}).code == 2);
  CHECK(run("seifert-recognize", {{"genus", 0}, {"fibers", {{2, 1}, {2, -1}}}}).code == 2);
  CHECK(run("seifert-recognize", {{"genus", 0}, {"fibers", {{2, -1}, {2, 1}, {3, 1}}}}).code == 0);
  json spur3 = {{"vertices", 2}, {"edges", {{{"loop", 0}, {"order", 3}}, {{"between", {0, 1}}, {"order", 2}, {"beta", 1}}}}};
  auto k = run("classify", spur3);
  CHECK(k.code == 2);
  CHECK(k.report()["tag"] == "k+1-fixed-points");

  // a certificate threshold of zero cannot be met
  json cover = {{"weights", {1, 1}}, {"samples", 300}, {"q", {2}}, {"cover", {{"branch", {0, 1}}}}};
  auto nc = run("extent", cover, {"--tol", "0"});
  CHECK(nc.code == 3);
  CHECK_FALSE(nc.report()["cover"]["certificate"]["achieved"].get<bool>());
  CHECK(nc.err.find("certificate") != std::string::npos);
  auto ok = run("extent", cover);
  CHECK(ok.code == 0);
  CHECK(ok.report()["cover"]["certificate"]["achieved"].get<bool>());
}

TEST_CASE("schema rejection") {
  std::vector<std::pair<std::string, std::string>> bad = {
      {"canon", "{\"tuple\": [\"1/2\"]}"},
      {"canon", "{\"tuple\": [\"1/0\", \"1\"]}"},
      {"canon", "{\"tuple\": [0.5, 1]}"},
      {"canon", "{\"tuple\": [\"1\", \"2\"], \"extra\": 1}"},
      {"canon", "not json"},
      {"equiv", "{\"a\": [\"0\", \"1\"], \"b\": [\"0\", \"1\", \"2\"]}"},
      {"wcp", "{\"tuple\": [\"0\", \"1\"]}"},
      {"seifert-pi1", "{\"genus\": 0, \"fibers\": [[4, 2]]}"},
      {"seifert-pi1", "{\"genus\": 1, \"fibers\": [[2, 1]]}"},
      {"classify", "{\"vertices\": 2, \"edges\": [{\"between\": [0, 2], \"order\": 2}]}"},
      {"classify", "{\"vertices\": 2, \"edges\": [{\"between\": [0, 1], \"order\": 1}]}"},
      {"classify", "{\"vertices\": 2, \"edges\": [{\"loop\": 0, \"between\": [0, 1], \"order\": 2}]}"},
      {"extent", "{\"weights\": [2, 4]}"},
      {"extent", "{\"weights\": [1, 1], \"samples\": 10}"},
      {"extent", "{\"weights\": [1, 1], \"gamma\": \"cyclic:0\"}"},
      {"extent", "{\"weights\": [1, 2], \"gamma\": \"binary-dihedral:3\"}"},
      {"extent", "{\"weights\": [1, 1], \"samples\": 60, \"q\": [1]}"},
      {"extent", "{\"weights\": [1, 1], \"samples\": 60, \"cover\": {\"branch\": [0, 7]}}"},
      {"check-q", "{\"weights\": [1, 1], \"q\": [2]}"},
  };
  for (auto& [cmd, payload] : bad) {
    CAPTURE(cmd);
    CAPTURE(payload);
    auto r = raw({cmd}, payload);
    CHECK(r.code == 1);
    CHECK(r.out.empty());
    CHECK_FALSE(r.err.empty());
  }
  CHECK(raw({"frobnicate"}, "{}").code == 1);
  CHECK(raw({"canon", "--format", "xml"}, "{\"tuple\": [\"1\", \"2\"]}").code == 1);
}

TEST_CASE("replaying a report reproduces it byte for byte") {
  std::vector<std::pair<std::string, json>> requests = {
      {"canon", {{"tuple", {"2/4", "1", "-3"}}}},
      {"euler", {{"seifert", {{"genus", 0}, {"fibers", {{2, 1}, {3, 1}, {5, 1}}}}}}},
      {"seifert-pi1", {{"genus", 0}, {"fibers", {{2, 1}, {3, -1}}}}},
      {"wcp", {{"tuple", {"0", "-1/3", "1/3"}}}},
      {"classify", k3},
      {"extent", {{"weights", {1, 2}}, {"gamma", "cyclic:3"}, {"samples", 80}, {"seed", 5}}},
  };
  for (auto& [cmd, payload] : requests) {
    CAPTURE(cmd);
    auto first = run(cmd, payload);
    REQUIRE(first.code == 0);
    auto again = raw({"replay"}, first.out);
    CHECK(again.code == first.code);
    CHECK(again.out == first.out);
    // and the normalized request replays to the same thing
    CHECK(raw({"replay"}, first.report()["request"].dump()).out == first.out);
  }

  auto seeded = run("extent", {{"weights", {1, 1}}, {"samples", 60}}, {"--seed", "9", "--samples", "70"});
  REQUIRE(seeded.code == 0);
  CHECK(seeded.report()["request"]["payload"]["seed"] == 9);
  // the two marked circles are added to the random samples
  CHECK(seeded.report()["space"]["size"] == 72);
  CHECK(raw({"replay"}, seeded.out).out == seeded.out);

  auto rejected = run("classify", {{"vertices", 4}});
  CHECK(rejected.code == 2);
  auto again = raw({"replay"}, rejected.out);
  CHECK(again.code == 2);
  CHECK(again.out == rejected.out);

  CHECK(raw({"replay"}, "{\"request\": {\"command\": \"replay\"}}").code == 1);
}

TEST_CASE("text output") {
  auto r = run("wcp", {{"tuple", {"0", "-1/2", "1/2"}}}, {"--format", "text"});
  CHECK(r.code == 0);
  CHECK(r.out.find("weights: [4,-1,-1]") != std::string::npos);
}

TEST_CASE("distance matrix export") {
  std::string path = "x4_cli_export.bin";
  auto r = run("extent", {{"weights", {1, 1}}, {"samples", 60}, {"q", {2}}, {"export", path}});
  REQUIRE(r.code == 0);
  std::ifstream f(path, std::ios::binary);
  std::size_t n = 0;
  auto d = x4::import_distance_matrix(f, n);
  CHECK(n == r.report()["space"]["size"].get<std::size_t>());
  double top = 0;
  for (double x : d) top = std::max(top, x);
  CHECK(top == r.report()["extents"][0]["value"].get<double>());
  f.close();
  std::remove(path.c_str());
}
