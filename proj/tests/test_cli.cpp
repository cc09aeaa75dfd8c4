#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cartanlab/cli.hpp"
#include "helpers.hpp"

using cartanlab::execute;
using Json = nlohmann::ordered_json;

namespace {

struct Run {
  int code = 0;
  std::string out;
  std::string err;
  Json report() const { return Json::parse(out); }
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  Run r;
  r.code = execute(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("cartanlab_test_" + name);
}

}  // namespace

TEST_CASE("validate writes a run report") {
  const Run r = run({"validate", "--spec", testing::data_path("examplekey.json")});
  CHECK(r.code == 0);
  const Json j = r.report();
  CHECK(j["schema"] == "cartanlab/1");
  CHECK(j["command"] == "validate");
  CHECK(j.contains("inputs"));
  CHECK(j.contains("seed"));
  CHECK(j.contains("tool_version"));
  CHECK(j["results"]["genuine"] == true);
}

TEST_CASE("runs are byte-identical for equal seeds") {
  const std::vector<std::string> args{"entropy", "estimate", "--map", "cat", "--samples", "20000", "--seed", "5"};
  const Run a = run(args);
  const Run b = run(args);
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  std::vector<std::string> other = args;
  other.back() = "6";
  CHECK(run(other).out != a.out);
}

TEST_CASE("failed checks exit with 2 and still report") {
  const auto path = temp_file("repeat.json");
  std::ofstream(path) << R"({"generators": [[[3,2,1],[2,2,1],[1,1,1]], [[3,2,1],[2,2,1],[1,1,1]]]})";
  const Run r = run({"validate", "--spec", path.string()});
  CHECK(r.code == 2);
  CHECK(r.report()["results"]["genuine"] == false);
  std::filesystem::remove(path);
}

TEST_CASE("schema errors name the field") {
  const auto path = temp_file("bad.json");
  std::ofstream(path) << R"({"generators": [[[2,1],[1,1]], [[2,1],[1,"x"]]]})";
  const Run r = run({"validate", "--spec", path.string()});
  CHECK(r.code == 1);
  CHECK(r.err.find("generators[1][1][1]") != std::string::npos);
  std::filesystem::remove(path);
}

TEST_CASE("usage errors") {
  CHECK(run({}).code == 1);
  CHECK(run({"nonsense"}).code == 1);
  CHECK(run({"roots", "report", "--n", "42"}).code == 1);
  CHECK(run({"--help"}).code == 0);
}

TEST_CASE("library errors become result entries") {
  const Run r = run({"furstenberg", "gaps", "--a", "2", "--b", "4", "--limit", "1000"});
  CHECK(r.code == 2);
  CHECK(r.report()["results"]["error"]["kind"] == "dependent");
}

TEST_CASE("json and svg outputs") {
  const auto json = temp_file("out.json");
  const auto svg = temp_file("out.svg");
  const Run r = run({"chambers", "--spec", testing::data_path("examplekey.json"), "--json", json.string(), "--svg",
                     svg.string()});
  CHECK(r.code == 0);
  std::ifstream jf(json);
  std::stringstream js;
  js << jf.rdbuf();
  CHECK(js.str() == r.out);
  CHECK(r.report()["results"]["diagram"]["count"] == 6);
  std::ifstream sf(svg);
  std::stringstream ss;
  ss << sf.rdbuf();
  CHECK(ss.str().rfind("<svg", 0) == 0);
  std::filesystem::remove(json);
  std::filesystem::remove(svg);
}

TEST_CASE("subcommands produce results") {
  CHECK(run({"roots", "closure", "--n", "3", "--roots", "all"}).report()["results"]["dim"] == 8);
  CHECK(run({"roots", "schedule", "--functional", "1,0,-1"}).report()["results"]["verdict"] == "Haar");
  CHECK(run({"furstenberg", "orbit", "--a", "2", "--b", "3", "--q", "7"}).code == 0);
  CHECK(run({"shear", "probe", "--measure", "atoms", "--t", "1", "--window", "10"}).report()["results"]["proportional"] ==
        true);
  CHECK(run({"growth", "probe", "--sequence", "polynomial:2", "--count", "100", "--epsilon", "0.05"})
            .report()["results"]["subexponential"] == true);
  CHECK(run({"lyapunov", "spectrum", "--spec", testing::data_path("examplekey.json"), "--steps", "2000"}).code == 0);
  CHECK(run({"orbit", "--spec", testing::data_path("cat_map.json"), "--point", "1/7,2/7"}).code == 0);
  CHECK(run({"suspension", "check", "--spec", testing::data_path("examplekey.json"), "--grid", "4"}).code == 0);
}
