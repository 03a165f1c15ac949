#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "doctest.h"

#include "catalog.hpp"
#include "commands.hpp"
#include "report.hpp"
#include "scenario.hpp"
#include "colombeau/errors.hpp"

using namespace colombeau;
using namespace colombeau::cli;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("colombeau_cli_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

Json read_json(const fs::path& p) { return Json::parse(slurp(p)); }

int run_tool(const std::string& args) {
  const std::string cmd = std::string(COLOMBEAU_EXE) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string scenario_file(const std::string& name) { return std::string(COLOMBEAU_SCENARIOS) + "/" + name + ".json"; }

}  // namespace

TEST_CASE("number formatting and hashing") {
  CHECK(format_double(0.1) == "0.10000000000000001");
  CHECK(format_double(1.0) == "1");
  CHECK(format_double(NAN) == "null");
  CHECK(format_double(-INFINITY) == "null");
  CHECK(dump(Json{{"b", 1.5}, {"a", {1, 2}}}) == "{\n  \"a\": [\n    1,\n    2\n  ],\n  \"b\": 1.5\n}\n");
  CHECK(hex64(fnv1a("")) == "cbf29ce484222325");
  CHECK(hex64(fnv1a("a")) == "af63dc4c8601ec8c");
}

TEST_CASE("CSV cells") {
  CsvTable t({"a", "b"});
  t.add({CsvTable::cell(1.0), CsvTable::cell("x,y")});
  CHECK(t.str() == "a,b\n1,\"x,y\"\n");
  CHECK_THROWS_AS(t.add({"only one"}), ShapeError);
}

TEST_CASE("catalog errors name the offending key") {
  const EpsilonGrid grid = EpsilonGrid::geometric(6);
  try {
    make_net(Json{{"family", "sinc"}}, grid, 1, "classify.net");
    FAIL("expected a configuration error");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("classify.net.family") != std::string::npos);
    CHECK(std::string(e.what()).find("sinc") != std::string::npos);
  }
  try {
    make_net(Json{{"family", "gaussian"}, {"rtae", 1.0}}, grid, 1, "x");
    FAIL("expected a configuration error");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("x.rtae") != std::string::npos);
  }
  CHECK_THROWS_AS(make_net(Json{{"family", "power_net"}}, grid, 1, "x"), ConfigError);
  CHECK_THROWS_AS(make_operator(Json{{"family", "gaussian_kernel"}, {"rate", -1.0}}, grid, 1, {}, "k"), ConfigError);
  CHECK_THROWS_AS(make_weight(Json{{"family", "gevrey"}, {"s", 0.5}}, "M"), ConfigError);
}

TEST_CASE("catalog families evaluate as documented") {
  const EpsilonGrid grid = EpsilonGrid::geometric(6);
  const FunctionNet moll = make_net(Json{{"family", "mollifier"}}, grid, 1, "n");
  CHECK(std::abs(moll.field(0.25)({0.0}) - 4.0 / std::sqrt(M_PI)) < 1e-14);
  const FunctionNet neg = make_net(Json{{"family", "negligible_net"}, {"c", 2.0}}, grid, 1, "n");
  CHECK(neg.field(0.5)({3.0}) == std::exp(-4.0));
  const FunctionNet pw = make_net(Json{{"family", "power_net"}, {"power", 2}, {"coefficients", {1, 1}}}, grid, 1, "n");
  CHECK(pw.field(0.5)({2.0}) == 20.0);
  const FunctionNet hs = make_net(Json{{"family", "hermite_series"}, {"index", 2}}, grid, 1, "n");
  CHECK(std::abs(hs.field(0.5)({0.3}) - hermite_function(2, 0.3)) < 1e-15);
  const GeneralizedOperator mono = make_operator(Json{{"family", "monomial_kernel"}, {"x_power", 1}, {"y_power", 3}}, grid, 1, {}, "k");
  CHECK(mono.kernel()(0.5, Point{2.0}, Point{3.0}) == 54.0);
  CHECK(mono.kernel().kernel(0.5).derivative(MultiIndex{1, 2}, Point{2.0, 3.0}) == 18.0);
  const GeneralizedOperator r1 = make_operator(Json{{"family", "rank_one_kernel"}, {"left", 1}, {"right", 2}}, grid, 1, {}, "k");
  CHECK(std::abs(r1.kernel()(0.5, Point{0.4}, Point{-0.2}) - hermite_function(1, 0.4) * hermite_function(2, -0.2)) < 1e-15);
}

TEST_CASE("scenario parsing, overrides and hash") {
  const Json doc = {{"name", "s"}, {"grid", {{"levels", 10}}}, {"classify", {{"net", {{"family", "mollifier"}}}}}};
  const Scenario a = parse_scenario(doc, ".", {});
  CHECK(a.grid.size() == 10);
  const Scenario b = parse_scenario(doc, ".", Overrides{std::nullopt, 6, std::nullopt});
  CHECK(b.grid.size() == 6);
  CHECK(a.hash != b.hash);
  CHECK(parse_scenario(doc, ".", {}).hash == a.hash);
  const Scenario c = parse_scenario(doc, ".", Overrides{32, std::nullopt, 1e-9});
  CHECK(c.quadrature.nodes == 32);
  CHECK(c.document["tol"] == 1e-9);
  CHECK_THROWS_AS(parse_scenario(Json{{"nmae", "typo"}}, ".", {}), ConfigError);
  CHECK_THROWS_AS(parse_scenario(Json{{"grid", {{"values", {0.5, 0.6, 0.1, 0.05}}}}}, ".", {}), ConfigError);
  CHECK_THROWS_AS(a.section("compose"), ConfigError);
}

TEST_CASE("random points are reproducible and in range") {
  const auto p = random_points(7, 50, 2, 3.0);
  CHECK(p == random_points(7, 50, 2, 3.0));
  CHECK(p != random_points(8, 50, 2, 3.0));
  for (const auto& x : p) {
    for (double c : x) CHECK(std::abs(c) <= 3.0);
  }
}

TEST_CASE("classify command writes a verdict and an ε-series") {
  const fs::path out = scratch("classify");
  const Scenario s = load_scenario(scenario_file("mollifier"), {});
  const CommandOutcome o = run_command("classify", s, out);
  CHECK(o.pass);
  const Json report = read_json(out / "classify.json");
  CHECK(report["result"]["verdict"] == "moderate(1)");
  CHECK(report["scenario_hash"] == s.hash);
  CHECK(report["version"] == std::string(kToolVersion));
  const std::string csv = slurp(out / "classify_series.csv");
  CHECK(csv.rfind("eps,seminorm\n0.5,", 0) == 0);

  const Scenario zero = load_scenario(scenario_file("zero_net"), {});
  CHECK(run_command("classify", zero, out).pass);
  const Json z = read_json(out / "classify.json");
  CHECK(z["result"]["verdict"] == "negligible");
  for (const auto& v : z["result"]["report"]["values"]) CHECK(v == 0.0);
}

TEST_CASE("hermite command on h_3 and the zero input") {
  const fs::path out = scratch("hermite");
  CHECK(run_command("hermite", load_scenario(scenario_file("hermite_h3"), {}), out).pass);
  const Json h3 = read_json(out / "hermite.json");
  const auto b = h3["result"]["coefficients"];
  for (std::size_t k = 0; k < b.size(); ++k) CHECK(std::abs(b[k].get<double>() - (k == 3 ? 1.0 : 0.0)) < 1e-10);
  CHECK(run_command("hermite", load_scenario(scenario_file("hermite_zero"), {}), out).pass);
  const Json z = read_json(out / "hermite.json");
  for (const auto& c : z["result"]["inclusion"]["log_constants"]) CHECK(c.is_null());
}

TEST_CASE("coefficient files report parse positions") {
  const fs::path dir = scratch("file");
  {
    std::ofstream f(dir / "coeffs.json");
    f << "[1.0,\n 2.0,\n oops]\n";
  }
  try {
    make_hermite_source(Json{{"file", "coeffs.json"}}, 8, EpsilonGrid::geometric(6), dir, "hermite.source");
    FAIL("expected a configuration error");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("coeffs.json:3:") != std::string::npos);
  }
  {
    std::ofstream f(dir / "good.json");
    f << "[1.0, 0.5, 0.25]";
  }
  const HermiteSource s = make_hermite_source(Json{{"file", "good.json"}}, 8, EpsilonGrid::geometric(6), dir, "h");
  CHECK(s.expansion.coefficients == std::vector<double>{1.0, 0.5, 0.25});
}

TEST_CASE("exit codes") {
  const fs::path out = scratch("exit");
  CHECK(run_tool("classify --scenario " + scenario_file("negligible") + " --out " + out.string()) == 0);
  CHECK(run_tool("expmap --scenario " + scenario_file("exp_gaussian") + " --out " + out.string()) == 1);
  CHECK(run_tool("compose --scenario " + scenario_file("mollifier") + " --out " + out.string()) == 2);
  CHECK(run_tool("classify --out " + out.string()) == 2);
  CHECK(run_tool("frobnicate") == 2);
  {
    std::ofstream f(out / "bad.json");
    f << "{\"classify\": {\"net\": {\"family\": \"nope\"}}}";
  }
  CHECK(run_tool("classify --scenario " + (out / "bad.json").string() + " --out " + out.string()) == 2);
  // An unwritable output location is an internal failure, not a check failure.
  {
    std::ofstream f(out / "not_a_dir");
    f << "x";
  }
  CHECK(run_tool("classify --scenario " + scenario_file("negligible") + " --out " + (out / "not_a_dir" / "sub").string()) == 3);
}

TEST_CASE("zero-kernel exponential keeps the identity row") {
  const fs::path out = scratch("expzero");
  CHECK(run_command("expmap", load_scenario(scenario_file("exp_zero"), {}), out).pass);
  const std::string csv = slurp(out / "expmap_terms.csv");
  CHECK(csv.find("0.5,0,0,1,nan\n") != std::string::npos);
}
