#include <doctest.h>

#include <nlohmann/json.hpp>
#include <filesystem>
#include <fstream>

#include "nonhom/generators.hpp"
#include "nonhom/io.hpp"
#include "nonhom/parallel.hpp"
#include "nonhom/scenario.hpp"

using namespace nonhom;
using nlohmann::ordered_json;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& tag) {
  fs::path p = fs::temp_directory_path() / ("nonhom_test_" + tag);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  return std::string(std::istreambuf_iterator<char>(in), {});
}

ordered_json base_scenario(const std::string& command) {
  ordered_json j;
  j["measure"] = {{"generator", "segment"}, {"params", {{"n_points", 128}}}};
  j["command"] = command;
  j["seed"] = 7;
  j["family"] = {{"max_centers", 32}};
  return j;
}

}  // namespace

TEST_CASE("scenario commands run end to end") {
  struct Case {
    std::string command;
    ordered_json extra;
  };
  std::vector<Case> cases = {
      {"growth-check", {}},
      {"k-sweep", ordered_json{{"params", {{"pairs", 40}}}}},
      {"rbmo", ordered_json{{"function", {{"builtin", "gaussian"}}}}},
      {"jn-tail", ordered_json{{"function", {{"builtin", "gaussian"}}}}},
      {"maximal", ordered_json{{"function", {{"builtin", "gaussian"}}}}},
      {"t1", ordered_json{{"params", {{"max_centers", 4}}}}},
      {"commutator", ordered_json{{"params", {{"draws", 2}}}}},
      {"equivalence-sweep",
       ordered_json{{"params", {{"draws", 4}, {"n_points", 48}}}}},
  };
  for (const auto& c : cases) {
    CAPTURE(c.command);
    ordered_json cfg = base_scenario(c.command);
    for (auto it = c.extra.begin(); it != c.extra.end(); ++it) cfg[it.key()] = *it;
    fs::path out = fresh_dir(c.command);
    int code = run_scenario(Scenario::from_json(cfg), out);
    CHECK(code == 0);
    CHECK(fs::exists(out / "report.json"));
    CHECK(fs::exists(out / "run.log"));
    ordered_json rep;
    std::ifstream(out / "report.json") >> rep;
    CHECK(rep.contains("inputs"));
    CHECK(rep.contains("outputs"));
    CHECK(rep.contains("calibration"));
  }
}

TEST_CASE("growth check on the unit-density segment") {
  ordered_json cfg;
  cfg["measure"] = {{"generator", "segment"}, {"params", {{"n_points", 1024}}}};
  cfg["command"] = "growth-check";
  cfg["seed"] = 1;
  fs::path out = fresh_dir("growth1024");
  REQUIRE(run_scenario(Scenario::from_json(cfg), out) == 0);
  ordered_json rep;
  std::ifstream(out / "report.json") >> rep;
  double c0 = rep["outputs"]["c0"].get<double>();
  CHECK(c0 >= 1.0);
  CHECK(c0 <= 3.0);
  CHECK(rep["outputs"]["certificate_violations"].get<int>() == 0);
}

TEST_CASE("cz with a level above the sup reports zero blocks") {
  ordered_json cfg;
  cfg["measure"] = {{"generator", "cantor4"}, {"params", {{"generation", 3}}}};
  cfg["function"] = {{"builtin", "bumps"},
                     {"params", {{"seed", 2}, {"amplitude", 1.0}}}};
  cfg["command"] = "cz";
  cfg["params"] = {{"p", 2.0}, {"lambda", 1000.0}};
  cfg["seed"] = 1;
  fs::path out = fresh_dir("cz_high");
  REQUIRE(run_scenario(Scenario::from_json(cfg), out) == 0);
  ordered_json rep;
  std::ifstream(out / "report.json") >> rep;
  CHECK(rep["outputs"]["cz"]["stopping_cubes"].size() == 0);
  CHECK(rep["outputs"]["cz"]["certificates"]["h1_upper"].get<double>() == 0.0);
}

TEST_CASE("cz scenario on the cantor measure") {
  ordered_json cfg;
  cfg["measure"] = {{"generator", "cantor4"}, {"params", {{"generation", 4}}}};
  cfg["function"] = {{"builtin", "bumps"},
                     {"params",
                      {{"seed", 5}, {"n_bumps", 2}, {"sigma_min", 0.02},
                       {"sigma_max", 0.04}, {"amplitude", 20.0}}}};
  cfg["command"] = "cz";
  cfg["params"] = {{"p", 2.0}, {"lambda_factor", 1.5}};
  cfg["seed"] = 11;
  fs::path out = fresh_dir("cz");
  CHECK(run_scenario(Scenario::from_json(cfg), out) == 0);
  ordered_json rep;
  std::ifstream(out / "report.json") >> rep;
  CHECK(rep["outputs"]["cz"]["certificates"]["blocks_valid"].get<bool>());
}

TEST_CASE("curvature scenario respects the cube cap") {
  ordered_json cfg;
  cfg["measure"] = {{"generator", "cantor4"}, {"params", {{"generation", 4}}}};
  cfg["command"] = "curvature";
  fs::path out = fresh_dir("curv");
  CHECK(run_scenario(Scenario::from_json(cfg), out) == 0);

  cfg["measure"]["params"]["generation"] = 5;  // 1024 points > default cap
  fs::path out2 = fresh_dir("curv2");
  CHECK(run_scenario(Scenario::from_json(cfg), out2) == 1);
  cfg["params"] = {{"max_points", 1200}};
  fs::path out3 = fresh_dir("curv3");
  CHECK(run_scenario(Scenario::from_json(cfg), out3) == 0);
}

TEST_CASE("input errors exit with code 1") {
  ordered_json cfg;
  cfg["measure"] = {{"generator", "nonsense"}};
  cfg["command"] = "growth-check";
  CHECK(run_scenario(Scenario::from_json(cfg), fresh_dir("err")) == 1);

  ordered_json cfg2 = base_scenario("rbmo");  // missing function
  CHECK(run_scenario(Scenario::from_json(cfg2), fresh_dir("err2")) == 1);
}

TEST_CASE("reports are byte-identical across thread counts") {
  for (const char* command : {"rbmo", "t1", "equivalence-sweep"}) {
    CAPTURE(command);
    ordered_json cfg = base_scenario(command);
    if (std::string(command) == "rbmo")
      cfg["function"] = {{"builtin", "gaussian"}};
    if (std::string(command) == "t1") cfg["params"] = {{"max_centers", 4}};
    if (std::string(command) == "equivalence-sweep")
      cfg["params"] = {{"draws", 4}, {"n_points", 48}};

    std::vector<std::string> reports;
    for (int threads : {1, 4, 8}) {
      parallel::set_max_threads(threads);
      fs::path out = fresh_dir(std::string(command) + "_t" + std::to_string(threads));
      REQUIRE(run_scenario(Scenario::from_json(cfg), out) == 0);
      reports.push_back(slurp(out / "report.json"));
    }
    parallel::set_max_threads(0);
    CHECK(reports[0] == reports[1]);
    CHECK(reports[0] == reports[2]);
  }
}

TEST_CASE("measure and function files round-trip through the loader") {
  DiscreteMeasure mu = make_segment(16);
  fs::path dir = fresh_dir("io");
  io::save_measure(mu, 1, dir / "m.json");
  io::MeasureFile mf = io::load_measure(dir / "m.json");
  CHECK(mf.n == 1);
  CHECK(mf.mu.size() == 16);
  CHECK((mf.mu.points() - mu.points()).cwiseAbs().maxCoeff() == 0.0);
  CHECK(mf.mu.r_min() == mu.r_min());

  ordered_json f = {{"values", {1.0, 2.0, 3.0}}};
  io::write_json(dir / "f.json", f);
  CHECK_THROWS_AS(io::load_real_function(dir / "f.json", 16), Error);
  RealFunction v = io::load_real_function(dir / "f.json", 3);
  CHECK(v[2] == 3.0);

  ordered_json cf = {{"re", {1.0, 0.0}}, {"im", {0.0, -1.0}}};
  io::write_json(dir / "cf.json", cf);
  ComplexFunction cv = io::load_complex_function(dir / "cf.json", 2);
  CHECK(cv[1] == std::complex<double>(0.0, -1.0));
}
