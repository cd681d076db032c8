#include <CLI11.hpp>
#include <cstdint>
#include <string>

#include "nonhom/parallel.hpp"
#include "nonhom/scenario.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Scenario runner for the non-homogeneous analysis toolkit"};
  std::string scenario_path;
  std::string out_dir = "out";
  int threads = 0;
  std::uint64_t seed = 0;
  bool have_seed = false;
  app.add_option("--scenario", scenario_path, "Scenario JSON file")->required();
  app.add_option("--out", out_dir, "Output directory");
  app.add_option("--threads", threads, "Worker cap (0 = hardware)");
  app.add_option("--seed", seed, "Override the scenario seed")
      ->each([&](const std::string&) { have_seed = true; });
  CLI11_PARSE(app, argc, argv);

  nonhom::parallel::set_max_threads(threads);
  try {
    nonhom::Scenario scenario = nonhom::Scenario::from_file(scenario_path);
    if (have_seed) scenario.config["seed"] = seed;
    return nonhom::run_scenario(scenario, out_dir);
  } catch (const nonhom::Error& e) {
    std::fprintf(stderr, "{\"error\":{\"code\":\"%s\",\"message\":\"%s\"}}\n",
                 nonhom::error_code_name(e.code()), e.what());
    return 1;
  }
}
