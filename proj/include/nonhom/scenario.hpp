#pragma once

#include <nlohmann/json.hpp>
#include <filesystem>
#include <optional>
#include <string>

#include "nonhom/measure.hpp"

namespace nonhom {

/// Config-driven scenario runner. A scenario names a measure (builtin
/// generator or file), an optional function, analysis parameters, a family
/// recipe, a command and its parameters. A fixed seed makes the JSON/CSV
/// outputs byte-identical regardless of --threads.
struct Scenario {
  nlohmann::ordered_json config;

  static Scenario from_file(const std::filesystem::path& path);
  static Scenario from_json(nlohmann::ordered_json j);
};

/// Executes the scenario, writing report.json (and CSV series) under out_dir.
/// Wall-clock timings go to run.log, which is excluded from the determinism
/// contract. Returns the process exit code: 0 success, 1 input error,
/// 2 validation failure.
int run_scenario(const Scenario& scenario, const std::filesystem::path& out_dir);

/// Builds a measure from {"generator": name, "params": {...}} or
/// {"file": path}; fills n (growth degree).
DiscreteMeasure resolve_measure(const nlohmann::ordered_json& cfg, int& n_out);

/// Builds a function from {"builtin": name, "params": {...}} or {"file": path}.
RealFunction resolve_function(const nlohmann::ordered_json& cfg,
                              const DiscreteMeasure& mu);

}  // namespace nonhom
