#pragma once

#include <nlohmann/json.hpp>
#include <fstream>

#include "nonhom/common.hpp"

namespace nonhom::testing {

#ifndef NONHOM_FIXTURE_DIR
#define NONHOM_FIXTURE_DIR "fixtures"
#endif

/// Calibration constants frozen from the sweep tool. Tests allow 20% slack
/// over the frozen values; regenerate with calibrate-fixtures when sweeps
/// change.
inline const nlohmann::json& fixtures() {
  static nlohmann::json j = [] {
    std::ifstream in(std::string(NONHOM_FIXTURE_DIR) + "/calibration.json");
    if (!in) fail(ErrorCode::InvalidInput, "missing fixtures/calibration.json");
    nlohmann::json v;
    in >> v;
    return v;
  }();
  return j;
}

inline double fixture(const std::string& key) {
  if (!fixtures().contains(key))
    fail(ErrorCode::InvalidInput, "missing fixture key: " + key);
  return fixtures().at(key).get<double>();
}

/// Frozen value with the standard 20% slack.
inline double fixture_cap(const std::string& key) { return 1.2 * fixture(key); }

}  // namespace nonhom::testing
