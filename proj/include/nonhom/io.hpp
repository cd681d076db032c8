#pragma once

#include <nlohmann/json_fwd.hpp>
#include <filesystem>
#include <string>

#include "nonhom/cz.hpp"
#include "nonhom/norms.hpp"

namespace nonhom::io {

using ordered_json = nlohmann::ordered_json;

/// Shortest round-trip decimal form of a double (the same digits nlohmann
/// emits), used for CSV so reports are byte-stable.
std::string format_double(double v);

struct MeasureFile {
  DiscreteMeasure mu;
  int n = 1;
};

/// Measure file: {"d": int, "n": int, "r_min": float,
///                "points": [[float,...],...], "masses": [float,...]}.
MeasureFile load_measure(const std::filesystem::path& path);
void save_measure(const DiscreteMeasure& mu, int n, const std::filesystem::path& path);

/// Function file: {"values": [...]} or {"re": [...], "im": [...]}.
RealFunction load_real_function(const std::filesystem::path& path,
                                Eigen::Index expected_size);
ComplexFunction load_complex_function(const std::filesystem::path& path,
                                      Eigen::Index expected_size);

ordered_json norm_report_json(const NormReport& rep);
ordered_json cube_json(const Cube& q);
ordered_json cz_json(const CzDecomposition& dec);

void write_text(const std::filesystem::path& path, const std::string& content);
void write_json(const std::filesystem::path& path, const ordered_json& j);

/// Rows of doubles under a header line, RFC-4180 style, byte-stable.
void write_csv(const std::filesystem::path& path,
               const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);

}  // namespace nonhom::io
