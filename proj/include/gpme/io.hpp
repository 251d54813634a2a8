#pragma once

#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "gpme/diagnostics.hpp"
#include "gpme/grid.hpp"
#include "gpme/simulation.hpp"

namespace gpme {

/// 17 significant digits; round-trips IEEE doubles exactly.
std::string format_float(double v);

void write_snapshot_csv(const std::string& path, const Grid1D& grid, const Field& field);
void write_probe_csv(const std::string& path, const ProbeSeries& series);
void write_predictor_csv(const std::string& path, const PredictorSeries& series);
void write_convergence_csv(const std::string& path, const ConvergenceReport& report);

/// Reads a two-column CSV with a one-line header.
std::pair<std::vector<double>, std::vector<double>> read_xy_csv(const std::string& path);

nlohmann::json oscillation_to_json(const OscillationReport& report);
nlohmann::json convergence_to_json(const ConvergenceReport& report);
void write_json(const std::string& path, const nlohmann::json& j);

/// FNV-1a content hash used for run ids and the reference cache.
std::uint64_t fnv1a64(std::string_view text);
std::string hash_hex(std::string_view text);

}  // namespace gpme
