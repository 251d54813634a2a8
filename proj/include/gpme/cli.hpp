#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "gpme/diagnostics.hpp"
#include "gpme/simulation.hpp"

namespace gpme {

/// Everything a run needs, as plain values.  JSON config files and CLI flags
/// both populate this struct; flags win over the file.
struct RunConfig {
  std::string model = "pme";  // pme | superslow | linear
  double m = 3.0;

  std::string preset = "front";  // front | linear | tlp
  double front_left = 2.0;
  double front_right = 0.1;
  double front_support = 0.15;
  double front_exponent = 2.0;
  double linear_left = 2.0;
  double linear_right = 0.1;
  double tlp_background = 1e-3;

  int n = 50;
  std::string averaging = "harmonic";  // arithmetic | harmonic
  bool mhm = false;
  std::string mhm_mode = "full";  // full | term1 | term2
  bool mhm_local = false;

  std::string integrator = "fe";  // fe | be | rk2
  double dt_factor = 0.0;         // 0 = model default
  std::string dt_power = "dx2";   // dx2: dt = dx^2/factor | dx: dt = dx*factor
  double t_end = 0.08;
  int picard_max_iters = 200;
  double picard_tol = 1e-10;
  bool allow_unstable = false;

  std::vector<double> snapshots;
  double probe_x = 0.12;
  int probe_stride = 1;
  bool predictor = true;
  double noise_floor = 1e-10;

  std::string out_dir = "out";
  std::string cache_dir = "refcache";
  std::string label;  // compare column label; defaults to the scheme name

  // Convergence sweeps.
  std::vector<int> resolutions;
  std::vector<std::string> schemes;  // arithmetic | harmonic | mhm
  int reference_n = 3200;
};

RunConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const RunConfig& config);

/// Scheme short name: arithmetic, harmonic or mhm.
std::string scheme_name(const RunConfig& config);
std::string run_id(const RunConfig& config);

void validate_config(const RunConfig& config, bool convergence_mode = false);

CoefficientModel make_model(const RunConfig& config);
ProblemSetup make_setup(const RunConfig& config);
SpatialOperatorConfig make_space_config(const RunConfig& config);
IntegratorConfig make_time_config(const RunConfig& config, double dx);

/// Runs one configuration and writes snapshot/probe/oscillation/predictor
/// files plus meta.json under out_dir/<run-id>/.  Returns the run directory.
std::filesystem::path cmd_run(const RunConfig& config);

/// Per-scheme convergence sweep over config.resolutions; errors are measured
/// against the cached fine-grid reference, or against the exact solution for
/// the locking problem.
ConvergenceReport convergence_for_scheme(const RunConfig& config, const std::string& scheme);

/// Sweeps every configured scheme and writes CSV/JSON reports per scheme.
std::filesystem::path cmd_convergence(const RunConfig& config);

/// Runs several configurations on the same grid and horizon and merges their
/// snapshots and probe series into per-quantity comparison CSVs.
std::filesystem::path cmd_compare(std::span<const RunConfig> configs,
                                  const std::string& out_dir);

}  // namespace gpme
