#pragma once

#include <optional>
#include <vector>

#include "gpme/diagnostics.hpp"
#include "gpme/flux.hpp"
#include "gpme/grid.hpp"
#include "gpme/modeq.hpp"
#include "gpme/timestepping.hpp"

namespace gpme {

/// Anti-diffusion predictor sampled over a run.
struct PredictorSeries {
  std::vector<double> times;
  std::vector<double> min_effective_diffusion;
  std::vector<int> violating_counts;
};

/// Front position sampled over a run.
struct FrontSeries {
  double threshold = 0.0;
  std::vector<double> times;
  std::vector<double> positions;
};

/// What to record while stepping.  Probe/predictor/front samples are taken
/// every `stride` steps plus at every waypoint landing.
struct RunRecorders {
  std::optional<double> probe_x;
  int stride = 1;
  bool predictor = false;
  bool front = false;
  std::optional<double> front_threshold;  // default: BC-derived threshold
  std::vector<double> snapshot_times;     // hit exactly by shortening steps
};

struct RunOutput {
  Field final_field;
  ProbeSeries probe;
  PredictorSeries predictor;
  FrontSeries front;
  std::vector<Field> snapshots;  // one per requested time, in order
  long long steps = 0;
};

/// Advances the problem from t = 0 to t_end with the configured integrator.
/// Snapshot times and t_end are landed on exactly by truncating the final
/// step toward each; the nominal dt is otherwise fixed by the dt rule.
/// Explicit schemes check the stability guard on the initial data unless
/// allow_unstable is set.
RunOutput run_simulation(const ProblemSetup& setup, const SpatialOperatorConfig& space,
                         const IntegratorConfig& time, const RunRecorders& recorders = {});

}  // namespace gpme
