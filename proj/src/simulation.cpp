#include "gpme/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include "gpme/errors.hpp"

namespace gpme {

namespace {

std::vector<double> make_waypoints(const RunRecorders& rec, double t_end, double dt) {
  std::vector<double> wp;
  for (double t : rec.snapshot_times) {
    if (t < -1e-15 || t > t_end * (1.0 + 1e-12)) {
      throw ConfigError("snapshot time " + std::to_string(t) + " outside (0, t_end]");
    }
    if (t > dt * 1e-9) wp.push_back(std::min(t, t_end));
  }
  wp.push_back(t_end);
  std::sort(wp.begin(), wp.end());
  wp.erase(std::unique(wp.begin(), wp.end(),
                       [&](double a, double b) { return std::abs(a - b) <= dt * 1e-9; }),
           wp.end());
  return wp;
}

}  // namespace

RunOutput run_simulation(const ProblemSetup& setup, const SpatialOperatorConfig& space_in,
                         const IntegratorConfig& time, const RunRecorders& recorders) {
  SpatialOperatorConfig space = space_in;
  time.validate(space);
  RunOutput out;

  Field f = build_initial(setup);
  const Grid1D& grid = setup.grid;
  const double dt_nominal = time.dt_rule.dt(grid.dx);
  if (space.mhm_local && space.mhm_local_dt == 0.0) space.mhm_local_dt = dt_nominal;
  const double tiny = dt_nominal * 1e-9;

  const bool is_explicit = time.scheme != TimeScheme::BackwardEuler;
  if (is_explicit && !time.allow_unstable) {
    const StabilityCheck check = stability_guard(f, setup.model, dt_nominal, grid.dx);
    if (!check.ok) {
      throw ConfigError("explicit step is unstable: 2 k_max dt / dx^2 = " +
                        std::to_string(check.ratio) +
                        " > 1; increase the dt factor or pass allow_unstable");
    }
  }

  if (recorders.probe_x) {
    out.probe.x_probe = *recorders.probe_x;
    out.probe.node = grid.nearest_node(*recorders.probe_x);
    if (*recorders.probe_x < grid.x_left - 1e-12 || *recorders.probe_x > grid.x_right + 1e-12) {
      throw ConfigError("probe location outside the domain");
    }
  }
  if (recorders.front) {
    out.front.threshold = recorders.front_threshold
                              ? *recorders.front_threshold
                              : default_front_threshold(setup, 0.0);
  }

  auto record = [&](double dt_used) {
    if (recorders.probe_x) {
      out.probe.times.push_back(f.time);
      out.probe.values.push_back(f.values[out.probe.node]);
    }
    if (recorders.predictor) {
      const PredictorReport report = oscillation_predictor(f, setup.model, dt_used, grid.dx);
      out.predictor.times.push_back(f.time);
      out.predictor.min_effective_diffusion.push_back(report.min_effective_diffusion);
      out.predictor.violating_counts.push_back(static_cast<int>(report.violating_nodes.size()));
    }
    if (recorders.front) {
      const double threshold = recorders.front_threshold
                                   ? *recorders.front_threshold
                                   : default_front_threshold(setup, f.time);
      out.front.times.push_back(f.time);
      out.front.positions.push_back(track_front(f, grid, threshold));
    }
  };

  const std::set<double> snapshot_set(recorders.snapshot_times.begin(),
                                      recorders.snapshot_times.end());
  auto is_snapshot_time = [&](double t) {
    for (double s : snapshot_set) {
      if (std::abs(s - t) <= tiny) return true;
    }
    return false;
  };

  record(dt_nominal);
  if (is_snapshot_time(0.0)) out.snapshots.push_back(f);

  Stepper stepper(setup, space, time);
  const std::vector<double> waypoints = make_waypoints(recorders, time.t_end, dt_nominal);
  const int stride = std::max(1, recorders.stride);

  for (double target : waypoints) {
    while (target - f.time > tiny) {
      double dt = std::min(dt_nominal, target - f.time);
      if (target - f.time - dt <= tiny) dt = target - f.time;
      stepper.step(f, dt, out.steps);
      ++out.steps;
      const bool landed = target - f.time <= tiny;
      if (landed) f.time = target;
      if (out.steps % stride == 0 || landed) record(dt);
    }
    if (is_snapshot_time(target)) out.snapshots.push_back(f);
  }

  out.final_field = std::move(f);
  return out;
}

}  // namespace gpme
