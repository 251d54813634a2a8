#include "gpme/timestepping.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "gpme/errors.hpp"

namespace gpme {

void IntegratorConfig::validate(const SpatialOperatorConfig& space) const {
  space.validate();
  if (!(t_end > 0.0)) throw ConfigError("t_end must be > 0");
  if (!(dt_rule.factor > 0.0)) throw ConfigError("dt factor must be > 0");
  if (nonlinear.max_iters < 1) throw ConfigError("nonlinear max_iters must be >= 1");
  if (!(nonlinear.tol > 0.0)) throw ConfigError("nonlinear tol must be > 0");
  if (space.mhm && scheme == TimeScheme::BackwardEuler) {
    throw ConfigError("the modified-harmonic correction targets the explicit scheme's "
                      "error terms; it is not defined for backward Euler");
  }
}

StabilityCheck stability_guard(const Field& field, const CoefficientModel& model, double dt,
                               double dx) {
  std::vector<double> k(field.values.size());
  model.eval_k(field.values, k);
  double kmax = 0.0;
  for (double v : k) kmax = std::max(kmax, v);
  StabilityCheck check;
  check.ratio = 2.0 * kmax * dt / (dx * dx);
  check.ok = check.ratio <= 1.0 + 1e-12;
  return check;
}

Stepper::Stepper(const ProblemSetup& setup, const SpatialOperatorConfig& space,
                 const IntegratorConfig& time)
    : setup_(setup), space_(space), time_(time) {
  time_.validate(space_);
  const std::size_t nodes = static_cast<std::size_t>(setup.grid.n_nodes());
  k_.resize(nodes);
  rhs_.resize(nodes);
  if (time_.scheme == TimeScheme::TvdRk2) {
    stage_.resize(nodes);
    stage_rhs_.resize(nodes);
  }
  if (time_.scheme == TimeScheme::BackwardEuler) {
    const std::size_t unknowns = nodes - 2;
    diag_.resize(unknowns);
    lower_.resize(unknowns);
    upper_.resize(unknowns);
    solve_.resize(unknowns);
    stage_.resize(nodes);
  }
}

void Stepper::check_finite(const Field& field, long long step_index) const {
  double acc = 0.0;
  for (double v : field.values) acc += v;
  if (std::isfinite(acc)) return;
  for (std::size_t i = 0; i < field.values.size(); ++i) {
    if (!std::isfinite(field.values[i])) {
      throw NumericalError("solution became non-finite at step " + std::to_string(step_index) +
                               ", node " + std::to_string(i),
                           step_index, static_cast<int>(i));
    }
  }
}

void Stepper::step(Field& field, double dt, long long step_index) {
  switch (time_.scheme) {
    case TimeScheme::ForwardEuler:
      step_explicit(field, dt, step_index);
      break;
    case TimeScheme::TvdRk2:
      step_rk2(field, dt, step_index);
      break;
    case TimeScheme::BackwardEuler:
      step_implicit(field, dt, step_index);
      break;
  }
  check_finite(field, step_index);
}

void Stepper::step_explicit(Field& field, double dt, long long step_index) {
  (void)step_index;
  spatial_operator_into(field, setup_, space_, k_, rhs_);
  const int n = setup_.grid.n_intervals;
  for (int i = 1; i < n; ++i) field.values[i] += dt * rhs_[i];
  field.time += dt;
  apply_bc(field, setup_, field.time);
}

void Stepper::step_rk2(Field& field, double dt, long long step_index) {
  (void)step_index;
  const int n = setup_.grid.n_intervals;
  const double t1 = field.time + dt;

  // Stage 1: u1 = u + dt L(u), boundaries at t + dt.
  spatial_operator_into(field, setup_, space_, k_, rhs_);
  Field stage{std::move(stage_), t1};
  stage.values.assign(field.values.begin(), field.values.end());
  for (int i = 1; i < n; ++i) stage.values[i] += dt * rhs_[i];
  apply_bc(stage, setup_, t1);

  // Final: u^{n+1} = (u + u1 + dt L(u1)) / 2.
  spatial_operator_into(stage, setup_, space_, k_, stage_rhs_);
  for (int i = 1; i < n; ++i) {
    field.values[i] = 0.5 * field.values[i] + 0.5 * stage.values[i] + 0.5 * dt * stage_rhs_[i];
  }
  field.time = t1;
  apply_bc(field, setup_, t1);
  stage_ = std::move(stage.values);
}

namespace {

inline double face_value(AveragingRule rule, double a, double b) {
  if (rule == AveragingRule::Arithmetic) return 0.5 * (a + b);
  const double s = a + b;
  return s > 0.0 ? 2.0 * a * b / s : 0.0;
}

}  // namespace

// Picard iteration with lagged coefficients: every sweep freezes the face
// averages at the previous iterate and solves the resulting tridiagonal
// system for the interior unknowns.
void Stepper::step_implicit(Field& field, double dt, long long step_index) {
  const int n = setup_.grid.n_intervals;
  const double dx = setup_.grid.dx;
  const double mu = dt / (dx * dx);
  const double t1 = field.time + dt;
  const double g_left = setup_.bc_left(t1);
  const double g_right = setup_.bc_right(t1);

  Field iterate{std::move(stage_), t1};
  iterate.values.assign(field.values.begin(), field.values.end());
  iterate.values.front() = g_left;
  iterate.values.back() = g_right;

  picard_.iterations = 0;
  picard_.update_norms.clear();

  const int unknowns = n - 1;
  double delta = std::numeric_limits<double>::infinity();
  for (int sweep = 0; sweep < time_.nonlinear.max_iters; ++sweep) {
    setup_.model.eval_k(iterate.values, k_);
    for (int i = 1; i < n; ++i) {
      const double al = mu * face_value(space_.averaging, k_[i - 1], k_[i]);
      const double ar = mu * face_value(space_.averaging, k_[i], k_[i + 1]);
      const int row = i - 1;
      lower_[row] = -al;
      diag_[row] = 1.0 + al + ar;
      upper_[row] = -ar;
      solve_[row] = field.values[i];
      if (i == 1) solve_[row] += al * g_left;
      if (i == n - 1) solve_[row] += ar * g_right;
    }

    // Thomas elimination.
    for (int row = 1; row < unknowns; ++row) {
      const double w = lower_[row] / diag_[row - 1];
      diag_[row] -= w * upper_[row - 1];
      solve_[row] -= w * solve_[row - 1];
    }
    solve_[unknowns - 1] /= diag_[unknowns - 1];
    for (int row = unknowns - 2; row >= 0; --row) {
      solve_[row] = (solve_[row] - upper_[row] * solve_[row + 1]) / diag_[row];
    }

    delta = 0.0;
    for (int i = 1; i < n; ++i) {
      delta = std::max(delta, std::abs(solve_[i - 1] - iterate.values[i]));
      iterate.values[i] = solve_[i - 1];
    }
    picard_.update_norms.push_back(delta);
    picard_.iterations = sweep + 1;
    if (delta < time_.nonlinear.tol) break;
  }

  if (!(delta < time_.nonlinear.tol)) {
    throw NumericalError("backward Euler Picard iteration did not converge after " +
                             std::to_string(time_.nonlinear.max_iters) +
                             " sweeps (last update " + std::to_string(delta) + ") at step " +
                             std::to_string(step_index),
                         step_index, -1);
  }

  field.values = iterate.values;
  field.time = t1;
  stage_ = std::move(iterate.values);
}

namespace {

IntegratorConfig single_step_config(TimeScheme scheme, double dt, const SolverOptions* solver) {
  IntegratorConfig cfg;
  cfg.scheme = scheme;
  cfg.t_end = dt;
  if (solver) cfg.nonlinear = *solver;
  return cfg;
}

}  // namespace

Field step_forward_euler(const Field& field, const ProblemSetup& setup,
                         const SpatialOperatorConfig& space, double dt) {
  Field out = field;
  Stepper stepper(setup, space, single_step_config(TimeScheme::ForwardEuler, dt, nullptr));
  stepper.step(out, dt, 0);
  return out;
}

Field step_backward_euler(const Field& field, const ProblemSetup& setup,
                          const SpatialOperatorConfig& space, double dt,
                          const SolverOptions& solver, PicardStats* stats) {
  Field out = field;
  Stepper stepper(setup, space, single_step_config(TimeScheme::BackwardEuler, dt, &solver));
  stepper.step(out, dt, 0);
  if (stats) *stats = stepper.last_picard();
  return out;
}

Field step_tvd_rk2(const Field& field, const ProblemSetup& setup,
                   const SpatialOperatorConfig& space, double dt) {
  Field out = field;
  Stepper stepper(setup, space, single_step_config(TimeScheme::TvdRk2, dt, nullptr));
  stepper.step(out, dt, 0);
  return out;
}

}  // namespace gpme
