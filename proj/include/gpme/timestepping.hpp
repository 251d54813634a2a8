#pragma once

#include <vector>

#include "gpme/flux.hpp"
#include "gpme/grid.hpp"

namespace gpme {

enum class TimeScheme { ForwardEuler, BackwardEuler, TvdRk2 };

enum class DtPower { DxSquared, Dx };

/// Fixed time-step rule: dt = dx^2 / factor (the explicit runs) or
/// dt = dx * factor (the large-step implicit run).
struct DtRule {
  double factor = 4.0;
  DtPower power = DtPower::DxSquared;

  double dt(double dx) const {
    return power == DtPower::DxSquared ? dx * dx / factor : dx * factor;
  }
};

struct SolverOptions {
  int max_iters = 200;
  double tol = 1e-10;
};

struct IntegratorConfig {
  TimeScheme scheme = TimeScheme::ForwardEuler;
  DtRule dt_rule;
  double t_end = 0.08;
  SolverOptions nonlinear;
  /// Skip the explicit stability guard at startup.
  bool allow_unstable = false;

  void validate(const SpatialOperatorConfig& space) const;
};

/// Linear heuristic ratio = 2 max_i k(p_i) dt / dx^2; ok iff ratio <= 1.
/// Advisory for explicit schemes, informational for implicit ones.
struct StabilityCheck {
  double ratio = 0.0;
  bool ok = false;
};

StabilityCheck stability_guard(const Field& field, const CoefficientModel& model, double dt,
                               double dx);

/// Picard iteration trace of one backward-Euler step.
struct PicardStats {
  int iterations = 0;
  std::vector<double> update_norms;
};

/// Reusable stepping engine; owns the scratch buffers so a long run does not
/// allocate per step.  One Stepper serves one simulation.
class Stepper {
 public:
  Stepper(const ProblemSetup& setup, const SpatialOperatorConfig& space,
          const IntegratorConfig& time);

  /// Advances the field by dt in place; refreshes boundaries at field.time+dt
  /// and verifies the result is finite.
  void step(Field& field, double dt, long long step_index);

  const PicardStats& last_picard() const { return picard_; }

 private:
  void step_explicit(Field& field, double dt, long long step_index);
  void step_rk2(Field& field, double dt, long long step_index);
  void step_implicit(Field& field, double dt, long long step_index);
  void check_finite(const Field& field, long long step_index) const;

  const ProblemSetup& setup_;
  SpatialOperatorConfig space_;
  IntegratorConfig time_;
  std::vector<double> k_, rhs_;
  std::vector<double> stage_, stage_rhs_;
  std::vector<double> diag_, lower_, upper_, solve_;
  PicardStats picard_;
};

/// Single-step conveniences (each builds a throwaway Stepper).
Field step_forward_euler(const Field& field, const ProblemSetup& setup,
                         const SpatialOperatorConfig& space, double dt);
Field step_backward_euler(const Field& field, const ProblemSetup& setup,
                          const SpatialOperatorConfig& space, double dt,
                          const SolverOptions& solver = {}, PicardStats* stats = nullptr);
Field step_tvd_rk2(const Field& field, const ProblemSetup& setup,
                   const SpatialOperatorConfig& space, double dt);

}  // namespace gpme
