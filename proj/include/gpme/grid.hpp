#pragma once

#include <functional>
#include <string>
#include <vector>

#include "gpme/coefficients.hpp"

namespace gpme {

/// Uniform 1D mesh over [x_left, x_right] with n_intervals cells.
/// Nodes are 0-based: x_i = x_left + span * (i / n), i = 0..n.  The two end
/// nodes carry Dirichlet data; the n-1 interior nodes are the unknowns.
///
/// Node coordinates are computed as span * (i / n) so that nested grids whose
/// resolutions differ by a power of two share bit-identical node positions.
struct Grid1D {
  int n_intervals = 0;
  double x_left = 0.0;
  double x_right = 1.0;
  double dx = 0.0;

  static Grid1D uniform(int n_intervals, double x_left = 0.0, double x_right = 1.0);

  int n_nodes() const { return n_intervals + 1; }
  double node(int i) const {
    return x_left + (x_right - x_left) * (static_cast<double>(i) / n_intervals);
  }
  int nearest_node(double x) const;

  /// Index stride mapping this grid's nodes onto a finer nested grid.
  /// Throws std::invalid_argument if the grids are not nested.
  int stride_to(const Grid1D& fine) const;
};

/// Discrete solution: one value per node plus the simulation time.
/// Boundary entries always hold the Dirichlet data after a step; all values
/// must stay finite (NaN/Inf aborts the run).
struct Field {
  std::vector<double> values;
  double time = 0.0;
};

enum class InitialPresetKind { Front, Linear, ConstantTlp };

/// Initial-condition presets.
///
///   Front       p(x,0) = p_right + (p_left - p_right) * max(0, 1 - x/x_c)^q,
///               a steep ramp near the left boundary whose excess above the
///               background has compact support [0, x_c].  The exponent q
///               keeps the ramp steep at the left while letting its foot
///               blend smoothly into the background.
///   Linear      straight line between the boundary values at t = 0.
///   ConstantTlp uniform small background h0 (the locking problem), paired
///               with the left boundary p(0,t) = (3t)^(1/3).
struct InitialPreset {
  InitialPresetKind kind = InitialPresetKind::Front;
  double front_left = 2.0;
  double front_right = 0.1;
  double front_support = 0.15;
  double front_exponent = 2.0;
  double tlp_background = 1e-3;

  static InitialPreset front(double p_left = 2.0, double p_right = 0.1,
                             double support = 0.15, double exponent = 2.0);
  static InitialPreset linear();
  static InitialPreset constant_tlp(double background = 1e-3);

  std::string name() const;
};

using BoundaryFn = std::function<double(double)>;

/// A fully specified problem: mesh, coefficient model, initial preset and
/// Dirichlet data.  One simulation owns one Field built from this setup.
struct ProblemSetup {
  Grid1D grid;
  CoefficientModel model = CoefficientModel::pme(3.0);
  InitialPreset initial;
  BoundaryFn bc_left;
  BoundaryFn bc_right;

  /// Canonical id of the problem family (model + preset + domain, no grid);
  /// used to key the reference-solution cache.
  std::string family_key;
  /// Rebuilds the same problem on another resolution (set by the factories).
  std::function<ProblemSetup(int)> with_resolution;
};

/// Field at t = 0 honoring the preset, with boundary data applied.
/// Throws ConfigError if the preset endpoints disagree with the boundary
/// data (the constant TLP background intentionally keeps its boundary kink).
Field build_initial(const ProblemSetup& setup);

/// Overwrites the two boundary entries with g(t); interior untouched.
void apply_bc(Field& field, const ProblemSetup& setup, double t);

ProblemSetup make_front_problem(const CoefficientModel& model, int n_intervals,
                                const InitialPreset& preset = InitialPreset::front());
ProblemSetup make_linear_problem(const CoefficientModel& model, int n_intervals,
                                 double left = 2.0, double right = 0.1);
ProblemSetup make_tlp_problem(int n_intervals, double background = 1e-3);

}  // namespace gpme
