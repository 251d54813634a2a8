#pragma once

#include <limits>
#include <span>
#include <string>
#include <vector>

#include "gpme/flux.hpp"
#include "gpme/grid.hpp"
#include "gpme/timestepping.hpp"

namespace gpme {

/// Time series of the solution at one fixed probe location.
struct ProbeSeries {
  double x_probe = 0.0;
  int node = -1;
  std::vector<double> times;
  std::vector<double> values;
};

/// Extrema statistics of a probe series.  A sample is a maximum (minimum)
/// when it exceeds (undercuts) both neighbors by more than the noise floor,
/// so a monotone series reports no extrema for any floor >= 0.
struct OscillationReport {
  int n_maxima = 0;
  int n_minima = 0;
  /// Largest peak-to-adjacent-trough gap.
  double max_amplitude = 0.0;
  /// Mean spacing of the minima (0 when fewer than two minima).
  double period_estimate = 0.0;
  std::vector<double> minima_times;
};

OscillationReport detect_oscillations(const ProbeSeries& series, double noise_floor = 1e-10);

/// Position of the rightmost threshold crossing: the largest x_i with
/// p_i > threshold, linearly interpolated into the straddling cell.
/// Returns x_left when no node exceeds the threshold.
double track_front(const Field& field, const Grid1D& grid, double threshold);

/// threshold = g_right(t) + 0.05 (g_left(t) - g_right(t)), robust against a
/// slightly diffused front.
double default_front_threshold(const ProblemSetup& setup, double t);

/// Exact solution of the locking problem:
///   p(x,t) = (3 (t - x))^(1/3) behind the front (x < t), eps^(1/3) ahead.
double tlp_exact(double x, double t, double eps = 1e-9);

struct ErrorNorms {
  double l1 = 0.0;
  double l2 = 0.0;
  double linf = 0.0;
};

enum class ErrorNormKind { L1, L2, LInf };

/// Coarse-vs-fine error over coincident interior nodes:
///   l1 = dx sum|e|, l2 = sqrt(dx sum e^2), linf = max|e|
/// with the coarse spacing dx.  Throws std::invalid_argument when the grids
/// are not nested.
ErrorNorms error_norms(const Field& coarse, const Grid1D& coarse_grid, const Field& fine,
                       const Grid1D& fine_grid);
double error_norm(const Field& coarse, const Grid1D& coarse_grid, const Field& fine,
                  const Grid1D& fine_grid, ErrorNormKind kind);

/// Least-squares slope of log(error) against log(1/N).
/// Needs at least two points and strictly positive errors.
double fit_order(std::span<const int> resolutions, std::span<const double> errors);

struct ConvergenceReport {
  std::string scheme;
  std::vector<int> resolutions;
  std::vector<double> l1, l2, linf;
  /// Fitted orders; NaN (serialized as null) when fewer than two resolutions.
  double order_l1 = std::numeric_limits<double>::quiet_NaN();
  double order_l2 = std::numeric_limits<double>::quiet_NaN();
  double order_linf = std::numeric_limits<double>::quiet_NaN();
};

double default_dt_factor(const CoefficientModel& model);

/// Fine-grid reference run (arithmetic averaging, forward Euler), memoized to
/// disk under cache_dir keyed by a content hash of the full configuration.
struct ReferenceOptions {
  int n = 3200;
  double dt_factor = 0.0;  // 0 = model default
  std::string cache_dir = "refcache";
};

Field reference_solution(const ProblemSetup& setup, double t_end,
                         const ReferenceOptions& options = {});

}  // namespace gpme
