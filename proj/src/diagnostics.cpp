#include "gpme/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <stdexcept>

#include "gpme/errors.hpp"
#include "gpme/io.hpp"
#include "gpme/simulation.hpp"

namespace gpme {

OscillationReport detect_oscillations(const ProbeSeries& series, double noise_floor) {
  const auto& t = series.times;
  const auto& v = series.values;
  if (v.size() < 3) {
    throw std::invalid_argument("oscillation detection needs at least 3 samples");
  }
  if (noise_floor < 0.0) {
    throw std::invalid_argument("noise floor must be >= 0");
  }

  OscillationReport report;
  struct Extremum {
    double time, value;
    bool is_max;
  };
  std::vector<Extremum> extrema;
  for (std::size_t i = 1; i + 1 < v.size(); ++i) {
    const bool up = v[i] > v[i - 1] + noise_floor && v[i] > v[i + 1] + noise_floor;
    const bool down = v[i] < v[i - 1] - noise_floor && v[i] < v[i + 1] - noise_floor;
    if (up || down) extrema.push_back({t[i], v[i], up});
  }

  for (const Extremum& e : extrema) {
    if (e.is_max) {
      ++report.n_maxima;
    } else {
      ++report.n_minima;
      report.minima_times.push_back(e.time);
    }
  }
  for (std::size_t i = 0; i + 1 < extrema.size(); ++i) {
    if (extrema[i].is_max != extrema[i + 1].is_max) {
      report.max_amplitude =
          std::max(report.max_amplitude, std::abs(extrema[i].value - extrema[i + 1].value));
    }
  }
  if (report.minima_times.size() >= 2) {
    report.period_estimate = (report.minima_times.back() - report.minima_times.front()) /
                             static_cast<double>(report.minima_times.size() - 1);
  }
  return report;
}

double track_front(const Field& field, const Grid1D& grid, double threshold) {
  const auto& p = field.values;
  const int n = grid.n_intervals;
  int last = -1;
  for (int i = n; i >= 0; --i) {
    if (p[i] > threshold) {
      last = i;
      break;
    }
  }
  if (last < 0) return grid.x_left;
  if (last == n) return grid.x_right;
  const double drop = p[last] - p[last + 1];
  return grid.node(last) + grid.dx * (p[last] - threshold) / drop;
}

double default_front_threshold(const ProblemSetup& setup, double t) {
  const double left = setup.bc_left(t);
  const double right = setup.bc_right(t);
  return right + 0.05 * (left - right);
}

double tlp_exact(double x, double t, double eps) {
  const double k = x < t ? 3.0 * (t - x) : eps;
  return std::cbrt(k);
}

ErrorNorms error_norms(const Field& coarse, const Grid1D& coarse_grid, const Field& fine,
                       const Grid1D& fine_grid) {
  const int stride = coarse_grid.stride_to(fine_grid);
  if (coarse.values.size() != static_cast<std::size_t>(coarse_grid.n_nodes()) ||
      fine.values.size() != static_cast<std::size_t>(fine_grid.n_nodes())) {
    throw std::invalid_argument("field sizes do not match their grids");
  }

  ErrorNorms norms;
  double sum_abs = 0.0, sum_sq = 0.0, max_abs = 0.0;
  for (int i = 1; i < coarse_grid.n_intervals; ++i) {
    const double e = coarse.values[i] - fine.values[static_cast<std::size_t>(i) * stride];
    sum_abs += std::abs(e);
    sum_sq += e * e;
    max_abs = std::max(max_abs, std::abs(e));
  }
  norms.l1 = coarse_grid.dx * sum_abs;
  norms.l2 = std::sqrt(coarse_grid.dx * sum_sq);
  norms.linf = max_abs;
  return norms;
}

double error_norm(const Field& coarse, const Grid1D& coarse_grid, const Field& fine,
                  const Grid1D& fine_grid, ErrorNormKind kind) {
  const ErrorNorms norms = error_norms(coarse, coarse_grid, fine, fine_grid);
  switch (kind) {
    case ErrorNormKind::L1:
      return norms.l1;
    case ErrorNormKind::L2:
      return norms.l2;
    case ErrorNormKind::LInf:
      return norms.linf;
  }
  return norms.linf;
}

double fit_order(std::span<const int> resolutions, std::span<const double> errors) {
  if (resolutions.size() != errors.size() || resolutions.size() < 2) {
    throw std::invalid_argument("order fit needs matching lists with >= 2 points");
  }
  double sx = 0.0, sy = 0.0;
  const std::size_t n = resolutions.size();
  std::vector<double> xs(n), ys(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(errors[i] > 0.0)) {
      throw std::invalid_argument("order fit requires strictly positive errors");
    }
    xs[i] = std::log(1.0 / resolutions[i]);
    ys[i] = std::log(errors[i]);
    sx += xs[i];
    sy += ys[i];
  }
  const double mx = sx / n, my = sy / n;
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    num += (xs[i] - mx) * (ys[i] - my);
    den += (xs[i] - mx) * (xs[i] - mx);
  }
  return num / den;
}

double default_dt_factor(const CoefficientModel& model) {
  switch (model.kind()) {
    case CoefficientKind::Superslow:
      return 2.0;
    case CoefficientKind::Linear:
      return 4.0;
    case CoefficientKind::Pme: {
      const long m = std::lround(model.exponent());
      if (m <= 1) return 4.0;
      if (m == 2) return 8.0;
      return 16.0;
    }
  }
  return 4.0;
}

Field reference_solution(const ProblemSetup& setup, double t_end,
                         const ReferenceOptions& options) {
  if (!setup.with_resolution) {
    throw ConfigError("reference_solution needs a preset-built problem (no rebuild hook)");
  }
  if (options.n % setup.grid.n_intervals != 0) {
    throw ConfigError("reference resolution " + std::to_string(options.n) +
                      " is not divisible by N = " + std::to_string(setup.grid.n_intervals));
  }

  const double factor = options.dt_factor > 0.0 ? options.dt_factor
                                                : default_dt_factor(setup.model);
  nlohmann::json descriptor = {
      {"family", setup.family_key}, {"n", options.n},
      {"averaging", "arithmetic"},  {"integrator", "forward_euler"},
      {"dt_factor", factor},        {"dt_power", "dx2"},
      {"t_end", t_end},
  };
  const std::string key = hash_hex(descriptor.dump());

  namespace fs = std::filesystem;
  const fs::path dir(options.cache_dir);
  const fs::path csv = dir / ("ref_" + key + ".csv");
  const fs::path meta = dir / ("ref_" + key + ".json");

  if (fs::exists(csv)) {
    const auto [xs, ps] = read_xy_csv(csv.string());
    if (ps.size() == static_cast<std::size_t>(options.n + 1)) {
      return Field{ps, t_end};
    }
  }

  const ProblemSetup fine = setup.with_resolution(options.n);
  SpatialOperatorConfig space;
  space.averaging = AveragingRule::Arithmetic;
  IntegratorConfig time;
  time.scheme = TimeScheme::ForwardEuler;
  time.dt_rule = {factor, DtPower::DxSquared};
  time.t_end = t_end;

  RunOutput run;
  try {
    run = run_simulation(fine, space, time);
  } catch (const NumericalError& err) {
    throw NumericalError(std::string(err.what()) +
                             " (reference run; try a larger dt factor)",
                         err.step(), err.node());
  }

  fs::create_directories(dir);
  const fs::path tmp = dir / ("ref_" + key + ".csv.tmp");
  write_snapshot_csv(tmp.string(), fine.grid, run.final_field);
  fs::rename(tmp, csv);
  write_json(meta.string(), descriptor);
  return run.final_field;
}

}  // namespace gpme
