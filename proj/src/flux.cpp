#include "gpme/flux.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "gpme/errors.hpp"
#include "gpme/modeq.hpp"

namespace gpme {

void SpatialOperatorConfig::validate() const {
  if (mhm && averaging != AveragingRule::Harmonic) {
    throw ConfigError("the modified-harmonic correction is defined on top of the "
                      "harmonic base scheme; use harmonic averaging");
  }
}

namespace {

inline double face_pair(AveragingRule rule, double a, double b) {
  if (rule == AveragingRule::Arithmetic) return 0.5 * (a + b);
  const double s = a + b;
  return s > 0.0 ? 2.0 * a * b / s : 0.0;
}

}  // namespace

double face_average(AveragingRule rule, double k_left, double k_right) {
  if (k_left < 0.0 || k_right < 0.0) {
    throw std::domain_error("face_average requires nonnegative coefficients");
  }
  return face_pair(rule, k_left, k_right);
}

double face_velocity(double p_left, double p_right, double dx) {
  return -(p_right - p_left) / dx;
}

double mhm_correction(double p_prev, double p_i, double p_next, double dx,
                      const CoefficientModel& model, MhmMode mode) {
  const double grad = (p_i - p_prev) / dx;
  const double curv = (p_next - 2.0 * p_i + p_prev) / (dx * dx);
  const auto [b_h, f_h] = mhm_term_coefficients(model, p_i, dx);
  const double grad2 = grad * grad;
  const double term1 = -b_h * grad2 * curv;
  const double term2 = -f_h * grad2 * grad2;
  switch (mode) {
    case MhmMode::TermIOnly:
      return term1;
    case MhmMode::TermIIOnly:
      return term2;
    case MhmMode::Full:
      break;
  }
  return term1 + term2;
}

void spatial_operator_into(const Field& field, const ProblemSetup& setup,
                           const SpatialOperatorConfig& cfg, std::span<double> k_scratch,
                           std::span<double> out) {
  cfg.validate();
  const auto& p = field.values;
  const int n = setup.grid.n_intervals;
  if (p.size() != static_cast<std::size_t>(n + 1) || k_scratch.size() != p.size() ||
      out.size() != p.size()) {
    throw std::invalid_argument("spatial_operator buffer sizes do not match the grid");
  }

  setup.model.eval_k(p, k_scratch);
  const double dx = setup.grid.dx;
  const double inv_dx2 = 1.0 / (dx * dx);

  out[0] = 0.0;
  out[n] = 0.0;
  if (cfg.averaging == AveragingRule::Arithmetic) {
    for (int i = 1; i < n; ++i) {
      const double face_l = 0.5 * (k_scratch[i - 1] + k_scratch[i]);
      const double face_r = 0.5 * (k_scratch[i] + k_scratch[i + 1]);
      out[i] = (face_r * (p[i + 1] - p[i]) - face_l * (p[i] - p[i - 1])) * inv_dx2;
    }
  } else {
    for (int i = 1; i < n; ++i) {
      const double sl = k_scratch[i - 1] + k_scratch[i];
      const double sr = k_scratch[i] + k_scratch[i + 1];
      const double face_l = sl > 0.0 ? 2.0 * k_scratch[i - 1] * k_scratch[i] / sl : 0.0;
      const double face_r = sr > 0.0 ? 2.0 * k_scratch[i] * k_scratch[i + 1] / sr : 0.0;
      out[i] = (face_r * (p[i + 1] - p[i]) - face_l * (p[i] - p[i - 1])) * inv_dx2;
    }
  }

  if (cfg.mhm) {
    for (int i = 1; i < n; ++i) {
      if (!(p[i] > 0.0)) continue;  // correction vanishes with the degenerate limit
      if (cfg.mhm_local) {
        const double grad = (p[i] - p[i - 1]) / dx;
        const double kp = setup.model.k_p(p[i]);
        const double kpp = setup.model.k_pp(p[i]);
        const double a = -3.5 * cfg.mhm_local_dt * (kp * kp + k_scratch[i] * kpp);
        const auto [b_h, f_h] = mhm_term_coefficients(setup.model, p[i], dx);
        (void)f_h;
        if (k_scratch[i] + (a + b_h) * grad * grad >= 0.0) continue;
      }
      out[i] += mhm_correction(p[i - 1], p[i], p[i + 1], dx, setup.model, cfg.mhm_mode);
    }
  }

  double acc = 0.0;
  for (int i = 1; i < n; ++i) acc += out[i];
  if (!std::isfinite(acc)) {
    for (int i = 1; i < n; ++i) {
      if (!std::isfinite(out[i])) {
        throw NumericalError("non-finite flux divergence at node " + std::to_string(i) +
                                 " (x = " + std::to_string(setup.grid.node(i)) + ")",
                             -1, i);
      }
    }
  }
}

std::vector<double> spatial_operator(const Field& field, const ProblemSetup& setup,
                                     const SpatialOperatorConfig& cfg) {
  std::vector<double> k(field.values.size());
  std::vector<double> out(field.values.size());
  spatial_operator_into(field, setup, cfg, k, out);
  return out;
}

TruncationSample truncation_leading(AveragingRule rule, const KProfile& profile,
                                    double x_face, double dx) {
  TruncationSample s;
  const double k_mid = profile.value(x_face);
  s.measured = face_average(rule, profile.value(x_face - 0.5 * dx),
                            profile.value(x_face + 0.5 * dx)) -
               k_mid;
  const double kx = profile.slope(x_face);
  const double kxx = profile.curvature(x_face);
  s.predicted = dx * dx / 8.0 * kxx;
  if (rule == AveragingRule::Harmonic) {
    s.predicted -= dx * dx / 4.0 * kx * kx / k_mid;
  }
  return s;
}

}  // namespace gpme
