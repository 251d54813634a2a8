#include "gpme/modeq.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace gpme {

namespace {

struct Derivatives {
  double k, kp, kpp, kppp;
};

Derivatives eval_all(const CoefficientModel& model, double p) {
  if (!(p > 0.0)) {
    throw std::domain_error("modified-equation coefficients require p > 0");
  }
  return {model.k(p), model.k_p(p), model.k_pp(p), model.k_ppp(p)};
}

// delta_b = -(3 dx^2/4) kp^2/k, delta_f = -(dx^2/4)(2 kp kpp/k - kp^3/k^2).
// When k has underflowed to zero (superslow at tiny p) the analytic ratios
// kp^2/k = k p^-4 etc. vanish with k, so the limit value is 0.
void harmonic_shifts(const Derivatives& v, double dx2, double& delta_b, double& delta_f) {
  if (v.k <= 0.0) {
    delta_b = 0.0;
    delta_f = 0.0;
    return;
  }
  const double inv_k = 1.0 / v.k;
  delta_b = -0.75 * dx2 * v.kp * v.kp * inv_k;
  delta_f = -0.25 * dx2 * (2.0 * v.kp * v.kpp * inv_k - v.kp * v.kp * v.kp * inv_k * inv_k);
}

}  // namespace

ModEqCoefficients modified_equation_coefficients(const CoefficientModel& model, double p,
                                                 double dt, double dx, AveragingRule rule) {
  const Derivatives v = eval_all(model, p);
  const double dx2 = dx * dx;

  ModEqCoefficients c;
  c.a = -3.5 * dt * (v.kp * v.kp + v.k * v.kpp);
  c.b = 0.75 * dx2 * v.kpp;
  c.c = v.kp * (-2.0 * v.k * dt + 0.25 * dx2);
  c.d = v.kp * (-3.0 * v.k * dt + dx2 / 3.0);
  c.e = -0.5 * dt * (3.0 * v.kp * v.kpp + v.k * v.kppp);
  c.f = dx2 / 6.0 * v.kppp;
  c.g = v.k * (-0.5 * v.k * dt + dx2 / 12.0);

  harmonic_shifts(v, dx2, c.delta_b_harmonic, c.delta_f_harmonic);
  if (rule == AveragingRule::Harmonic) {
    c.b += c.delta_b_harmonic;
    c.f += c.delta_f_harmonic;
  }
  return c;
}

MhmTermCoefficients mhm_term_coefficients(const CoefficientModel& model, double p, double dx) {
  const Derivatives v = eval_all(model, p);
  const double dx2 = dx * dx;
  double delta_b = 0.0, delta_f = 0.0;
  harmonic_shifts(v, dx2, delta_b, delta_f);
  return {0.75 * dx2 * v.kpp + delta_b, dx2 / 6.0 * v.kppp + delta_f};
}

PredictorReport oscillation_predictor(const Field& field, const CoefficientModel& model,
                                      double dt, double dx) {
  const auto& p = field.values;
  const int n = static_cast<int>(p.size()) - 1;
  PredictorReport report;
  report.min_effective_diffusion = std::numeric_limits<double>::infinity();

  for (int i = 1; i < n; ++i) {
    const double grad = (p[i] - p[i - 1]) / dx;
    const double kp = model.k_p(p[i]);
    const double kpp = model.k_pp(p[i]);
    const double k = model.k(p[i]);
    const double a = -3.5 * dt * (kp * kp + k * kpp);
    double delta_b = 0.0, delta_f = 0.0;
    harmonic_shifts({k, kp, kpp, 0.0}, dx * dx, delta_b, delta_f);
    const double b_h = 0.75 * dx * dx * kpp + delta_b;
    const double effective = k + (a + b_h) * grad * grad;
    if (effective < report.min_effective_diffusion) {
      report.min_effective_diffusion = effective;
    }
    if (effective < 0.0) report.violating_nodes.push_back(i);
  }
  return report;
}

}  // namespace gpme
