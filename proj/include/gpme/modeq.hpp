#pragma once

#include <vector>

#include "gpme/flux.hpp"
#include "gpme/grid.hpp"

namespace gpme {

/// Closed-form coefficients of the leading error terms in the modified
/// equation of the forward-in-time, central-in-space scheme,
///
///   p_t - (k p_x)_x = (a + b) px^2 pxx + c pxx^2 + d pxxx px
///                     + (e + f) px^4 + g pxxxx + higher order,
///
/// evaluated at a given state p and steps (dt, dx):
///
///   a = -(7 dt/2) (k_p^2 + k k_pp)          b = (3 dx^2/4) k_pp
///   c = k_p (-2 k dt + dx^2/4)              d = k_p (-3 k dt + dx^2/3)
///   e = -(dt/2) (3 k_p k_pp + k k_ppp)      f = (dx^2/6) k_ppp
///   g = k (-k dt/2 + dx^2/12)
///
/// Only b and f depend on the averaging rule.  Harmonic averaging shifts them
/// by
///   delta_b = -(3 dx^2/4) k_p^2 / k
///   delta_f = -(dx^2/4) (2 k_p k_pp / k - k_p^3 / k^2)
/// and those shifts are what drive the anti-diffusive artifacts.
struct ModEqCoefficients {
  double a = 0, b = 0, c = 0, d = 0, e = 0, f = 0, g = 0;
  /// Harmonic shifts, reported regardless of the rule in effect; already
  /// folded into b and f when the rule is Harmonic.
  double delta_b_harmonic = 0;
  double delta_f_harmonic = 0;
};

/// Throws std::domain_error for p <= 0.  When k underflows to zero (superslow
/// at tiny p) the harmonic shifts are continued by their limit value 0.
ModEqCoefficients modified_equation_coefficients(const CoefficientModel& model, double p,
                                                 double dt, double dx, AveragingRule rule);

/// The dt-free pair (B^H, F^H) = (b + delta_b, f + delta_f) consumed by the
/// harmonic-scheme correction term.
struct MhmTermCoefficients {
  double b_h = 0;
  double f_h = 0;
};

MhmTermCoefficients mhm_term_coefficients(const CoefficientModel& model, double p, double dx);

/// Effective diffusion k(p_i) + (a + B^H) [D-(p_i)]^2 per interior node; the
/// scheme develops temporal oscillations where it turns negative.
struct PredictorReport {
  double min_effective_diffusion = 0.0;
  std::vector<int> violating_nodes;
};

PredictorReport oscillation_predictor(const Field& field, const CoefficientModel& model,
                                      double dt, double dx);

}  // namespace gpme
