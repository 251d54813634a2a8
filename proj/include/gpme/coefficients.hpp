#pragma once

#include <span>
#include <string>
#include <vector>

namespace gpme {

enum class CoefficientKind { Pme, Superslow, Linear };

/// Nonlinear diffusion coefficient k(p) and its first three p-derivatives.
///
/// Supported models:
///   - Pme:       k(p) = p^m with m >= 1
///   - Superslow: k(p) = exp(-1/p), which vanishes faster than any power of p
///   - Linear:    k(p) = p (the m = 1 case, kept as its own variant for the
///                smooth baseline runs)
///
/// All derivatives are closed forms; nothing is differenced numerically.
/// Immutable after construction and safe to share between simulations.
class CoefficientModel {
 public:
  static CoefficientModel pme(double m);
  static CoefficientModel superslow();
  static CoefficientModel linear();

  double k(double p) const;
  double k_p(double p) const;
  double k_pp(double p) const;
  double k_ppp(double p) const;

  /// order-th p-derivative of k, order in 0..3.
  /// Throws std::invalid_argument for other orders and std::domain_error for
  /// the superslow model at p <= 0 (where exp(-1/p) is singular).
  double evaluate(double p, int order) const;

  /// Bulk evaluation of k over a whole field (the per-step hot path).
  /// Extends k by its degenerate limit 0 for p <= 0 so transient undershoots
  /// do not abort a run; the strict domain checks live in evaluate().
  void eval_k(std::span<const double> p, std::span<double> out) const;

  CoefficientKind kind() const { return kind_; }
  /// PME exponent; 1 for the linear model, unused for superslow.
  double exponent() const { return m_; }
  std::string name() const;

 private:
  CoefficientModel(CoefficientKind kind, double m) : kind_(kind), m_(m) {}

  CoefficientKind kind_;
  double m_;
};

/// Degeneracy indicator C(p) = k k_pp / k_p^2 evaluated per sample.
/// Parabolic degeneracy requires k(p) -> 0 as p -> 0 (condition 1) and
/// C(p) < 1 for p > 0 (condition 2).
struct DegeneracyReport {
  std::vector<double> c_values;  // NaN where k_p vanishes (C undefined there)
  bool condition1_ok = false;
  bool condition2_ok = false;
};

DegeneracyReport degeneracy_check(const CoefficientModel& model,
                                  std::span<const double> p_samples);

}  // namespace gpme
