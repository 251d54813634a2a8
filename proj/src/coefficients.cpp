#include "gpme/coefficients.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "gpme/errors.hpp"

namespace gpme {

namespace {

bool is_small_integer_exponent(double m, int value) {
  return m == static_cast<double>(value);
}

}  // namespace

CoefficientModel CoefficientModel::pme(double m) {
  if (!std::isfinite(m) || m < 1.0) {
    throw ConfigError("pme exponent must be a finite real >= 1, got " + std::to_string(m));
  }
  return CoefficientModel(CoefficientKind::Pme, m);
}

CoefficientModel CoefficientModel::superslow() {
  return CoefficientModel(CoefficientKind::Superslow, 0.0);
}

CoefficientModel CoefficientModel::linear() {
  return CoefficientModel(CoefficientKind::Linear, 1.0);
}

std::string CoefficientModel::name() const {
  switch (kind_) {
    case CoefficientKind::Pme: {
      char buf[48];
      std::snprintf(buf, sizeof buf, "pme(m=%g)", m_);
      return buf;
    }
    case CoefficientKind::Superslow:
      return "superslow";
    case CoefficientKind::Linear:
      return "linear";
  }
  return "?";
}

double CoefficientModel::k(double p) const {
  switch (kind_) {
    case CoefficientKind::Linear:
      return p;
    case CoefficientKind::Pme:
      if (is_small_integer_exponent(m_, 1)) return p;
      if (is_small_integer_exponent(m_, 2)) return p * p;
      if (is_small_integer_exponent(m_, 3)) return p * p * p;
      return std::pow(p, m_);
    case CoefficientKind::Superslow:
      if (p <= 0.0) throw std::domain_error("superslow k(p) requires p > 0");
      return std::exp(-1.0 / p);
  }
  return 0.0;
}

// PME derivative: k^(j)(p) = [prod_{l=0}^{j-1} (m - l)] p^(m-j).  The falling
// factorial is checked for an exact zero before touching pow so that e.g.
// m = 1, j = 2 yields 0 rather than 0 * inf at small p.
static double pme_derivative(double m, double p, int order) {
  double coef = 1.0;
  for (int l = 0; l < order; ++l) coef *= (m - static_cast<double>(l));
  if (coef == 0.0) return 0.0;
  return coef * std::pow(p, m - static_cast<double>(order));
}

double CoefficientModel::k_p(double p) const {
  switch (kind_) {
    case CoefficientKind::Linear:
      return 1.0;
    case CoefficientKind::Pme:
      return pme_derivative(m_, p, 1);
    case CoefficientKind::Superslow: {
      if (p <= 0.0) throw std::domain_error("superslow k_p(p) requires p > 0");
      const double e = std::exp(-1.0 / p);
      const double inv = 1.0 / p;
      return e * inv * inv;
    }
  }
  return 0.0;
}

double CoefficientModel::k_pp(double p) const {
  switch (kind_) {
    case CoefficientKind::Linear:
      return 0.0;
    case CoefficientKind::Pme:
      return pme_derivative(m_, p, 2);
    case CoefficientKind::Superslow: {
      if (p <= 0.0) throw std::domain_error("superslow k_pp(p) requires p > 0");
      const double e = std::exp(-1.0 / p);
      const double inv = 1.0 / p;
      const double inv2 = inv * inv;
      return e * (inv2 * inv2 - 2.0 * inv2 * inv);
    }
  }
  return 0.0;
}

double CoefficientModel::k_ppp(double p) const {
  switch (kind_) {
    case CoefficientKind::Linear:
      return 0.0;
    case CoefficientKind::Pme:
      return pme_derivative(m_, p, 3);
    case CoefficientKind::Superslow: {
      if (p <= 0.0) throw std::domain_error("superslow k_ppp(p) requires p > 0");
      const double e = std::exp(-1.0 / p);
      const double inv = 1.0 / p;
      const double inv2 = inv * inv;
      const double inv4 = inv2 * inv2;
      return e * (inv4 * inv2 - 6.0 * inv4 * inv + 6.0 * inv4);
    }
  }
  return 0.0;
}

double CoefficientModel::evaluate(double p, int order) const {
  switch (order) {
    case 0:
      return k(p);
    case 1:
      return k_p(p);
    case 2:
      return k_pp(p);
    case 3:
      return k_ppp(p);
    default:
      throw std::invalid_argument("coefficient derivative order must be in 0..3, got " +
                                  std::to_string(order));
  }
}

void CoefficientModel::eval_k(std::span<const double> p, std::span<double> out) const {
  const std::size_t n = p.size();
  if (out.size() != n) throw std::invalid_argument("eval_k output size mismatch");
  switch (kind_) {
    case CoefficientKind::Linear:
      for (std::size_t i = 0; i < n; ++i) out[i] = p[i] > 0.0 ? p[i] : 0.0;
      return;
    case CoefficientKind::Pme:
      if (is_small_integer_exponent(m_, 1)) {
        for (std::size_t i = 0; i < n; ++i) out[i] = p[i] > 0.0 ? p[i] : 0.0;
      } else if (is_small_integer_exponent(m_, 2)) {
        for (std::size_t i = 0; i < n; ++i) {
          const double v = p[i] > 0.0 ? p[i] : 0.0;
          out[i] = v * v;
        }
      } else if (is_small_integer_exponent(m_, 3)) {
        for (std::size_t i = 0; i < n; ++i) {
          const double v = p[i] > 0.0 ? p[i] : 0.0;
          out[i] = v * v * v;
        }
      } else {
        for (std::size_t i = 0; i < n; ++i) {
          const double v = p[i] > 0.0 ? p[i] : 0.0;
          out[i] = std::pow(v, m_);
        }
      }
      return;
    case CoefficientKind::Superslow:
      for (std::size_t i = 0; i < n; ++i) {
        out[i] = p[i] > 0.0 ? std::exp(-1.0 / p[i]) : 0.0;
      }
      return;
  }
}

DegeneracyReport degeneracy_check(const CoefficientModel& model,
                                  std::span<const double> p_samples) {
  for (double p : p_samples) {
    if (!(p > 0.0)) throw std::invalid_argument("degeneracy_check samples must be > 0");
  }

  DegeneracyReport report;
  report.c_values.reserve(p_samples.size());
  bool all_below_one = true;
  for (double p : p_samples) {
    const double kp = model.k_p(p);
    if (kp == 0.0) {
      report.c_values.push_back(std::numeric_limits<double>::quiet_NaN());
      continue;  // C undefined here; excluded from the condition-2 decision
    }
    const double c = model.k(p) * model.k_pp(p) / (kp * kp);
    report.c_values.push_back(c);
    if (!(c < 1.0)) all_below_one = false;
  }
  report.condition2_ok = all_below_one;

  // Condition 1: k decays to zero along a decade sweep toward p = 0.
  bool decays = true;
  double prev = model.k(1.0);
  for (int j = 1; j <= 8; ++j) {
    const double kj = model.k(std::pow(10.0, -j));
    if (kj > prev) decays = false;
    prev = kj;
  }
  report.condition1_ok = decays && prev < 1e-6;
  return report;
}

}  // namespace gpme
